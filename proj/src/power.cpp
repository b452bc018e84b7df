#include "napsim/power.hpp"

#include <string>

namespace napsim {

void PowerVector::validate() const {
    if (!(p_active >= p_idle))
        throw config_error("power: p_active must be >= p_idle");
    if (!(p_idle > p_sleep))
        throw config_error("power: p_idle must be > p_sleep");
    if (!(p_sleep >= 0.0))
        throw config_error("power: p_sleep must be >= 0");
    if (!(t_delta > 0.0))
        throw config_error("power: t_delta must be > 0");
}

double min_profitable_sleep(const PowerVector& power) {
    if (!(power.p_idle > power.p_sleep))
        throw config_error("min_profitable_sleep: requires p_idle > p_sleep");
    return power.t_delta * (power.p_active - power.p_sleep) / (power.p_idle - power.p_sleep);
}

double wake_threshold(double capacity_bps, double t_delta_s, double packet_size_bytes) {
    if (!(capacity_bps > 0.0))
        throw config_error("wake_threshold: capacity must be > 0");
    if (!(packet_size_bytes > 0.0))
        throw config_error("wake_threshold: packet size must be > 0");
    if (t_delta_s < 0.0)
        throw config_error("wake_threshold: t_delta must be >= 0");
    return capacity_bps * t_delta_s / (8.0 * packet_size_bytes);
}

double energy_of(const StateTimes& times, const PowerVector& power) {
    return times.active * power.p_active + times.transitioning * power.p_active +
           times.idle * power.p_idle + times.sleeping * power.p_sleep;
}

double baseline_energy(double busy_s, double total_s, const PowerVector& power) {
    if (busy_s < 0.0 || busy_s > total_s)
        throw config_error("baseline_energy: requires 0 <= busy <= total");
    return busy_s * power.p_active + (total_s - busy_s) * power.p_idle;
}

double savings(double managed_joules, double baseline_joules) {
    if (!(baseline_joules > 0.0))
        throw config_error("savings: baseline energy must be > 0");
    return 1.0 - managed_joules / baseline_joules;
}

} // namespace napsim
