#pragma once

#include "napsim/errors.hpp"

namespace napsim {

/// Per-state power draw of one network interface, plus the duration of the
/// sleep-to-awake resynchronization. The transition is billed at active power;
/// all other state changes are instantaneous and free.
struct PowerVector {
    double p_active = 2.0;   ///< W while transmitting (and while transitioning)
    double p_idle = 1.0;     ///< W while awake but not transmitting
    double p_sleep = 0.1;    ///< W while asleep
    double t_delta = 0.5e-3; ///< s spent resynchronizing after a wake-up

    /// Requires p_active >= p_idle > p_sleep >= 0 and t_delta > 0.
    void validate() const;
};

/// Cumulative seconds spent in each interface state over one run.
struct StateTimes {
    double active = 0.0;
    double idle = 0.0;
    double sleeping = 0.0;
    double transitioning = 0.0;

    double total() const { return active + idle + sleeping + transitioning; }
};

/// Shortest sleep span that saves energy over staying idle:
/// t_delta * (p_active - p_sleep) / (p_idle - p_sleep).
/// Sleeping for any span strictly above this beats idling for the same span.
double min_profitable_sleep(const PowerVector& power);

/// Queue length (in packets, possibly fractional) whose transmission time
/// equals the wake-up transition: capacity * t_delta / (8 * packet_size).
double wake_threshold(double capacity_bps, double t_delta_s, double packet_size_bytes);

/// Energy in joules for a state-time decomposition. Transitioning is billed
/// at active power.
double energy_of(const StateTimes& times, const PowerVector& power);

/// Energy a card that never sleeps would need for the same work: busy seconds
/// at active power, the rest of the run at idle power.
double baseline_energy(double busy_s, double total_s, const PowerVector& power);

/// Fraction of the baseline energy saved, 1 - managed/baseline. Negative when
/// power management costs more than it saves.
double savings(double managed_joules, double baseline_joules);

} // namespace napsim
