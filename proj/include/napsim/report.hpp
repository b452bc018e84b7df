#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace napsim {

struct Metrics;
struct PolicyConfig;
struct LinkConfig;
enum class PolicyKind;

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double value);

/// One emitted result row. Columns follow the v1 schema below.
struct CsvRow {
    std::string policy;
    int buffer_size = 0;
    double sleep_trigger = 0.0;
    double wake_threshold = 0.0;
    double rho = 0.0;
    double t_active = 0.0;
    double t_idle = 0.0;
    double t_sleep = 0.0;
    double t_transition = 0.0;
    std::uint64_t n_sleeps = 0;
    std::uint64_t n_transitions = 0;
    double energy = 0.0;
    double baseline = 0.0;
    double savings = 0.0;
    double mean_delay = 0.0;
    double added_delay = 0.0;
    double max_delay = 0.0;
    std::uint64_t drops = 0;
    std::uint64_t drops_while_sleeping = 0;
};

/// Provenance comment placed above the column header.
std::string csv_preamble(std::uint64_t seed, const std::string& trace_source);
std::string csv_header();
std::string csv_line(const CsvRow& row);

CsvRow make_row(const PolicyConfig& cfg, double rho, const Metrics& metrics,
                double control_mean_delay);

/// Per-metric plot data: one `<metric>.<policy>.dat` file per policy with
/// "B value" lines, plus a gnuplot script rendering one chart per metric.
void write_plot_data(const std::filesystem::path& dir, const std::vector<CsvRow>& rows);

} // namespace napsim
