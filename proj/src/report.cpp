#include "napsim/report.hpp"

#include <charconv>
#include <fstream>
#include <map>

#include "napsim/engine.hpp"

namespace napsim {

std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

std::string csv_preamble(std::uint64_t seed, const std::string& trace_source) {
    return "# napsim-csv v1 seed=" + std::to_string(seed) + " trace=" + trace_source + "\n";
}

std::string csv_header() {
    return "policy,B,b,q_w,rho,t_active_s,t_idle_s,t_sleep_s,t_transition_s,"
           "n_sleeps,n_transitions,energy_J,baseline_J,savings_frac,"
           "mean_delay_s,added_delay_s,max_delay_s,drops,drops_while_sleeping\n";
}

std::string csv_line(const CsvRow& r) {
    std::string line;
    line.reserve(256);
    line += r.policy;
    line += ',';
    line += std::to_string(r.buffer_size);
    line += ',';
    line += format_double(r.sleep_trigger);
    line += ',';
    line += format_double(r.wake_threshold);
    line += ',';
    line += format_double(r.rho);
    line += ',';
    line += format_double(r.t_active);
    line += ',';
    line += format_double(r.t_idle);
    line += ',';
    line += format_double(r.t_sleep);
    line += ',';
    line += format_double(r.t_transition);
    line += ',';
    line += std::to_string(r.n_sleeps);
    line += ',';
    line += std::to_string(r.n_transitions);
    line += ',';
    line += format_double(r.energy);
    line += ',';
    line += format_double(r.baseline);
    line += ',';
    line += format_double(r.savings);
    line += ',';
    line += format_double(r.mean_delay);
    line += ',';
    line += format_double(r.added_delay);
    line += ',';
    line += format_double(r.max_delay);
    line += ',';
    line += std::to_string(r.drops);
    line += ',';
    line += std::to_string(r.drops_while_sleeping);
    line += '\n';
    return line;
}

CsvRow make_row(const PolicyConfig& cfg, double rho, const Metrics& m,
                double control_mean_delay) {
    CsvRow row;
    row.policy = std::string(to_string(cfg.kind));
    row.buffer_size = cfg.buffer_size;
    row.sleep_trigger = cfg.sleep_trigger;
    row.wake_threshold = cfg.wake_threshold;
    row.rho = rho;
    row.t_active = m.state_times.active;
    row.t_idle = m.state_times.idle;
    row.t_sleep = m.state_times.sleeping;
    row.t_transition = m.state_times.transitioning;
    row.n_sleeps = m.sleeps;
    row.n_transitions = m.transitions;
    row.energy = m.energy;
    row.baseline = m.baseline;
    row.savings = m.savings;
    row.mean_delay = m.mean_delay;
    row.added_delay = cfg.kind == PolicyKind::none ? 0.0 : m.mean_delay - control_mean_delay;
    row.max_delay = m.max_delay;
    row.drops = m.drops;
    row.drops_while_sleeping = m.drops_while_sleeping();
    return row;
}

void write_plot_data(const std::filesystem::path& dir, const std::vector<CsvRow>& rows) {
    struct MetricColumn {
        const char* name;
        double (*get)(const CsvRow&);
    };
    static const MetricColumn columns[] = {
        {"savings_frac", [](const CsvRow& r) { return r.savings; }},
        {"t_sleep_s", [](const CsvRow& r) { return r.t_sleep; }},
        {"t_transition_s", [](const CsvRow& r) { return r.t_transition; }},
        {"t_active_s", [](const CsvRow& r) { return r.t_active; }},
        {"mean_delay_s", [](const CsvRow& r) { return r.mean_delay; }},
        {"added_delay_s", [](const CsvRow& r) { return r.added_delay; }},
        {"drops", [](const CsvRow& r) { return static_cast<double>(r.drops); }},
    };

    std::filesystem::create_directories(dir);
    std::map<std::string, std::vector<const CsvRow*>> by_policy;
    for (const CsvRow& row : rows)
        by_policy[row.policy].push_back(&row);

    for (const auto& column : columns) {
        for (const auto& [policy, policy_rows] : by_policy) {
            std::ofstream out(dir / (std::string(column.name) + "." + policy + ".dat"));
            if (!out)
                throw io_error("cannot write plot data under '" + dir.string() + "'");
            out << "# B " << column.name << '\n';
            for (const CsvRow* row : policy_rows)
                out << row->buffer_size << ' ' << format_double(column.get(*row)) << '\n';
        }
    }

    std::ofstream gp(dir / "plot.gp");
    if (!gp)
        throw io_error("cannot write plot script under '" + dir.string() + "'");
    gp << "# gnuplot script: one chart per metric, one series per policy\n"
          "set terminal pngcairo size 900,600\n"
          "set key outside\n"
          "set xlabel 'buffer size B (packets)'\n";
    for (const auto& column : columns) {
        gp << "set output '" << column.name << ".png'\n";
        gp << "set ylabel '" << column.name << "'\n";
        gp << "plot";
        bool first = true;
        for (const auto& [policy, policy_rows] : by_policy) {
            gp << (first ? " " : ", ") << "'" << column.name << "." << policy
               << ".dat' using 1:2 with linespoints title '" << policy << "'";
            first = false;
        }
        gp << "\n";
    }
}

} // namespace napsim
