// napsim command line: single runs, buffer sweeps, trace generation and the
// sleep-time solver. All randomness flows from --seed (or NAPSIM_SEED); two
// invocations with identical flags produce byte-identical output.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "napsim/engine.hpp"
#include "napsim/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct CommonOpts {
    double p_active = 2.0;
    double p_idle = 1.0;
    double p_sleep = 0.1;
    double t_delta = 0.5e-3;
    double capacity = 1e9;
    double packet_size = 1000.0;
    double b_frac = 0.1;
    double t_max = 2.5e-3;
    double confidence = 0.9;
    std::string t_max_semantics = "cap";
    int starvation_bound = 3; // 0 disables the bound
    std::string trace_path;
    double gen_rho = 0.0;
    double duration = 10.0;
    std::uint64_t seed = 42;
    std::string out = "-";

    napsim::PowerVector power() const { return {p_active, p_idle, p_sleep, t_delta}; }

    napsim::LinkConfig link(int buffer) const { return {capacity, packet_size, buffer}; }

    napsim::SweepSpec sweep_spec() const {
        napsim::SweepSpec spec;
        spec.b_fraction = b_frac;
        spec.t_max = t_max;
        spec.confidence = confidence;
        spec.t_max_semantics = t_max_semantics == "floor" ? napsim::TmaxSemantics::floor
                                                          : napsim::TmaxSemantics::cap;
        spec.starvation_bound =
            starvation_bound > 0 ? std::optional<int>(starvation_bound) : std::nullopt;
        return spec;
    }
};

void add_power_link_options(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--pa", opts.p_active, "Active (transmit) power, W")->capture_default_str();
    cmd->add_option("--pi", opts.p_idle, "Idle power, W")->capture_default_str();
    cmd->add_option("--ps", opts.p_sleep, "Sleeping power, W")->capture_default_str();
    cmd->add_option("--tdelta", opts.t_delta, "Sleep-to-awake transition time, s")
        ->capture_default_str();
    cmd->add_option("--capacity", opts.capacity, "Link capacity, bits/s")->capture_default_str();
    cmd->add_option("--packet-size", opts.packet_size, "Packet size, bytes")
        ->capture_default_str();
}

void add_policy_options(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--b-frac", opts.b_frac, "Sleep trigger b as a fraction of B")
        ->capture_default_str();
    cmd->add_option("--tmax", opts.t_max, "Sleep interval limit t_max, s")->capture_default_str();
    cmd->add_option("--confidence", opts.confidence, "Sleep-time confidence level")
        ->capture_default_str();
    cmd->add_option("--tmax-semantics", opts.t_max_semantics,
                    "How t_max limits computed timers")
        ->check(CLI::IsMember({"cap", "floor"}))
        ->capture_default_str();
    cmd->add_option("--starvation-bound", opts.starvation_bound,
                    "Max consecutive streamlined re-sleeps with queued traffic (0 = unlimited)")
        ->check(CLI::Range(0, 1000000))
        ->capture_default_str();
}

void add_trace_options(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--trace", opts.trace_path, "Arrival trace file");
    cmd->add_option("--gen-rho", opts.gen_rho,
                    "Generate a Poisson trace with this occupation factor");
    cmd->add_option("--duration", opts.duration, "Generated trace duration, s")
        ->capture_default_str();
    cmd->add_option("--seed", opts.seed, "Random seed for trace generation")
        ->envname("NAPSIM_SEED")
        ->capture_default_str();
}

napsim::Trace obtain_trace(const CommonOpts& opts) {
    if (!opts.trace_path.empty() && opts.gen_rho > 0.0)
        throw napsim::config_error("--trace and --gen-rho are mutually exclusive");
    if (!opts.trace_path.empty())
        return napsim::load_trace(opts.trace_path);
    if (opts.gen_rho > 0.0) {
        double rate = opts.gen_rho * opts.capacity / (8.0 * opts.packet_size);
        return napsim::gen_poisson(rate, opts.duration, opts.seed);
    }
    throw napsim::config_error("a trace is required: pass --trace PATH or --gen-rho R");
}

void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw napsim::io_error("cannot open output file '" + path + "'");
    out << content;
}

std::vector<napsim::PolicyKind> parse_kinds(const std::vector<std::string>& names) {
    std::vector<napsim::PolicyKind> kinds;
    for (const std::string& name : names) {
        napsim::PolicyKind kind = napsim::policy_kind_from_name(name);
        if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
            kinds.push_back(kind);
    }
    // Fixed emission order regardless of the order on the command line.
    std::sort(kinds.begin(), kinds.end(),
              [](auto a, auto b) { return static_cast<int>(a) < static_cast<int>(b); });
    return kinds;
}

bool contains(const std::vector<napsim::PolicyKind>& kinds, napsim::PolicyKind kind) {
    return std::find(kinds.begin(), kinds.end(), kind) != kinds.end();
}

void warn_small_streamlined_buffer(const std::vector<napsim::PolicyKind>& kinds,
                                   const std::vector<int>& buffers, const CommonOpts& opts) {
    if (!contains(kinds, napsim::PolicyKind::streamlined))
        return;
    double q_w = napsim::wake_threshold(opts.capacity, opts.t_delta, opts.packet_size);
    for (int b : buffers) {
        if (static_cast<double>(b) <= q_w) {
            std::cerr << "warning: buffer B=" << b << " does not exceed the streamlined wake"
                      << " threshold q_w=" << napsim::format_double(q_w)
                      << "; the policy needs B well above q_w\n";
        }
    }
}

struct Report {
    std::string csv;
    std::vector<napsim::CsvRow> rows;
};

Report build_report(const CommonOpts& opts, const napsim::Trace& trace,
                    const std::vector<napsim::PolicyKind>& emit_kinds,
                    const std::vector<int>& buffers) {
    napsim::SweepSpec spec = opts.sweep_spec();
    spec.buffer_sizes = buffers;
    spec.kinds = emit_kinds;
    if (!contains(spec.kinds, napsim::PolicyKind::none))
        spec.kinds.insert(spec.kinds.begin(), napsim::PolicyKind::none); // for added delay

    napsim::PowerVector power = opts.power();
    napsim::LinkConfig link = opts.link(buffers.front());
    std::vector<napsim::SweepCell> cells = napsim::sweep(trace, spec, link, power);

    double rho = 0.0;
    if (trace.arrivals.size() >= 2 && trace.arrivals.back() > trace.arrivals.front())
        rho = napsim::occupancy_of(trace, link);

    std::map<int, double> control_mean_delay;
    for (const napsim::SweepCell& cell : cells)
        if (cell.kind == napsim::PolicyKind::none)
            control_mean_delay[cell.buffer_size] = cell.metrics.mean_delay;

    Report report;
    report.csv = napsim::csv_preamble(opts.seed, trace.source) + napsim::csv_header();
    for (const napsim::SweepCell& cell : cells) {
        if (!contains(emit_kinds, cell.kind))
            continue;
        napsim::LinkConfig cell_link = opts.link(cell.buffer_size);
        napsim::PolicyConfig cfg =
            napsim::make_policy_config(cell.kind, cell.buffer_size, spec, cell_link, power);
        report.rows.push_back(
            napsim::make_row(cfg, rho, cell.metrics, control_mean_delay.at(cell.buffer_size)));
        report.csv += napsim::csv_line(report.rows.back());
    }
    return report;
}

int run_simulate(CommonOpts& opts, std::vector<std::string>& policy_names, int buffer) {
    std::vector<napsim::PolicyKind> kinds = parse_kinds(policy_names);
    if (!contains(kinds, napsim::PolicyKind::none))
        kinds.insert(kinds.begin(), napsim::PolicyKind::none); // control row always emitted

    napsim::Trace trace = obtain_trace(opts);
    warn_small_streamlined_buffer(kinds, {buffer}, opts);
    write_output(opts.out, build_report(opts, trace, kinds, {buffer}).csv);
    return kExitOk;
}

int run_sweep(CommonOpts& opts, std::vector<std::string>& policy_names,
              std::vector<int>& buffers, const std::string& plot_dir) {
    std::vector<napsim::PolicyKind> kinds = parse_kinds(policy_names);
    napsim::Trace trace = obtain_trace(opts);
    warn_small_streamlined_buffer(kinds, buffers, opts);
    Report report = build_report(opts, trace, kinds, buffers);
    write_output(opts.out, report.csv);
    if (!plot_dir.empty())
        napsim::write_plot_data(plot_dir, report.rows);
    return kExitOk;
}

int run_gen_trace(CommonOpts& opts) {
    if (opts.gen_rho <= 0.0)
        throw napsim::config_error("gen-trace requires --gen-rho > 0");
    double rate = opts.gen_rho * opts.capacity / (8.0 * opts.packet_size);
    napsim::Trace trace = napsim::gen_poisson(rate, opts.duration, opts.seed);
    write_output(opts.out, napsim::serialize_trace(trace));
    return kExitOk;
}

int run_solve(int k, double lambda, double confidence) {
    if (lambda > 0.0) {
        std::cout << napsim::format_double(napsim::solve_sleep_time(k, lambda, confidence))
                  << '\n';
        return kExitOk;
    }
    std::cout << "# k c_k  (sleep time = c_k / lambda, confidence="
              << napsim::format_double(confidence) << ")\n";
    for (int i = 1; i <= k; ++i) {
        napsim::SleepTable table = napsim::build_sleep_table(i, confidence);
        std::cout << i << ' ' << napsim::format_double(table.c_k) << '\n';
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"napsim: opportunistic network-interface sleeping simulator"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* simulate = app.add_subcommand("simulate", "Run one trace at a fixed buffer size");
    std::vector<std::string> sim_policies = {"gupta-singh", "enhanced", "streamlined"};
    int sim_buffer = 350;
    simulate->add_option("--policy", sim_policies, "Policy (repeatable)")
        ->check(CLI::IsMember({"gupta-singh", "enhanced", "streamlined", "none"}))
        ->capture_default_str();
    simulate->add_option("--buffer", sim_buffer, "Buffer size B, packets")->capture_default_str();
    add_power_link_options(simulate, opts);
    add_policy_options(simulate, opts);
    add_trace_options(simulate, opts);
    simulate->add_option("--out", opts.out, "Output path ('-' = stdout)")->capture_default_str();

    auto* sweep_cmd = app.add_subcommand("sweep", "Run a grid of policies x buffer sizes");
    std::vector<std::string> sweep_policies = {"none", "gupta-singh", "enhanced", "streamlined"};
    std::vector<int> sweep_buffers = {25,  50,  75,  100, 125, 150, 175,
                                      200, 225, 250, 275, 300, 325, 350};
    std::string plot_dir;
    sweep_cmd->add_option("--policy", sweep_policies, "Policy (repeatable)")
        ->check(CLI::IsMember({"gupta-singh", "enhanced", "streamlined", "none"}))
        ->capture_default_str();
    sweep_cmd->add_option("--buffer-sweep", sweep_buffers, "Buffer sizes, packets")
        ->delimiter(',')
        ->capture_default_str();
    sweep_cmd->add_option("--plot-dir", plot_dir, "Also write per-metric plot data here");
    add_power_link_options(sweep_cmd, opts);
    add_policy_options(sweep_cmd, opts);
    add_trace_options(sweep_cmd, opts);
    sweep_cmd->add_option("--out", opts.out, "Output path ('-' = stdout)")->capture_default_str();

    auto* gen = app.add_subcommand("gen-trace", "Generate a seeded Poisson arrival trace");
    add_power_link_options(gen, opts);
    add_trace_options(gen, opts);
    gen->add_option("--out", opts.out, "Output path ('-' = stdout)")->capture_default_str();

    auto* solve = app.add_subcommand("solve", "Sleep-time solver and pre-load tables");
    int solve_k = 0;
    double solve_lambda = 0.0;
    double solve_confidence = 0.9;
    solve->add_option("--k", solve_k, "Spare queue capacity (packets)")
        ->required()
        ->check(CLI::Range(1, 100000));
    solve->add_option("--lambda", solve_lambda, "Arrival rate, packets/s");
    solve->add_option("--confidence", solve_confidence, "Confidence level")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
        if (simulate->parsed())
            return run_simulate(opts, sim_policies, sim_buffer);
        if (sweep_cmd->parsed())
            return run_sweep(opts, sweep_policies, sweep_buffers, plot_dir);
        if (gen->parsed())
            return run_gen_trace(opts);
        if (solve->parsed())
            return run_solve(solve_k, solve_lambda, solve_confidence);
        return kExitConfig;
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    } catch (const napsim::io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const napsim::config_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}
