#pragma once

#include <cstdint>
#include <vector>

#include "napsim/policy.hpp"
#include "napsim/trace.hpp"

namespace napsim {

/// Interface operating states. Legal transitions: idle<->active (instant),
/// idle/active -> sleeping, sleeping -> sleeping (re-sleep),
/// sleeping -> transitioning, transitioning -> active or idle.
enum class InterfaceState { active, idle, sleeping, transitioning };

std::string_view to_string(InterfaceState state);

/// Accumulated results of one run.
struct Metrics {
    StateTimes state_times;
    double duration = 0.0;  ///< s simulated (last departure or timer expiry)
    double energy = 0.0;    ///< J consumed by the managed interface
    double baseline = 0.0;  ///< J a never-sleep card would consume for the same work
    double savings = 0.0;   ///< 1 - energy/baseline (0 when baseline is 0)

    std::uint64_t arrivals = 0;
    std::uint64_t departures = 0;
    std::uint64_t drops = 0;
    std::uint64_t drops_by_state[4] = {}; ///< indexed by InterfaceState
    std::uint64_t final_queue = 0;

    double sum_delay = 0.0;  ///< s, arrival-to-departure, over departed packets
    double mean_delay = 0.0; ///< s
    double max_delay = 0.0;  ///< s

    std::uint64_t sleeps = 0;      ///< sleep timers started, re-sleeps included
    std::uint64_t transitions = 0; ///< sleeping -> transitioning edges

    std::uint64_t drops_while_sleeping() const {
        return drops_by_state[static_cast<int>(InterfaceState::sleeping)];
    }
};

/// Optional per-run event log used by tests to check ordering invariants.
struct RunRecorder {
    struct Interval {
        InterfaceState state;
        double begin;
        double end;
    };
    std::vector<std::uint64_t> departure_order; ///< packet ids, in departure order
    std::vector<double> departure_times;        ///< matching timestamps, seconds
    std::vector<Interval> intervals;            ///< contiguous state history
};

/// Simulate one interface fed by the trace from t = 0. Events at equal
/// timestamps are handled service-completion first, then timer expiry, then
/// arrival; arrivals with identical timestamps keep trace order. After the
/// last arrival the queue is drained (a timer expiry with queued traffic then
/// forces a wake-up) and the run ends at the final departure or timer expiry,
/// whichever is later.
Metrics run(const Trace& trace, const PolicyConfig& policy, const LinkConfig& link,
            const PowerVector& power, RunRecorder* recorder = nullptr);

/// Policy parameters that do not depend on the buffer size being swept.
struct SweepSpec {
    std::vector<PolicyKind> kinds;
    std::vector<int> buffer_sizes;
    double b_fraction = 0.1;
    double t_max = 2.5e-3;
    double confidence = 0.9;
    TmaxSemantics t_max_semantics = TmaxSemantics::cap;
    std::optional<int> starvation_bound = 3;
    bool parallel = true;
};

/// Expand one sweep cell into a full policy configuration:
/// b = b_fraction * B and q_w from the link's wake threshold.
PolicyConfig make_policy_config(PolicyKind kind, int buffer_size, const SweepSpec& spec,
                                const LinkConfig& link, const PowerVector& power);

struct SweepCell {
    PolicyKind kind;
    int buffer_size;
    Metrics metrics;
};

/// One independent run per (kind, B) pair on the shared trace. Cells may be
/// computed concurrently; the returned order is (kind, B) regardless.
std::vector<SweepCell> sweep(const Trace& trace, const SweepSpec& spec,
                             const LinkConfig& link, const PowerVector& power);

} // namespace napsim
