#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "napsim/estimator.hpp"
#include "napsim/power.hpp"

namespace napsim {

/// Selectable sleeping algorithm; `none` is the never-sleep control.
enum class PolicyKind { none, gupta_singh, enhanced, streamlined };

PolicyKind policy_kind_from_name(std::string_view name);
std::string_view to_string(PolicyKind kind);

/// How the t_max limit applies to computed sleep timers: `cap` clips long
/// timers down to t_max, `floor` stretches short timers up to it.
enum class TmaxSemantics { cap, floor };

struct PolicyConfig {
    PolicyKind kind = PolicyKind::none;
    int buffer_size = 350;      ///< B, packets
    double sleep_trigger = 35;  ///< b; Gupta-Singh sleeps while q < b
    double t_max = 2.5e-3;      ///< s
    double confidence = 0.9;
    double wake_threshold = 62.5; ///< q_w, packets (streamlined wake condition)
    TmaxSemantics t_max_semantics = TmaxSemantics::cap;
    /// Maximum consecutive re-sleeps the streamlined policy may take while
    /// traffic is queued before it must wake; nullopt removes the limit and
    /// lets the queue starve until q exceeds q_w.
    std::optional<int> starvation_bound = 3;

    void validate() const;
};

/// Decision returned by a policy at a decision point.
struct PolicyAction {
    enum class Kind { stay, sleep, wake };

    Kind kind = Kind::stay;
    double duration = 0.0; ///< sleep timer, seconds; set when kind == sleep

    static PolicyAction stay() { return {Kind::stay, 0.0}; }
    static PolicyAction sleep(double d) { return {Kind::sleep, d}; }
    static PolicyAction wake() { return {Kind::wake, 0.0}; }

    bool is_sleep() const { return kind == Kind::sleep; }
    bool is_wake() const { return kind == Kind::wake; }
    bool is_stay() const { return kind == Kind::stay; }
};

/// Apply the configured t_max limit to a computed sleep timer.
double bounded(double raw_timer, const PolicyConfig& cfg);

/// Fixed streamlined sleep interval:
/// max(t_delta * ((p_a - p_s)/(p_i - p_s) - 1), t_max).
double streamlined_interval(const PolicyConfig& cfg, const PowerVector& power);

// Pure decision functions, one per FSM edge family. Queue lengths count the
// in-service packet. Gupta-Singh evaluates its condition after departures and
// after arrivals that land on an idle interface; the empty-queue policies can
// only trigger on departures.

PolicyAction on_departure_gupta_singh(int queue_len, const RateEstimator& est,
                                      const PolicyConfig& cfg, const PowerVector& power);
PolicyAction on_timer_gupta_singh(int queue_len, double previous_sleep);

PolicyAction on_departure_enhanced(int queue_len, const RateEstimator& est,
                                   const SleepTable& table, const PolicyConfig& cfg,
                                   const PowerVector& power);
PolicyAction on_timer_enhanced(int queue_len, double previous_sleep);

PolicyAction on_departure_streamlined(int queue_len, const PolicyConfig& cfg,
                                      const PowerVector& power);
/// resleeps_with_traffic counts consecutive re-sleeps already taken with a
/// non-empty queue; the starvation bound converts the next one into a wake.
PolicyAction on_timer_streamlined(int queue_len, const PolicyConfig& cfg,
                                  const PowerVector& power, int resleeps_with_traffic);

/// Stateful wrapper binding one policy to one interface. Remembers the last
/// sleep length so a timer expiry with an empty queue restarts an interval of
/// identical length, and tracks the streamlined starvation counter.
class Policy {
public:
    Policy(const PolicyConfig& cfg, const PowerVector& power);

    PolicyAction on_departure(int queue_len, const RateEstimator& est);
    PolicyAction on_arrival_while_idle(int queue_len, const RateEstimator& est);
    PolicyAction on_timer(int queue_len);

    const PolicyConfig& config() const { return cfg_; }

private:
    PolicyAction record(PolicyAction action);

    PolicyConfig cfg_;
    PowerVector power_;
    SleepTable table_{};              // enhanced only; k = floor(b)
    bool table_valid_ = false;
    double previous_sleep_ = 0.0;
    int resleeps_with_traffic_ = 0;
};

} // namespace napsim
