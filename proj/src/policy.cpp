#include "napsim/policy.hpp"

#include <algorithm>
#include <cmath>

namespace napsim {

PolicyKind policy_kind_from_name(std::string_view name) {
    if (name == "none")
        return PolicyKind::none;
    if (name == "gupta-singh")
        return PolicyKind::gupta_singh;
    if (name == "enhanced")
        return PolicyKind::enhanced;
    if (name == "streamlined")
        return PolicyKind::streamlined;
    throw config_error("unknown policy '" + std::string(name) + "'");
}

std::string_view to_string(PolicyKind kind) {
    switch (kind) {
    case PolicyKind::none: return "none";
    case PolicyKind::gupta_singh: return "gupta-singh";
    case PolicyKind::enhanced: return "enhanced";
    case PolicyKind::streamlined: return "streamlined";
    }
    return "?";
}

void PolicyConfig::validate() const {
    if (buffer_size < 1)
        throw config_error("policy: buffer size must be >= 1");
    if (kind == PolicyKind::gupta_singh || kind == PolicyKind::enhanced) {
        if (!(sleep_trigger > 0.0) || sleep_trigger > static_cast<double>(buffer_size))
            throw config_error("policy: sleep trigger b must satisfy 0 < b <= B");
    }
    if (!(t_max > 0.0))
        throw config_error("policy: t_max must be > 0");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw config_error("policy: confidence must be in (0, 1)");
    if (kind == PolicyKind::streamlined && wake_threshold < 0.0)
        throw config_error("policy: wake threshold must be >= 0");
    if (starvation_bound && *starvation_bound < 1)
        throw config_error("policy: starvation bound must be >= 1");
}

double bounded(double raw_timer, const PolicyConfig& cfg) {
    return cfg.t_max_semantics == TmaxSemantics::cap ? std::min(raw_timer, cfg.t_max)
                                                     : std::max(raw_timer, cfg.t_max);
}

double streamlined_interval(const PolicyConfig& cfg, const PowerVector& power) {
    double ratio = (power.p_active - power.p_sleep) / (power.p_idle - power.p_sleep);
    return std::max(power.t_delta * (ratio - 1.0), cfg.t_max);
}

PolicyAction on_departure_gupta_singh(int queue_len, const RateEstimator& est,
                                      const PolicyConfig& cfg, const PowerVector& power) {
    if (!(static_cast<double>(queue_len) < cfg.sleep_trigger))
        return PolicyAction::stay();
    auto lambda = est.current_rate();
    if (!lambda)
        return PolicyAction::stay();
    // Spare queue slots below b; a fractional trigger can leave none.
    int k = static_cast<int>(std::floor(cfg.sleep_trigger - static_cast<double>(queue_len)));
    if (k < 1)
        return PolicyAction::stay();
    double t_s = solve_sleep_time(k, *lambda, cfg.confidence);
    if (!(t_s > power.t_delta))
        return PolicyAction::stay();
    return PolicyAction::sleep(bounded(t_s - power.t_delta, cfg));
}

PolicyAction on_timer_gupta_singh(int queue_len, double previous_sleep) {
    if (queue_len == 0)
        return PolicyAction::sleep(previous_sleep);
    return PolicyAction::wake();
}

PolicyAction on_departure_enhanced(int queue_len, const RateEstimator& est,
                                   const SleepTable& table, const PolicyConfig& cfg,
                                   const PowerVector& power) {
    if (queue_len != 0)
        return PolicyAction::stay();
    auto lambda = est.current_rate();
    if (!lambda)
        return PolicyAction::stay();
    double t_s = table.sleep_time(*lambda);
    if (!(t_s >= min_profitable_sleep(power)))
        return PolicyAction::stay();
    double timer = t_s - power.t_delta;
    if (!(timer > 0.0))
        return PolicyAction::stay();
    return PolicyAction::sleep(bounded(timer, cfg));
}

PolicyAction on_timer_enhanced(int queue_len, double previous_sleep) {
    return on_timer_gupta_singh(queue_len, previous_sleep);
}

PolicyAction on_departure_streamlined(int queue_len, const PolicyConfig& cfg,
                                      const PowerVector& power) {
    if (queue_len != 0)
        return PolicyAction::stay();
    return PolicyAction::sleep(streamlined_interval(cfg, power));
}

PolicyAction on_timer_streamlined(int queue_len, const PolicyConfig& cfg,
                                  const PowerVector& power, int resleeps_with_traffic) {
    if (static_cast<double>(queue_len) > cfg.wake_threshold)
        return PolicyAction::wake();
    if (queue_len > 0 && cfg.starvation_bound &&
        resleeps_with_traffic + 1 >= *cfg.starvation_bound)
        return PolicyAction::wake();
    return PolicyAction::sleep(streamlined_interval(cfg, power));
}

Policy::Policy(const PolicyConfig& cfg, const PowerVector& power) : cfg_(cfg), power_(power) {
    cfg_.validate();
    power_.validate();
    if (cfg_.kind == PolicyKind::enhanced) {
        int k = static_cast<int>(std::floor(cfg_.sleep_trigger));
        if (k >= 1) {
            table_ = build_sleep_table(k, cfg_.confidence);
            table_valid_ = true;
        }
    }
}

PolicyAction Policy::record(PolicyAction action) {
    if (action.is_sleep()) {
        previous_sleep_ = action.duration;
        resleeps_with_traffic_ = 0;
    }
    return action;
}

PolicyAction Policy::on_departure(int queue_len, const RateEstimator& est) {
    switch (cfg_.kind) {
    case PolicyKind::none:
        return PolicyAction::stay();
    case PolicyKind::gupta_singh:
        return record(on_departure_gupta_singh(queue_len, est, cfg_, power_));
    case PolicyKind::enhanced:
        if (!table_valid_)
            return PolicyAction::stay();
        return record(on_departure_enhanced(queue_len, est, table_, cfg_, power_));
    case PolicyKind::streamlined:
        return record(on_departure_streamlined(queue_len, cfg_, power_));
    }
    return PolicyAction::stay();
}

PolicyAction Policy::on_arrival_while_idle(int queue_len, const RateEstimator& est) {
    // Only Gupta-Singh can newly satisfy its sleep condition on an arrival;
    // the empty-queue policies cannot (the arrival just made q nonzero).
    if (cfg_.kind != PolicyKind::gupta_singh)
        return PolicyAction::stay();
    return record(on_departure_gupta_singh(queue_len, est, cfg_, power_));
}

PolicyAction Policy::on_timer(int queue_len) {
    switch (cfg_.kind) {
    case PolicyKind::none:
        return PolicyAction::stay();
    case PolicyKind::gupta_singh:
        return on_timer_gupta_singh(queue_len, previous_sleep_);
    case PolicyKind::enhanced:
        return on_timer_enhanced(queue_len, previous_sleep_);
    case PolicyKind::streamlined: {
        PolicyAction action =
            on_timer_streamlined(queue_len, cfg_, power_, resleeps_with_traffic_);
        if (action.is_wake() || queue_len == 0)
            resleeps_with_traffic_ = 0;
        else if (action.is_sleep())
            ++resleeps_with_traffic_;
        return action;
    }
    }
    return PolicyAction::stay();
}

} // namespace napsim
