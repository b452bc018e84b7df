#include "napsim/engine.hpp"

#include <atomic>
#include <cmath>
#include <deque>
#include <limits>
#include <mutex>
#include <thread>

namespace napsim {

std::string_view to_string(InterfaceState state) {
    switch (state) {
    case InterfaceState::active: return "active";
    case InterfaceState::idle: return "idle";
    case InterfaceState::sleeping: return "sleeping";
    case InterfaceState::transitioning: return "transitioning";
    }
    return "?";
}

namespace {

struct Packet {
    std::uint64_t id;
    double arrival;
    double size; // bytes
};

class Simulation {
public:
    Simulation(const Trace& trace, const PolicyConfig& cfg, const LinkConfig& link,
               const PowerVector& power, RunRecorder* recorder)
        : trace_(trace), link_(link), power_(power), policy_(cfg, power),
          recorder_(recorder) {}

    Metrics execute();

private:
    enum class Event { service, timer, arrival, done };

    Event next_event(double& when) const {
        // Tie order at equal timestamps: service < timer < arrival. A service
        // completion and a timer can never be pending at once (the interface
        // serves only while active).
        double t_service = in_service_ ? service_end_ : inf();
        double t_timer = timer_armed_ ? timer_end_ : inf();
        double t_arrival =
            next_arrival_ < trace_.arrivals.size() ? trace_.arrivals[next_arrival_] : inf();
        if (in_service_ && t_service <= t_timer && t_service <= t_arrival) {
            when = t_service;
            return Event::service;
        }
        if (timer_armed_ && t_timer <= t_arrival) {
            when = t_timer;
            return Event::timer;
        }
        if (next_arrival_ < trace_.arrivals.size()) {
            when = t_arrival;
            return Event::arrival;
        }
        return Event::done;
    }

    static double inf() { return std::numeric_limits<double>::infinity(); }

    void advance_to(double t) {
        double elapsed = t - now_;
        switch (state_) {
        case InterfaceState::active: times_.active += elapsed; break;
        case InterfaceState::idle: times_.idle += elapsed; break;
        case InterfaceState::sleeping: times_.sleeping += elapsed; break;
        case InterfaceState::transitioning: times_.transitioning += elapsed; break;
        }
        now_ = t;
    }

    void switch_state(InterfaceState next) {
        if (next == state_)
            return;
        if (recorder_ && now_ > state_enter_)
            recorder_->intervals.push_back({state_, state_enter_, now_});
        state_ = next;
        state_enter_ = now_;
    }

    void start_service() {
        in_service_ = true;
        service_end_ = now_ + link_.service_time_for(queue_.front().size);
    }

    void enter_sleep(double duration) {
        switch_state(InterfaceState::sleeping);
        ++metrics_.sleeps;
        timer_armed_ = true;
        timer_end_ = now_ + duration;
    }

    void begin_work_or_idle() {
        if (!queue_.empty()) {
            switch_state(InterfaceState::active);
            start_service();
        } else {
            switch_state(InterfaceState::idle);
        }
    }

    void handle_service_complete() {
        const Packet pkt = queue_.front();
        queue_.pop_front();
        in_service_ = false;
        ++metrics_.departures;
        double delay = now_ - pkt.arrival;
        metrics_.sum_delay += delay;
        metrics_.max_delay = std::max(metrics_.max_delay, delay);
        if (recorder_) {
            recorder_->departure_order.push_back(pkt.id);
            recorder_->departure_times.push_back(now_);
        }

        PolicyAction action = policy_.on_departure(static_cast<int>(queue_.size()), estimator_);
        if (action.is_sleep())
            enter_sleep(action.duration);
        else
            begin_work_or_idle();
    }

    void handle_timer() {
        timer_armed_ = false;
        if (state_ == InterfaceState::transitioning) {
            begin_work_or_idle();
            return;
        }
        // Sleeping timer expired.
        bool trace_done = next_arrival_ >= trace_.arrivals.size();
        if (trace_done && queue_.empty()) {
            finished_ = true; // the policy would only re-sleep from here on
            return;
        }
        // Past the last arrival the queue is flushed regardless of the policy.
        PolicyAction action = trace_done ? PolicyAction::wake()
                                         : policy_.on_timer(static_cast<int>(queue_.size()));
        if (action.is_sleep()) {
            ++metrics_.sleeps;
            timer_armed_ = true;
            timer_end_ = now_ + action.duration;
        } else {
            switch_state(InterfaceState::transitioning);
            ++metrics_.transitions;
            timer_armed_ = true;
            timer_end_ = now_ + power_.t_delta;
        }
    }

    void handle_arrival() {
        std::uint64_t id = next_arrival_;
        double t = trace_.arrivals[next_arrival_];
        double size = trace_.sizes.empty() ? link_.packet_size : trace_.sizes[next_arrival_];
        ++next_arrival_;
        ++metrics_.arrivals;

        if (queue_.size() >= static_cast<std::size_t>(link_.buffer_size)) {
            ++metrics_.drops;
            ++metrics_.drops_by_state[static_cast<int>(state_)];
            return;
        }
        queue_.push_back({id, t, size});
        estimator_.observe_arrival(t);
        if (state_ == InterfaceState::idle) {
            PolicyAction action =
                policy_.on_arrival_while_idle(static_cast<int>(queue_.size()), estimator_);
            if (action.is_sleep()) {
                enter_sleep(action.duration);
            } else {
                switch_state(InterfaceState::active);
                start_service();
            }
        }
    }

    const Trace& trace_;
    const LinkConfig& link_;
    const PowerVector& power_;
    Policy policy_;
    RunRecorder* recorder_;

    RateEstimator estimator_;
    std::deque<Packet> queue_;
    InterfaceState state_ = InterfaceState::idle;
    double state_enter_ = 0.0;
    double now_ = 0.0;
    StateTimes times_;
    Metrics metrics_;
    std::size_t next_arrival_ = 0;
    bool in_service_ = false;
    double service_end_ = 0.0;
    bool timer_armed_ = false;
    double timer_end_ = 0.0;
    bool finished_ = false;
};

Metrics Simulation::execute() {
    for (;;) {
        double when = 0.0;
        Event ev = next_event(when);
        if (ev == Event::done)
            break;
        advance_to(when);
        switch (ev) {
        case Event::service: handle_service_complete(); break;
        case Event::timer: handle_timer(); break;
        case Event::arrival: handle_arrival(); break;
        case Event::done: break;
        }
        if (finished_)
            break;
    }
    if (recorder_ && now_ > state_enter_)
        recorder_->intervals.push_back({state_, state_enter_, now_});

    metrics_.state_times = times_;
    metrics_.duration = now_;
    metrics_.final_queue = queue_.size();
    metrics_.energy = energy_of(times_, power_);
    // Same form as baseline_energy(active, total) but with the non-busy time
    // taken directly from the state decomposition, so the never-sleep control
    // compares exactly equal to its own baseline.
    metrics_.baseline = times_.active * power_.p_active +
                        (times_.idle + times_.sleeping + times_.transitioning) * power_.p_idle;
    metrics_.savings = metrics_.baseline > 0.0 ? savings(metrics_.energy, metrics_.baseline) : 0.0;
    metrics_.mean_delay =
        metrics_.departures > 0 ? metrics_.sum_delay / static_cast<double>(metrics_.departures)
                                : 0.0;
    return metrics_;
}

} // namespace

Metrics run(const Trace& trace, const PolicyConfig& policy, const LinkConfig& link,
            const PowerVector& power, RunRecorder* recorder) {
    trace.validate();
    link.validate();
    power.validate();
    policy.validate();
    if (policy.buffer_size != link.buffer_size)
        throw config_error("run: policy and link disagree on the buffer size");
    return Simulation(trace, policy, link, power, recorder).execute();
}

PolicyConfig make_policy_config(PolicyKind kind, int buffer_size, const SweepSpec& spec,
                                const LinkConfig& link, const PowerVector& power) {
    PolicyConfig cfg;
    cfg.kind = kind;
    cfg.buffer_size = buffer_size;
    cfg.sleep_trigger = spec.b_fraction * static_cast<double>(buffer_size);
    cfg.t_max = spec.t_max;
    cfg.confidence = spec.confidence;
    cfg.wake_threshold = wake_threshold(link.capacity, power.t_delta, link.packet_size);
    cfg.t_max_semantics = spec.t_max_semantics;
    cfg.starvation_bound = spec.starvation_bound;
    return cfg;
}

std::vector<SweepCell> sweep(const Trace& trace, const SweepSpec& spec, const LinkConfig& link,
                             const PowerVector& power) {
    if (spec.kinds.empty() || spec.buffer_sizes.empty())
        throw config_error("sweep: kinds and buffer sizes must be non-empty");

    struct Job {
        PolicyKind kind;
        int buffer_size;
    };
    std::vector<Job> jobs;
    for (PolicyKind kind : spec.kinds)
        for (int b : spec.buffer_sizes)
            jobs.push_back({kind, b});

    std::vector<SweepCell> cells(jobs.size());
    auto run_cell = [&](std::size_t i) {
        LinkConfig cell_link = link;
        cell_link.buffer_size = jobs[i].buffer_size;
        PolicyConfig cfg = make_policy_config(jobs[i].kind, jobs[i].buffer_size, spec,
                                              cell_link, power);
        try {
            cells[i] = {jobs[i].kind, jobs[i].buffer_size, run(trace, cfg, cell_link, power)};
        } catch (const std::exception& e) {
            throw config_error("sweep cell (" + std::string(to_string(jobs[i].kind)) + ", B=" +
                               std::to_string(jobs[i].buffer_size) + "): " + e.what());
        }
    };

    unsigned hw = std::thread::hardware_concurrency();
    std::size_t workers = spec.parallel ? std::min<std::size_t>(std::max(hw, 1u), jobs.size()) : 1;
    if (workers <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i)
            run_cell(i);
        return cells;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= jobs.size())
                    return;
                try {
                    run_cell(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
    return cells;
}

} // namespace napsim
