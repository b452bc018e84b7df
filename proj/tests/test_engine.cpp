#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "napsim/engine.hpp"

using namespace napsim;

namespace {

const PowerVector kPower{2.0, 1.0, 0.1, 0.5e-3};
const double kTmax = 2.5e-3;

LinkConfig link_with(int buffer) { return {1e9, 1000.0, buffer}; }

PolicyConfig policy_with(PolicyKind kind, int buffer) {
    PolicyConfig cfg;
    cfg.kind = kind;
    cfg.buffer_size = buffer;
    cfg.sleep_trigger = 0.1 * buffer;
    cfg.wake_threshold = wake_threshold(1e9, kPower.t_delta, 1000.0);
    return cfg;
}

Trace trace_of(std::vector<double> arrivals) {
    Trace t;
    t.arrivals = std::move(arrivals);
    t.source = "inline";
    return t;
}

void check_invariants(const Trace& trace, const Metrics& m, const RunRecorder& rec) {
    CHECK(m.arrivals == trace.arrivals.size());
    CHECK(m.arrivals == m.departures + m.drops + m.final_queue);
    CHECK(std::abs(m.state_times.total() - m.duration) <= 1e-9);
    CHECK(std::is_sorted(rec.departure_order.begin(), rec.departure_order.end())); // FIFO
    CHECK(m.sum_delay >= static_cast<double>(m.departures) * 8e-6 - 1e-12);

    std::uint64_t transitions_seen = 0;
    for (std::size_t i = 0; i < rec.intervals.size(); ++i) {
        const auto& iv = rec.intervals[i];
        CHECK(iv.end > iv.begin);
        if (i > 0)
            CHECK(iv.begin == rec.intervals[i - 1].end);
        if (iv.state == InterfaceState::transitioning) {
            ++transitions_seen;
            CHECK(std::abs((iv.end - iv.begin) - kPower.t_delta) <= 1e-12);
            REQUIRE(i > 0);
            CHECK(rec.intervals[i - 1].state == InterfaceState::sleeping);
            if (i + 1 < rec.intervals.size()) {
                CHECK((rec.intervals[i + 1].state == InterfaceState::active ||
                       rec.intervals[i + 1].state == InterfaceState::idle));
            }
        }
    }
    CHECK(transitions_seen == m.transitions);

    // Departures happen only while the interface is active.
    for (double t : rec.departure_times) {
        bool in_active = false;
        for (const auto& iv : rec.intervals)
            if (iv.state == InterfaceState::active && t > iv.begin && t <= iv.end + 1e-15)
                in_active = true;
        CHECK(in_active);
    }
}

} // namespace

TEST_CASE("empty trace produces all-zero metrics") {
    Metrics m = run(trace_of({}), policy_with(PolicyKind::streamlined, 100), link_with(100),
                    kPower);
    CHECK(m.duration == 0.0);
    CHECK(m.arrivals == 0);
    CHECK(m.departures == 0);
    CHECK(m.energy == 0.0);
    CHECK(m.savings == 0.0);
    CHECK(m.state_times.total() == 0.0);
}

TEST_CASE("single arrival under streamlined: serve, then one uninterrupted sleep") {
    RunRecorder rec;
    Metrics m = run(trace_of({0.0}), policy_with(PolicyKind::streamlined, 350), link_with(350),
                    kPower, &rec);
    CHECK(m.departures == 1);
    CHECK(m.mean_delay == doctest::Approx(8e-6).epsilon(1e-12));
    CHECK(m.state_times.active == doctest::Approx(8e-6).epsilon(1e-12));
    CHECK(m.state_times.sleeping == doctest::Approx(kTmax).epsilon(1e-12));
    CHECK(m.state_times.idle == 0.0);
    CHECK(m.state_times.transitioning == 0.0);
    CHECK(m.sleeps == 1);
    CHECK(m.transitions == 0);
    CHECK(m.duration == doctest::Approx(8e-6 + kTmax).epsilon(1e-12));
    check_invariants(trace_of({0.0}), m, rec);
}

TEST_CASE("service completion wins ties, arrivals land in the new state") {
    // Second arrival exactly at the first departure: the queue empties first,
    // the interface starts sleeping, and the packet waits out the flush.
    Trace trace = trace_of({0.0, 8e-6});
    RunRecorder rec;
    Metrics m = run(trace, policy_with(PolicyKind::streamlined, 350), link_with(350), kPower,
                    &rec);
    CHECK(m.departures == 2);
    CHECK(m.sleeps == 2);      // the flush wake, then a final sleep after draining
    CHECK(m.transitions == 1); // end-of-trace flush
    CHECK(m.max_delay == doctest::Approx(kTmax + kPower.t_delta + 8e-6).epsilon(1e-9));
    CHECK(m.state_times.sleeping == doctest::Approx(2 * kTmax).epsilon(1e-9));
    check_invariants(trace, m, rec);
}

TEST_CASE("gupta-singh sleeps on an arrival while idle, delaying the packet") {
    // Slow traffic (10 ms gaps) keeps the estimated rate low, so the policy
    // prefers sleeping over serving the packet that just arrived.
    std::vector<double> arrivals;
    for (int i = 0; i < 6; ++i)
        arrivals.push_back(i * 10e-3);
    Trace trace = trace_of(arrivals);
    RunRecorder rec;
    Metrics m = run(trace, policy_with(PolicyKind::gupta_singh, 250), link_with(250), kPower,
                    &rec);
    CHECK(m.departures == 6);
    CHECK(m.drops == 0);
    // The second packet waits through a capped sleep plus the wake transition.
    CHECK(m.max_delay == doctest::Approx(kTmax + kPower.t_delta + 8e-6).epsilon(1e-9));
    CHECK(m.transitions >= 1);
    CHECK(m.sleeps > m.transitions); // empty expiries re-sleep without waking
    check_invariants(trace, m, rec);
}

TEST_CASE("tail drop counts the in-service packet against the buffer") {
    Trace trace = trace_of({0.0, 1e-6, 2e-6, 3e-6});
    RunRecorder rec;
    Metrics m = run(trace, policy_with(PolicyKind::none, 2), link_with(2), kPower, &rec);
    CHECK(m.departures == 2);
    CHECK(m.drops == 2);
    CHECK(m.drops_by_state[static_cast<int>(InterfaceState::active)] == 2);
    CHECK(m.drops_while_sleeping() == 0);
    check_invariants(trace, m, rec);
}

TEST_CASE("drops while sleeping are tagged as such") {
    // One packet empties the queue, streamlined sleeps 2.5 ms, and a burst
    // overruns the four-slot buffer before the timer can fire.
    Trace trace = trace_of({0.0, 10e-6, 11e-6, 12e-6, 13e-6, 14e-6, 15e-6});
    RunRecorder rec;
    Metrics m = run(trace, policy_with(PolicyKind::streamlined, 4), link_with(4), kPower, &rec);
    CHECK(m.drops == 2);
    CHECK(m.drops_while_sleeping() == 2);
    check_invariants(trace, m, rec);
}

TEST_CASE("never-sleep control equals its own baseline") {
    Trace trace = gen_poisson(9000.0, 1.0, 42);
    Metrics m = run(trace, policy_with(PolicyKind::none, 350), link_with(350), kPower);
    CHECK(m.energy == m.baseline); // bit-exact
    CHECK(m.savings == 0.0);
    CHECK(m.drops == 0);
    CHECK(m.sleeps == 0);
    CHECK(m.transitions == 0);
    CHECK(m.state_times.sleeping == 0.0);
    CHECK(m.mean_delay >= 8e-6);
}

TEST_CASE("per-packet sizes drive the service time") {
    Trace trace = trace_of({0.0, 16e-6});
    trace.sizes = {2000.0, 1000.0};
    Metrics m = run(trace, policy_with(PolicyKind::none, 10), link_with(10), kPower);
    CHECK(m.departures == 2);
    CHECK(m.state_times.active == doctest::Approx(24e-6).epsilon(1e-12));
    CHECK(m.max_delay == doctest::Approx(16e-6).epsilon(1e-12));
}

TEST_CASE("identical inputs give identical metrics") {
    Trace trace = gen_poisson(9000.0, 0.5, 7);
    for (PolicyKind kind : {PolicyKind::gupta_singh, PolicyKind::enhanced,
                            PolicyKind::streamlined}) {
        Metrics a = run(trace, policy_with(kind, 100), link_with(100), kPower);
        Metrics b = run(trace, policy_with(kind, 100), link_with(100), kPower);
        CHECK(a.energy == b.energy);
        CHECK(a.duration == b.duration);
        CHECK(a.sum_delay == b.sum_delay);
        CHECK(a.departures == b.departures);
        CHECK(a.drops == b.drops);
        CHECK(a.sleeps == b.sleeps);
        CHECK(a.transitions == b.transitions);
    }
}

TEST_CASE("invariants hold across policies, loads and buffers") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        for (double rho : {0.01, 0.3}) {
            Trace trace = gen_poisson(rho * 125000.0, 0.2, seed);
            for (PolicyKind kind : {PolicyKind::gupta_singh, PolicyKind::enhanced,
                                    PolicyKind::streamlined}) {
                for (int buffer : {25, 350}) {
                    RunRecorder rec;
                    Metrics m = run(trace, policy_with(kind, buffer), link_with(buffer), kPower,
                                    &rec);
                    check_invariants(trace, m, rec);
                    CHECK(m.final_queue == 0); // the engine drains before stopping
                }
            }
        }
    }
}

TEST_CASE("run validates its inputs") {
    Trace bad = trace_of({1.0, 0.5});
    CHECK_THROWS_AS(run(bad, policy_with(PolicyKind::none, 10), link_with(10), kPower),
                    config_error);
    Trace ok = trace_of({0.0});
    CHECK_THROWS_AS(run(ok, policy_with(PolicyKind::none, 10), link_with(20), kPower),
                    config_error); // buffer mismatch
    PowerVector bad_power{1.0, 2.0, 0.1, 0.5e-3};
    CHECK_THROWS_AS(run(ok, policy_with(PolicyKind::none, 10), link_with(10), bad_power),
                    config_error);
}

TEST_CASE("sweep covers the grid in a fixed order") {
    Trace trace = gen_poisson(9000.0, 0.1, 42);
    SweepSpec spec;
    spec.kinds = {PolicyKind::gupta_singh, PolicyKind::enhanced, PolicyKind::streamlined};
    spec.buffer_sizes = {25, 350};
    LinkConfig link = link_with(350);
    auto cells = sweep(trace, spec, link, kPower);
    REQUIRE(cells.size() == 6);
    CHECK(cells[0].kind == PolicyKind::gupta_singh);
    CHECK(cells[0].buffer_size == 25);
    CHECK(cells[5].kind == PolicyKind::streamlined);
    CHECK(cells[5].buffer_size == 350);

    // Permuting the buffer list permutes rows, nothing else.
    SweepSpec permuted = spec;
    permuted.buffer_sizes = {350, 25};
    auto swapped = sweep(trace, permuted, link, kPower);
    CHECK(swapped[0].metrics.energy == cells[1].metrics.energy);
    CHECK(swapped[1].metrics.energy == cells[0].metrics.energy);

    // Parallel and serial execution agree bit for bit.
    SweepSpec serial = spec;
    serial.parallel = false;
    auto sequential = sweep(trace, serial, link, kPower);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        CHECK(sequential[i].metrics.energy == cells[i].metrics.energy);
        CHECK(sequential[i].metrics.sum_delay == cells[i].metrics.sum_delay);
    }

    SweepSpec empty;
    CHECK_THROWS_AS(sweep(trace, empty, link, kPower), config_error);

    // A failing cell is reported with its (policy, B) coordinates.
    SweepSpec broken = spec;
    broken.parallel = false;
    broken.b_fraction = 0.0; // invalid sleep trigger for gupta-singh
    CHECK_THROWS_WITH_AS(sweep(trace, broken, link, kPower),
                         doctest::Contains("gupta-singh, B=25"), config_error);
}
