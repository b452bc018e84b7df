#include "napsim/estimator.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace napsim {

void RateEstimator::observe_arrival(double t) {
    if (last_arrival_) {
        if (t < *last_arrival_)
            throw config_error("estimator: arrival time went backwards");
        if (t > *last_arrival_) {
            gaps_.push_back(t - *last_arrival_);
            if (gaps_.size() > window_size_)
                gaps_.pop_front();
        }
        // t == last_arrival_: merged arrival, no gap recorded
    }
    last_arrival_ = t;
}

std::optional<double> RateEstimator::current_rate() const {
    if (gaps_.empty())
        return std::nullopt;
    double sum = 0.0;
    for (double g : gaps_)
        sum += g;
    return static_cast<double>(gaps_.size()) / sum;
}

namespace {

struct SurvivalPoint {
    double survival;   // P(X_k >= t)
    double derivative; // d/dt of the survival, always <= 0
};

// Terms are accumulated pre-scaled by e^{-x} so nothing overflows; the last
// term is the Erlang density over lambda, which gives the derivative.
SurvivalPoint survival_point(int k, double lambda, double t) {
    double x = lambda * t;
    double term = std::exp(-x);
    double sum = term;
    for (int n = 1; n < k; ++n) {
        term *= x / static_cast<double>(n);
        sum += term;
    }
    return {sum, -lambda * term};
}

void check_erlang_args(int k, double lambda, double t) {
    if (k < 1)
        throw config_error("erlang: k must be >= 1");
    if (!(lambda > 0.0))
        throw config_error("erlang: lambda must be > 0");
    if (t < 0.0)
        throw config_error("erlang: t must be >= 0");
}

} // namespace

double erlang_survival(int k, double lambda, double t) {
    check_erlang_args(k, lambda, t);
    return survival_point(k, lambda, t).survival;
}

double solve_sleep_time(int k, double lambda, double confidence) {
    check_erlang_args(k, lambda, 0.0);
    if (!(confidence > 0.0 && confidence < 1.0))
        throw config_error("solve_sleep_time: confidence must be in (0, 1)");

    constexpr double kResidualTol = 1e-12;
    constexpr int kMaxIterations = 200;

    // Bracket the root; the survival decreases from 1 at t = 0 towards 0.
    double lo = 0.0;
    double hi = static_cast<double>(k) / lambda;
    while (survival_point(k, lambda, hi).survival > confidence) {
        lo = hi;
        hi *= 2.0;
    }

    double t = std::min(static_cast<double>(k) / lambda, hi);
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        auto [s, ds] = survival_point(k, lambda, t);
        double residual = s - confidence;
        if (std::abs(residual) < kResidualTol)
            return t;
        if (residual > 0.0)
            lo = t;
        else
            hi = t;
        double next = t - residual / ds;
        if (!std::isfinite(next) || next <= lo || next >= hi)
            next = 0.5 * (lo + hi);
        if (hi - lo <= std::numeric_limits<double>::epsilon() * hi) {
            // Bracket collapsed to adjacent doubles; accept if within contract.
            if (std::abs(residual) < 1e-10)
                return t;
            break;
        }
        t = next;
    }
    throw solve_error("solve_sleep_time: no convergence for k=" + std::to_string(k));
}

SleepTable build_sleep_table(int k, double confidence) {
    return {k, confidence, solve_sleep_time(k, 1.0, confidence)};
}

} // namespace napsim
