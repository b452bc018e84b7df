#pragma once

#include <cstddef>
#include <deque>
#include <optional>

#include "napsim/errors.hpp"

namespace napsim {

/// Short-term arrival-rate estimate from a sliding window of the most recent
/// inter-arrival gaps. Simultaneous arrivals (zero gap) are merged and do not
/// enter the window.
class RateEstimator {
public:
    explicit RateEstimator(std::size_t window_size = 5) : window_size_(window_size) {}

    /// Record an arrival at time t (seconds). Throws config_error if t is
    /// earlier than the previous arrival.
    void observe_arrival(double t);

    /// Packets per second as the reciprocal of the mean gap, or nullopt while
    /// no gap has been observed yet.
    std::optional<double> current_rate() const;

    std::size_t window_size() const { return window_size_; }
    std::size_t gap_count() const { return gaps_.size(); }
    std::optional<double> last_arrival() const { return last_arrival_; }

private:
    std::size_t window_size_;
    std::deque<double> gaps_;
    std::optional<double> last_arrival_;
};

/// Survival function of the Erlang-k(lambda) distribution:
/// P(X_k >= t) = sum_{n=0}^{k-1} e^{-lambda t} (lambda t)^n / n!,
/// the probability that fewer than k Poisson arrivals occur within t seconds.
double erlang_survival(int k, double lambda, double t);

/// The unique t with erlang_survival(k, lambda, t) == confidence, located by
/// Newton iteration from k/lambda with a bisection safeguard. The survival
/// residual at the returned point is below 1e-10.
double solve_sleep_time(int k, double lambda, double confidence = 0.9);

/// Precomputed inversion constant: because the survival function depends only
/// on the product lambda*t, sleep_time(lambda) = c_k / lambda for fixed k.
struct SleepTable {
    int k = 1;
    double confidence = 0.9;
    double c_k = 0.0;

    double sleep_time(double lambda) const { return c_k / lambda; }
};

SleepTable build_sleep_table(int k, double confidence = 0.9);

} // namespace napsim
