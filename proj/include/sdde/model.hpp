#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "sdde/errors.hpp"
#include "sdde/parameters.hpp"

namespace sdde {

/// Evaluation contract t -> u(t) on a stated interval. Queries outside the interval
/// are rejected rather than extrapolated; state-dependent lookups make silent
/// extrapolation the dominant bug source in this problem class.
class HistoryLookup {
public:
    HistoryLookup() = default;
    HistoryLookup(double lo, double hi, std::function<double(double)> value,
                  std::function<double(double)> deriv = nullptr)
        : lo_(lo), hi_(hi), value_(std::move(value)), deriv_(std::move(deriv)) {}

    double lo() const { return lo_; }
    double hi() const { return hi_; }

    double operator()(double t) const {
        check(t);
        return value_(t);
    }

    bool has_derivative() const { return static_cast<bool>(deriv_); }

    /// Exact derivative when supplied, else a central difference clamped to the interval.
    double derivative(double t) const {
        check(t);
        if (deriv_) return deriv_(t);
        const double h = 1e-6 * std::max(1.0, std::abs(t));
        const double tl = std::max(lo_, t - h);
        const double tr = std::min(hi_, t + h);
        return (value_(tr) - value_(tl)) / (tr - tl);
    }

private:
    void check(double t) const {
        if (!(t >= lo_ && t <= hi_))
            throw HistoryOutOfRange("history queried at t=" + std::to_string(t) + " outside [" +
                                    std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
    }

    double lo_ = 0.0, hi_ = 0.0;
    std::function<double(double)> value_;
    std::function<double(double)> deriv_;
};

inline HistoryLookup constant_history(double u0, double lo, double hi = 0.0) {
    return {lo, hi, [u0](double) { return u0; }, [](double) { return 0.0; }};
}

inline HistoryLookup function_history(double lo, double hi, std::function<double(double)> f,
                                      std::function<double(double)> df = nullptr) {
    return {lo, hi, std::move(f), std::move(df)};
}

/// Sampled table with linear interpolation; times must be strictly increasing.
inline HistoryLookup sampled_history(std::vector<double> ts, std::vector<double> us) {
    if (ts.size() != us.size() || ts.size() < 2)
        throw Error("sampled_history: need >= 2 samples with matching sizes");
    for (std::size_t i = 1; i < ts.size(); ++i)
        if (!(ts[i] > ts[i - 1])) throw Error("sampled_history: times must be increasing");
    const double lo = ts.front(), hi = ts.back();
    auto tsp = std::make_shared<std::vector<double>>(std::move(ts));
    auto usp = std::make_shared<std::vector<double>>(std::move(us));
    auto value = [tsp, usp](double t) {
        auto it = std::upper_bound(tsp->begin(), tsp->end(), t);
        std::size_t i = std::min<std::size_t>(
            tsp->size() - 2, static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - tsp->begin() - 1)));
        const double w = (t - (*tsp)[i]) / ((*tsp)[i + 1] - (*tsp)[i]);
        return (1.0 - w) * (*usp)[i] + w * (*usp)[i + 1];
    };
    return {lo, hi, value};
}

/// alpha_i = t - a_i - c u(t); the deviated arguments of both delay terms.
inline std::pair<double, double> delay_arguments(const Parameters& p, double t, double u_now) {
    return {t - p.a1 - p.c * u_now, t - p.a2 - p.c * u_now};
}

/// Right-hand side of the state-dependent DDE at time t given a history.
inline double evaluate_rhs(const Parameters& p, const HistoryLookup& h, double t) {
    const double u_now = h(t);
    const auto [alpha1, alpha2] = delay_arguments(p, t, u_now);
    if (alpha1 > t || alpha2 > t)
        throw DelayAdvanced("delay argument ahead of current time: a_i + c u(t) < 0 at t=" +
                            std::to_string(t));
    return -p.gamma * u_now - p.kappa1 * h(alpha1) - p.kappa2 * h(alpha2);
}

/// Difference operator L u(t) = -gamma u(t) - kappa1 u(t-a1) - kappa2 u(t-a2).
inline double difference_L(const Parameters& p, const HistoryLookup& h, double t) {
    return -p.gamma * h(t) - p.kappa1 * h(t - p.a1) - p.kappa2 * h(t - p.a2);
}

/// L applied twice, expanded into its constant-delay terms (delays up to 2 a2).
inline double difference_L2(const Parameters& p, const HistoryLookup& h, double t) {
    return p.gamma * p.gamma * h(t)
         + 2.0 * p.gamma * (p.kappa1 * h(t - p.a1) + p.kappa2 * h(t - p.a2))
         + p.kappa1 * p.kappa1 * h(t - 2.0 * p.a1)
         + 2.0 * p.kappa1 * p.kappa2 * h(t - p.a1 - p.a2)
         + p.kappa2 * p.kappa2 * h(t - 2.0 * p.a2);
}

/// Exact cubic constant-delay truncation of the state-dependent DDE. Only constant
/// delays t - m a1 - n a2 with 1 <= m+n <= 3 are queried; the state dependence of the
/// delays is the sole nonlinearity, so c = 0 reduces this to difference_L.
inline double rhs_cubic_truncation(const Parameters& p, const HistoryLookup& h, double t) {
    const double u0 = h(t);
    double acc = difference_L(p, h, t);

    const double ka[2] = {p.kappa1, p.kappa2};
    const double aa[2] = {p.a1, p.a2};

    for (int i = 0; i < 2; ++i)
        acc += ka[i] * p.c * u0 * difference_L(p, h, t - aa[i]);

    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            acc += ka[i] * ka[j] * p.c * p.c * u0 * h(t - aa[i]) *
                   difference_L(p, h, t - aa[i] - aa[j]);

    for (int i = 0; i < 2; ++i)
        acc -= 0.5 * (p.c * u0) * (p.c * u0) * ka[i] * difference_L2(p, h, t - aa[i]);

    return acc;
}

}  // namespace sdde
