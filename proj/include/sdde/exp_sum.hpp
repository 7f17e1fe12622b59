#pragma once

#include <complex>
#include <vector>

#include "sdde/parameters.hpp"

namespace sdde {

using complex = std::complex<double>;

/// Finite sum of complex exponentials  theta -> sum_k coef_k e^{rate_k theta}.
/// Closed under differentiation, conjugation and linear combination, and closed-form
/// integrable, which makes it an exact carrier for eigenfunctions and center-manifold
/// coefficients. Terms with coinciding rates are merged.
class ExpSum {
public:
    struct Term {
        complex coef;
        complex rate;
    };

    ExpSum() = default;
    ExpSum(complex coef, complex rate) { add_term(coef, rate); }

    static ExpSum exponential(complex coef, complex rate) { return {coef, rate}; }

    const std::vector<Term>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    complex operator()(double theta) const {
        complex v = 0.0;
        for (const auto& t : terms_) v += t.coef * std::exp(t.rate * theta);
        return v;
    }

    ExpSum derivative() const {
        ExpSum d;
        for (const auto& t : terms_) d.add_term(t.coef * t.rate, t.rate);
        return d;
    }

    ExpSum second_derivative() const { return derivative().derivative(); }

    ExpSum conjugate() const {
        ExpSum c;
        for (const auto& t : terms_) c.add_term(std::conj(t.coef), std::conj(t.rate));
        return c;
    }

    ExpSum& operator+=(const ExpSum& o) {
        for (const auto& t : o.terms_) add_term(t.coef, t.rate);
        return *this;
    }

    friend ExpSum operator+(ExpSum a, const ExpSum& b) { return a += b; }

    friend ExpSum operator*(complex s, ExpSum a) {
        for (auto& t : a.terms_) t.coef *= s;
        return a;
    }

    void add_term(complex coef, complex rate) {
        for (auto& t : terms_) {
            if (std::abs(t.rate - rate) < rate_merge_tol) {
                t.coef += coef;
                return;
            }
        }
        terms_.push_back({coef, rate});
    }

    static constexpr double rate_merge_tol = 1e-12;

private:
    std::vector<Term> terms_;
};

namespace detail {

/// integral of e^{rho s} over [-a, 0]; series branch handles the removable
/// singularity as rho -> 0.
inline complex exp_integral(complex rho, double a) {
    const complex x = rho * a;
    if (std::abs(x) < 1e-8)
        return a * (1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0);
    return (1.0 - std::exp(-x)) / rho;
}

}  // namespace detail

/// Bilinear form <psi, phi> = conj(psi)(0) phi(0)
///   - kappa1 int_{-a1}^0 conj(psi)(s+a1) phi(s) ds - kappa2 int_{-a2}^0 conj(psi)(s+a2) phi(s) ds,
/// closed form for exponential sums; conjugate-linear in psi.
inline complex bilinear(const Parameters& p, const ExpSum& psi, const ExpSum& phi) {
    const ExpSum psib = psi.conjugate();
    complex acc = psib(0.0) * phi(0.0);
    const double ka[2] = {p.kappa1, p.kappa2};
    const double aa[2] = {p.a1, p.a2};
    for (int k = 0; k < 2; ++k) {
        complex integral = 0.0;
        for (const auto& tp : psib.terms())
            for (const auto& tf : phi.terms()) {
                // conj(psi)(s+a) phi(s) = coef_p coef_f e^{rate_p a} e^{(rate_p+rate_f) s}
                integral += tp.coef * tf.coef * std::exp(tp.rate * aa[k]) *
                            detail::exp_integral(tp.rate + tf.rate, aa[k]);
            }
        acc -= ka[k] * integral;
    }
    return acc;
}

}  // namespace sdde
