#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "sdde/errors.hpp"
#include "sdde/parameters.hpp"

namespace sdde {

using complex = std::complex<double>;

/// Characteristic function Delta(lambda) = lambda + gamma + kappa1 e^{-a1 lambda} + kappa2 e^{-a2 lambda}.
inline complex char_fn(const Parameters& p, complex lambda) {
    return lambda + p.gamma + p.kappa1 * std::exp(-p.a1 * lambda) + p.kappa2 * std::exp(-p.a2 * lambda);
}

/// d Delta / d lambda.
inline complex char_fn_deriv(const Parameters& p, complex lambda) {
    return 1.0 - p.a1 * p.kappa1 * std::exp(-p.a1 * lambda) - p.a2 * p.kappa2 * std::exp(-p.a2 * lambda);
}

/// Hopf condition residual Delta(i omega); zero exactly on a Hopf locus.
inline complex hopf_residual(const Parameters& p, double omega) {
    return char_fn(p, complex(0.0, omega));
}

struct HopfPoint {
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double omega = 0.0;
    std::string branch_label;
};

enum class HopfBranch { H1, H2, H3, Hu };

inline const char* branch_name(HopfBranch b) {
    switch (b) {
        case HopfBranch::H1: return "H1";
        case HopfBranch::H2: return "H2";
        case HopfBranch::H3: return "H3";
        case HopfBranch::Hu: return "Hu";
    }
    return "?";
}

enum class FreeKappa { kappa1, kappa2 };

/// Newton solve of Re/Im Delta(i omega) = 0 in (kappa_free, omega) with the other
/// feedback strength held at its value in p.
inline HopfPoint solve_hopf(Parameters p, FreeKappa free, double kappa_seed, double omega_seed,
                            int max_iters = 50) {
    double kf = kappa_seed, w = omega_seed;
    auto set_free = [&](double v) {
        if (free == FreeKappa::kappa1) p.kappa1 = v; else p.kappa2 = v;
    };
    double res_norm = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iters; ++it) {
        set_free(kf);
        const complex r = hopf_residual(p, w);
        res_norm = std::abs(r);
        if (res_norm < 1e-13) break;
        const double af = (free == FreeKappa::kappa1) ? p.a1 : p.a2;
        const complex dk = std::exp(-complex(0.0, w) * af);
        const complex dw = complex(0.0, 1.0) * char_fn_deriv(p, complex(0.0, w));
        const double det = dk.real() * dw.imag() - dk.imag() * dw.real();
        if (std::abs(det) < 1e-14)
            throw JacobianSingular("solve_hopf: singular Jacobian at omega=" + std::to_string(w));
        const double dkf = (-r.real() * dw.imag() + r.imag() * dw.real()) / det;
        const double dws = (-dk.real() * r.imag() + dk.imag() * r.real()) / det;
        // damped update: halve until the residual does not grow
        double lam = 1.0;
        for (int half = 0; half < 8; ++half) {
            set_free(kf + lam * dkf);
            if (std::abs(hopf_residual(p, w + lam * dws)) <= res_norm) break;
            lam *= 0.5;
        }
        kf += lam * dkf;
        w += lam * dws;
    }
    set_free(kf);
    if (!(std::abs(hopf_residual(p, w)) < 1e-12) || !(w > 1e-8) || kf < 0.0)
        throw NoConvergence("solve_hopf: no valid Hopf point from seed (kappa=" +
                            std::to_string(kappa_seed) + ", omega=" + std::to_string(omega_seed) + ")");
    HopfPoint hp;
    hp.kappa1 = p.kappa1;
    hp.kappa2 = p.kappa2;
    hp.omega = w;
    return hp;
}

namespace detail {

/// For fixed omega the Hopf condition is linear in (kappa1, kappa2); solve the 2x2
/// system. Returns nothing near sin((a2-a1) omega) = 0 where the system degenerates.
inline std::optional<std::array<double, 2>> kappas_on_hopf_locus(const Parameters& p, double w) {
    const double c1 = std::cos(p.a1 * w), c2 = std::cos(p.a2 * w);
    const double s1 = std::sin(p.a1 * w), s2 = std::sin(p.a2 * w);
    const double det = c1 * s2 - c2 * s1;
    if (std::abs(det) < 1e-10) return std::nullopt;
    const double k1 = (-p.gamma * s2 - c2 * w) / det;
    const double k2 = (c1 * w + p.gamma * s1) / det;
    return std::array<double, 2>{k1, k2};
}

struct Seed {
    double kappa1, kappa2, omega;
};

/// Branch seeds at the template parameters: H1/H2/H3 from the single-delay Hopf
/// condition at kappa2 = 0 (ordered by kappa1), Hu from an omega-scan of the
/// kappa-linear Hopf locus at kappa2 near the top of the well-posed range.
inline Seed seed_for_branch(const Parameters& p, HopfBranch branch) {
    if (branch != HopfBranch::Hu) {
        // omega cos(a1 w) + gamma sin(a1 w) = 0 on ((2b+1/2)pi, (2b+1)pi)/a1, b = 0,1,2
        const int b = branch == HopfBranch::H1 ? 0 : branch == HopfBranch::H2 ? 1 : 2;
        double lo = (0.5 * M_PI + 2.0 * b * M_PI) / p.a1 + 1e-9;
        double hi = ((2.0 * b + 1.0) * M_PI) / p.a1 - 1e-9;
        auto f = [&](double w) { return w * std::cos(p.a1 * w) + p.gamma * std::sin(p.a1 * w); };
        if (f(lo) * f(hi) > 0.0)
            throw SeedNotOnBranch(std::string("no kappa2=0 seed for branch ") + branch_name(branch));
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (f(lo) * f(mid) <= 0.0 ? hi : lo) = mid;
        }
        const double w = 0.5 * (lo + hi);
        return {-p.gamma / std::cos(p.a1 * w), 0.0, w};
    }
    // Hu: scan omega below the H1 frequency window for kappa2(omega) crossing the scan level.
    const double k2_level = std::min(4.7, p.gamma - 0.05);
    const int n = 20000;
    const double wmax = 3.0 * M_PI / p.a2 * 4.0;  // generous low-frequency window
    double best_k1 = std::numeric_limits<double>::infinity();
    Seed best{};
    bool found = false;
    double prev_w = 0.0, prev_gap = std::numeric_limits<double>::quiet_NaN();
    for (int i = 1; i <= n; ++i) {
        const double w = wmax * i / n;
        auto kk = kappas_on_hopf_locus(p, w);
        if (!kk || (*kk)[0] < 0.0 || (*kk)[1] < 0.0 || (*kk)[1] > p.gamma) {
            prev_gap = std::numeric_limits<double>::quiet_NaN();
            prev_w = w;
            continue;
        }
        const double gap = (*kk)[1] - k2_level;
        if (std::isfinite(prev_gap) && prev_gap * gap <= 0.0) {
            // bisect the crossing kappa2(omega) = k2_level
            double lo = prev_w, hi = w;
            for (int j = 0; j < 100; ++j) {
                const double mid = 0.5 * (lo + hi);
                auto km = kappas_on_hopf_locus(p, mid);
                if (!km) break;
                (((*km)[1] - k2_level) * prev_gap > 0.0 ? lo : hi) = mid;
            }
            auto km = kappas_on_hopf_locus(p, 0.5 * (lo + hi));
            if (km && (*km)[0] >= 0.0 && (*km)[0] < best_k1) {
                best_k1 = (*km)[0];
                best = {(*km)[0], (*km)[1], 0.5 * (lo + hi)};
                found = true;
            }
        }
        prev_gap = gap;
        prev_w = w;
    }
    if (!found) throw SeedNotOnBranch("no Hu seed found by omega scan");
    return best;
}

}  // namespace detail

struct TraceOptions {
    double initial_step = 0.02;
    double max_step = 0.1;
    double min_step = 1e-10;
    std::size_t max_points = 200000;
};

/// Pseudo-arclength continuation of a Hopf curve in (kappa1, kappa2, omega) space.
/// `range` bounds the branch's natural parameter: kappa2 for H1/H2/H3, kappa1 for Hu
/// (Hu folds in kappa2 and cannot be parametrized by it). Points are emitted in
/// arclength order; every point satisfies |Delta(i omega)| < 1e-10.
inline std::vector<HopfPoint> trace_hopf_curve(const Parameters& p_template, HopfBranch branch,
                                               std::pair<double, double> range, double step = 0.02,
                                               const TraceOptions& topts = {}) {
    using Vec3 = std::array<double, 3>;  // (kappa1, kappa2, omega)
    const auto seed = detail::seed_for_branch(p_template, branch);

    auto params_at = [&](const Vec3& x) {
        Parameters p = p_template;
        p.kappa1 = x[0];
        p.kappa2 = x[1];
        return p;
    };
    auto residual = [&](const Vec3& x, double out[2]) {
        const complex r = hopf_residual(params_at(x), x[2]);
        out[0] = r.real();
        out[1] = r.imag();
    };
    // rows of the 2x3 Jacobian of (Re, Im) Delta(i omega) wrt (kappa1, kappa2, omega)
    auto jacobian = [&](const Vec3& x, double J[2][3]) {
        const Parameters p = params_at(x);
        const complex iw(0.0, x[2]);
        const complex d1 = std::exp(-p.a1 * iw);
        const complex d2 = std::exp(-p.a2 * iw);
        const complex dw = complex(0.0, 1.0) * char_fn_deriv(p, iw);
        J[0][0] = d1.real(); J[0][1] = d2.real(); J[0][2] = dw.real();
        J[1][0] = d1.imag(); J[1][1] = d2.imag(); J[1][2] = dw.imag();
    };
    auto solve3 = [](double A[3][3], const double b[3], double out[3]) {
        // Gaussian elimination with partial pivoting
        double M[3][4];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) M[i][j] = A[i][j];
            M[i][3] = b[i];
        }
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int r = col + 1; r < 3; ++r)
                if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
            if (std::abs(M[piv][col]) < 1e-300) return false;
            if (piv != col)
                for (int j = col; j < 4; ++j) std::swap(M[piv][j], M[col][j]);
            for (int r = 0; r < 3; ++r) {
                if (r == col) continue;
                const double f = M[r][col] / M[col][col];
                for (int j = col; j < 4; ++j) M[r][j] -= f * M[col][j];
            }
        }
        for (int i = 0; i < 3; ++i) out[i] = M[i][3] / M[i][i];
        return true;
    };
    // tangent: nullspace of the 2x3 Jacobian, normalized and aligned with `prev`
    auto tangent = [&](const Vec3& x, const Vec3& prev, Vec3& t) {
        double J[2][3];
        jacobian(x, J);
        double A[3][3] = {{J[0][0], J[0][1], J[0][2]},
                          {J[1][0], J[1][1], J[1][2]},
                          {prev[0], prev[1], prev[2]}};
        const double b[3] = {0.0, 0.0, 1.0};
        double out[3];
        if (!solve3(A, b, out)) return false;
        double n = std::sqrt(out[0] * out[0] + out[1] * out[1] + out[2] * out[2]);
        if (!(n > 0.0) || !std::isfinite(n)) return false;
        for (int i = 0; i < 3; ++i) t[i] = out[i] / n;
        return true;
    };
    // one Newton-corrected continuation point from x along t with arclength h
    auto correct = [&](Vec3 x, const Vec3& t, const Vec3& xpred, int& iters) -> std::optional<Vec3> {
        for (iters = 0; iters < 12; ++iters) {
            double F[2];
            residual(x, F);
            const double orth = t[0] * (x[0] - xpred[0]) + t[1] * (x[1] - xpred[1]) + t[2] * (x[2] - xpred[2]);
            if (std::abs(F[0]) < 1e-12 && std::abs(F[1]) < 1e-12 && std::abs(orth) < 1e-12)
                return x;
            double J[2][3];
            jacobian(x, J);
            double A[3][3] = {{J[0][0], J[0][1], J[0][2]},
                              {J[1][0], J[1][1], J[1][2]},
                              {t[0], t[1], t[2]}};
            const double b[3] = {-F[0], -F[1], -orth};
            double dx[3];
            if (!solve3(A, b, dx)) return std::nullopt;
            for (int i = 0; i < 3; ++i) x[i] += dx[i];
            if (!std::isfinite(x[0]) || !std::isfinite(x[1]) || !std::isfinite(x[2])) return std::nullopt;
        }
        return std::nullopt;
    };

    // polish the scan seed onto the curve
    Vec3 x0{seed.kappa1, seed.kappa2, seed.omega};
    {
        Vec3 tno{0.0, 0.0, 1.0};
        int it;
        auto polished = correct(x0, tno, x0, it);
        if (!polished)
            throw SeedNotOnBranch(std::string("seed failed to converge for branch ") + branch_name(branch));
        x0 = *polished;
    }

    const int range_idx = (branch == HopfBranch::Hu) ? 0 : 1;  // kappa1 for Hu else kappa2
    const double k2_cap = p_template.gamma;                    // well-posed range only
    auto in_window = [&](const Vec3& x) {
        return x[range_idx] >= range.first - 1e-9 && x[range_idx] <= range.second + 1e-9 &&
               x[0] >= -1e-9 && x[1] >= -1e-9 && x[1] <= k2_cap + 1e-9 && x[2] > 0.0;
    };
    auto run_direction = [&](double sign) {
        std::vector<HopfPoint> pts;
        Vec3 x = x0;
        Vec3 prev{0.0, 0.0, 0.0};
        {  // initial tangent: align with +omega, then apply direction sign
            Vec3 t;
            Vec3 canon{0.0, 0.0, 1.0};
            if (!tangent(x, canon, t)) throw JacobianSingular("trace: tangent undefined at seed");
            for (auto& v : t) v *= sign;
            prev = t;
        }
        double h = std::min(step, topts.max_step);
        bool entered = in_window(x);
        std::size_t guard = 0;
        while (pts.size() < topts.max_points && ++guard < topts.max_points) {
            Vec3 t;
            if (!tangent(x, prev, t)) break;
            // keep orientation continuous across folds
            if (t[0] * prev[0] + t[1] * prev[1] + t[2] * prev[2] < 0.0)
                for (auto& v : t) v = -v;
            Vec3 xpred{x[0] + h * t[0], x[1] + h * t[1], x[2] + h * t[2]};
            int iters = 0;
            auto next = correct(xpred, t, xpred, iters);
            if (!next) {
                h *= 0.5;
                if (h < topts.min_step)
                    throw StepCollapse(std::string("continuation step collapsed on ") + branch_name(branch));
                continue;
            }
            x = *next;
            prev = t;
            if (!in_window(x)) {
                if (entered) break;          // left the window after covering it
                if (guard > 2000) break;     // seed never reaches the window
                continue;
            }
            entered = true;
            HopfPoint hp;
            hp.kappa1 = x[0];
            hp.kappa2 = x[1];
            hp.omega = x[2];
            hp.branch_label = branch_name(branch);
            pts.push_back(hp);
            if (iters <= 3) h = std::min(h * 1.4, topts.max_step);
        }
        return pts;
    };

    auto fwd = run_direction(+1.0);
    auto bwd = run_direction(-1.0);
    std::vector<HopfPoint> out;
    out.reserve(fwd.size() + bwd.size() + 1);
    for (auto it = bwd.rbegin(); it != bwd.rend(); ++it) out.push_back(*it);
    if (in_window(x0)) {
        HopfPoint hp;
        hp.kappa1 = x0[0];
        hp.kappa2 = x0[1];
        hp.omega = x0[2];
        hp.branch_label = branch_name(branch);
        out.push_back(hp);
    }
    for (auto& hp : fwd) out.push_back(hp);
    if (out.empty())
        throw SeedNotOnBranch(std::string("no points traced in range for ") + branch_name(branch));
    return out;
}

struct HopfHopfPoint {
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double omega1 = 0.0;  // always omega1 > omega2 > 0
    double omega2 = 0.0;
    double residual = 0.0;  // max |Delta(i omega_j)| at the stored values
};

/// Minimum of |k omega1 - l omega2| over 1 <= k+l <= 5; positive away from strong resonance.
inline double resonance_margin(double w1, double w2) {
    double m = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 5; ++k)
        for (int l = 0; l + k <= 5; ++l) {
            if (k == 0 && l == 0) continue;
            m = std::min(m, std::abs(k * w1 - l * w2));
        }
    return m;
}

/// Locate a double-Hopf point: Newton on the four real residuals
/// Re/Im Delta(i omega_1), Re/Im Delta(i omega_2) in (kappa1, omega1, kappa2, omega2),
/// with a derivative-free polish fallback. Frequencies are ordered omega1 > omega2.
inline HopfHopfPoint find_hopf_hopf(const Parameters& p_template,
                                    std::array<double, 4> seed /* k1, w1, k2, w2 */,
                                    int max_iters = 100) {
    if (std::abs(seed[1] - seed[3]) < 1e-6)
        throw NoConvergence("find_hopf_hopf: omega seeds must be distinct");

    auto resid = [&](const std::array<double, 4>& x, double F[4]) {
        Parameters p = p_template;
        p.kappa1 = x[0];
        p.kappa2 = x[2];
        const complex r1 = hopf_residual(p, x[1]);
        const complex r2 = hopf_residual(p, x[3]);
        F[0] = r1.real(); F[1] = r1.imag();
        F[2] = r2.real(); F[3] = r2.imag();
    };
    auto norm4 = [](const double F[4]) {
        return std::sqrt(F[0] * F[0] + F[1] * F[1] + F[2] * F[2] + F[3] * F[3]);
    };
    auto solve4 = [](double A[4][4], const double b[4], double out[4]) {
        double M[4][5];
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) M[i][j] = A[i][j];
            M[i][4] = b[i];
        }
        for (int col = 0; col < 4; ++col) {
            int piv = col;
            for (int r = col + 1; r < 4; ++r)
                if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
            if (std::abs(M[piv][col]) < 1e-300) return false;
            if (piv != col)
                for (int j = col; j < 5; ++j) std::swap(M[piv][j], M[col][j]);
            for (int r = 0; r < 4; ++r) {
                if (r == col) continue;
                const double f = M[r][col] / M[col][col];
                for (int j = col; j < 5; ++j) M[r][j] -= f * M[col][j];
            }
        }
        for (int i = 0; i < 4; ++i) out[i] = M[i][4] / M[i][i];
        return true;
    };

    std::array<double, 4> x = seed;
    auto newton = [&](std::array<double, 4>& x) {
        for (int it = 0; it < max_iters; ++it) {
            double F[4];
            resid(x, F);
            const double rn = norm4(F);
            if (rn < 1e-15) return true;
            Parameters p = p_template;
            p.kappa1 = x[0];
            p.kappa2 = x[2];
            double A[4][4] = {};
            for (int jw = 0; jw < 2; ++jw) {
                const double w = jw == 0 ? x[1] : x[3];
                const complex iw(0.0, w);
                const complex d1 = std::exp(-p.a1 * iw);
                const complex d2 = std::exp(-p.a2 * iw);
                const complex dw = complex(0.0, 1.0) * char_fn_deriv(p, iw);
                const int r = 2 * jw;
                A[r][0] = d1.real(); A[r][2] = d2.real(); A[r][1 + 2 * jw] = dw.real();
                A[r + 1][0] = d1.imag(); A[r + 1][2] = d2.imag(); A[r + 1][1 + 2 * jw] = dw.imag();
            }
            double dx[4];
            if (!solve4(A, F, dx)) return false;
            double lam = 1.0;
            std::array<double, 4> xn;
            for (int half = 0; half < 10; ++half) {
                for (int i = 0; i < 4; ++i) xn[i] = x[i] - lam * dx[i];
                double Fn[4];
                resid(xn, Fn);
                if (norm4(Fn) < rn) break;
                lam *= 0.5;
            }
            for (int i = 0; i < 4; ++i) x[i] -= lam * dx[i];
        }
        double F[4];
        resid(x, F);
        return norm4(F) < 1e-13;
    };

    bool ok = newton(x);
    if (!ok) {
        // derivative-free polish (Nelder-Mead on the sum of squares), then retry Newton
        auto fobj = [&](const std::array<double, 4>& y) {
            double F[4];
            resid(y, F);
            return F[0] * F[0] + F[1] * F[1] + F[2] * F[2] + F[3] * F[3];
        };
        std::array<std::array<double, 4>, 5> simplex;
        std::array<double, 5> fv;
        simplex[0] = seed;
        for (int i = 1; i < 5; ++i) {
            simplex[i] = seed;
            simplex[i][i - 1] += 0.05 * std::max(1.0, std::abs(seed[i - 1]));
        }
        for (int i = 0; i < 5; ++i) fv[i] = fobj(simplex[i]);
        for (int iter = 0; iter < 4000; ++iter) {
            std::array<int, 5> idx{0, 1, 2, 3, 4};
            std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
            std::array<std::array<double, 4>, 5> s2;
            std::array<double, 5> f2;
            for (int i = 0; i < 5; ++i) { s2[i] = simplex[idx[i]]; f2[i] = fv[idx[i]]; }
            simplex = s2; fv = f2;
            if (fv[0] < 1e-28) break;
            std::array<double, 4> centroid{};
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) centroid[j] += simplex[i][j] / 4.0;
            auto mix = [&](double t) {
                std::array<double, 4> y;
                for (int j = 0; j < 4; ++j) y[j] = centroid[j] + t * (simplex[4][j] - centroid[j]);
                return y;
            };
            auto xr = mix(-1.0);
            const double fr = fobj(xr);
            if (fr < fv[0]) {
                auto xe = mix(-2.0);
                const double fe = fobj(xe);
                if (fe < fr) { simplex[4] = xe; fv[4] = fe; }
                else { simplex[4] = xr; fv[4] = fr; }
            } else if (fr < fv[3]) {
                simplex[4] = xr; fv[4] = fr;
            } else {
                auto xc = mix(0.5);
                const double fc = fobj(xc);
                if (fc < fv[4]) { simplex[4] = xc; fv[4] = fc; }
                else {
                    for (int i = 1; i < 5; ++i) {
                        for (int j = 0; j < 4; ++j)
                            simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
                        fv[i] = fobj(simplex[i]);
                    }
                }
            }
        }
        x = simplex[0];
        ok = newton(x);
    }
    if (!ok) throw NoConvergence("find_hopf_hopf: residual target not reached");

    HopfHopfPoint hh;
    hh.kappa1 = x[0];
    hh.kappa2 = x[2];
    hh.omega1 = x[1];
    hh.omega2 = x[3];
    if (hh.omega1 < 0.0) hh.omega1 = -hh.omega1;  // conjugate pair symmetry
    if (hh.omega2 < 0.0) hh.omega2 = -hh.omega2;
    if (hh.omega1 < hh.omega2) std::swap(hh.omega1, hh.omega2);
    Parameters p = p_template;
    p.kappa1 = hh.kappa1;
    p.kappa2 = hh.kappa2;
    hh.residual = std::max(std::abs(hopf_residual(p, hh.omega1)), std::abs(hopf_residual(p, hh.omega2)));
    if (!(hh.omega2 > 0.0) || std::abs(hh.omega1 - hh.omega2) < 1e-8)
        throw NoConvergence("find_hopf_hopf: converged to a degenerate frequency pair");
    if (resonance_margin(hh.omega1, hh.omega2) < 1e-8)
        throw StrongResonance("find_hopf_hopf: k omega1 = l omega2 with k+l <= 5 at the solution");
    return hh;
}

/// Closed-form eigenvalue parameter-derivative
///   d lambda / d kappa_j = -e^{-a_j lambda} / Delta'(lambda).
inline complex dlambda_dkappa(const Parameters& p, complex lambda, int j) {
    if (j != 1 && j != 2) throw Error("dlambda_dkappa: j must be 1 or 2");
    const complex den = char_fn_deriv(p, lambda);
    if (std::abs(den) < 1e-12)
        throw CharacteristicDegenerate("dlambda_dkappa: Delta'(lambda) ~ 0 (double root)");
    const double aj = (j == 1) ? p.a1 : p.a2;
    return -std::exp(-aj * lambda) / den;
}

/// 2x2 Jacobian J_ij = d mu_i / d kappa_j = Re (d lambda / d kappa_j) at lambda = i omega_i,
/// together with its inverse; the linear part of the mu <-> kappa transform.
struct MuJacobian {
    double J[2][2] = {};
    double Jinv[2][2] = {};
    double det = 0.0;
};

inline MuJacobian mu_jacobian(const Parameters& p_template, const HopfHopfPoint& hh) {
    Parameters p = p_template;
    p.kappa1 = hh.kappa1;
    p.kappa2 = hh.kappa2;
    MuJacobian m;
    const double w[2] = {hh.omega1, hh.omega2};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            m.J[i][j] = dlambda_dkappa(p, complex(0.0, w[i]), j + 1).real();
    m.det = m.J[0][0] * m.J[1][1] - m.J[0][1] * m.J[1][0];
    if (std::abs(m.det) < 1e-12)
        throw RegularityViolated("mu_jacobian: |det J| < 1e-12 (condition HH.5 fails)");
    m.Jinv[0][0] = m.J[1][1] / m.det;
    m.Jinv[0][1] = -m.J[0][1] / m.det;
    m.Jinv[1][0] = -m.J[1][0] / m.det;
    m.Jinv[1][1] = m.J[0][0] / m.det;
    return m;
}

/// (kappa1*, kappa2*) + J^{-1} mu, the leading-order parameter back-transform.
inline std::pair<double, double> map_mu_to_kappa(const HopfHopfPoint& hh, const MuJacobian& m,
                                                 std::pair<double, double> mu) {
    return {hh.kappa1 + m.Jinv[0][0] * mu.first + m.Jinv[0][1] * mu.second,
            hh.kappa2 + m.Jinv[1][0] * mu.first + m.Jinv[1][1] * mu.second};
}

}  // namespace sdde
