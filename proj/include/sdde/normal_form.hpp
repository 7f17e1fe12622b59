#pragma once

#include <array>
#include <optional>
#include <string>

#include "sdde/errors.hpp"
#include "sdde/exp_sum.hpp"
#include "sdde/parameters.hpp"
#include "sdde/spectral.hpp"

namespace sdde {

/// Center eigenfunctions q_j(theta) = e^{i omega_j theta}, adjoint eigenfunctions
/// p_j(s) = D_j e^{i omega_j s}, with D_j fixed by <p_j, q_j> = 1 under the bilinear
/// form. That normalization evaluates to conj(D_j) = 1/Delta'(i omega_j).
struct EigBasis {
    ExpSum q1, q2;
    ExpSum p1, p2;
    complex D1 = 0.0, D2 = 0.0;

    complex Dbar(int j) const { return std::conj(j == 1 ? D1 : D2); }
};

inline EigBasis build_basis(const Parameters& p_template, const HopfHopfPoint& hh) {
    Parameters p = p_template;
    p.kappa1 = hh.kappa1;
    p.kappa2 = hh.kappa2;
    EigBasis b;
    b.q1 = ExpSum(1.0, complex(0.0, hh.omega1));
    b.q2 = ExpSum(1.0, complex(0.0, hh.omega2));
    const complex den1 = bilinear(p, ExpSum(1.0, complex(0.0, hh.omega1)), b.q1);
    const complex den2 = bilinear(p, ExpSum(1.0, complex(0.0, hh.omega2)), b.q2);
    if (std::abs(den1) < 1e-12 || std::abs(den2) < 1e-12)
        throw NormalizationDegenerate("build_basis: <e^{i w .}, e^{i w .}> vanishes");
    // <D e^{i w s}, q> = conj(D) <e^{i w s}, q>, so conj(D_j) = 1/den_j
    b.D1 = std::conj(1.0 / den1);
    b.D2 = std::conj(1.0 / den2);
    b.p1 = b.D1 * ExpSum(1.0, complex(0.0, hh.omega1));
    b.p2 = b.D2 * ExpSum(1.0, complex(0.0, hh.omega2));
    return b;
}

/// Second Frechet derivative of the model nonlinearity at the origin:
///   F2(nu1, nu2) = sum_i kappa_i c [nu1(0) nu2'(-a_i) + nu2(0) nu1'(-a_i)].
inline complex F2(const Parameters& p, const ExpSum& nu1, const ExpSum& nu2) {
    const ExpSum d1 = nu1.derivative(), d2 = nu2.derivative();
    const complex v1 = nu1(0.0), v2 = nu2(0.0);
    complex acc = 0.0;
    const double ka[2] = {p.kappa1, p.kappa2};
    const double aa[2] = {p.a1, p.a2};
    for (int i = 0; i < 2; ++i)
        acc += ka[i] * p.c * (v1 * d2(-aa[i]) + v2 * d1(-aa[i]));
    return acc;
}

/// Third Frechet derivative of the model nonlinearity at the origin, fully symmetric:
///   F3(nu1, nu2, nu3) = -c^2 sum_i kappa_i [nu1(0) nu2(0) nu3''(-a_i) + (two rotations)].
/// On the center eigenbasis this reproduces the closed forms
///   F3(q_j, q_j, conj q_j) = -c^2 omega_j^2 (3 gamma + i omega_j), etc.
inline complex F3(const Parameters& p, const ExpSum& nu1, const ExpSum& nu2, const ExpSum& nu3) {
    const ExpSum s1 = nu1.second_derivative(), s2 = nu2.second_derivative(), s3 = nu3.second_derivative();
    const complex v1 = nu1(0.0), v2 = nu2(0.0), v3 = nu3(0.0);
    complex acc = 0.0;
    const double ka[2] = {p.kappa1, p.kappa2};
    const double aa[2] = {p.a1, p.a2};
    for (int i = 0; i < 2; ++i)
        acc += ka[i] * (v1 * v2 * s3(-aa[i]) + v1 * v3 * s2(-aa[i]) + v2 * v3 * s1(-aa[i]));
    return -p.c * p.c * acc;
}

/// The ten quadratic center-manifold flow coefficients for one j:
/// g^j_{lsrk} = conj(D_j) F2 on the basis pair selected by the index pattern
/// (l,s,r,k) counting powers of z1, conj z1, z2, conj z2.
struct QuadraticCoeffsOne {
    complex g2000, g0200, g1100;
    complex g0020, g0002, g0011;
    complex g1010, g0101, g1001, g0110;
};

struct QuadraticCoeffs {
    QuadraticCoeffsOne j1, j2;
    const QuadraticCoeffsOne& at(int j) const { return j == 1 ? j1 : j2; }
};

inline QuadraticCoeffs quadratic_g(const Parameters& p_template, const HopfHopfPoint& hh,
                                   const EigBasis& b) {
    Parameters p = p_template;
    p.kappa1 = hh.kappa1;
    p.kappa2 = hh.kappa2;
    const ExpSum q1b = b.q1.conjugate(), q2b = b.q2.conjugate();
    QuadraticCoeffs out;
    for (int j = 1; j <= 2; ++j) {
        const complex Db = b.Dbar(j);
        QuadraticCoeffsOne& g = (j == 1) ? out.j1 : out.j2;
        g.g2000 = Db * F2(p, b.q1, b.q1);
        g.g0200 = Db * F2(p, q1b, q1b);
        g.g1100 = Db * F2(p, b.q1, q1b);
        g.g0020 = Db * F2(p, b.q2, b.q2);
        g.g0002 = Db * F2(p, q2b, q2b);
        g.g0011 = Db * F2(p, b.q2, q2b);
        g.g1010 = Db * F2(p, b.q1, b.q2);
        g.g0101 = Db * F2(p, q1b, q2b);
        g.g1001 = Db * F2(p, b.q1, q2b);
        g.g0110 = Db * F2(p, q1b, b.q2);
    }
    return out;
}

/// Quadratic coefficients of the center-manifold graph w(z), each an exponential sum
/// solving  w' = lambda_w w + (projected inhomogeneity)  with boundary constant
/// E = F2(.,.) / Delta(lambda_w).
struct WCoeffs {
    ExpSum w2000, w1100, w1010, w1001, w0020, w0011;
    complex E2000 = 0.0, E1100 = 0.0, E1010 = 0.0, E1001 = 0.0, E0020 = 0.0, E0011 = 0.0;
};

namespace detail {

struct Inhomogeneity {
    complex coef;
    complex rate;
};

inline ExpSum solve_w(const Parameters& p, complex lambda_w,
                      const std::array<Inhomogeneity, 4>& inh, complex f2_value, complex& E_out) {
    const complex den = char_fn(p, lambda_w);
    if (std::abs(den) < 1e-10)
        throw ResonantDenominator("w coefficient: |Delta(lambda_w)| < 1e-10");
    ExpSum w;
    for (const auto& term : inh) {
        const complex gap = term.rate - lambda_w;
        if (std::abs(gap) < 1e-10)
            throw ResonantDenominator("w coefficient: resonant frequency difference");
        w.add_term(term.coef / gap, term.rate);
    }
    E_out = f2_value / den;
    w.add_term(E_out, lambda_w);
    return w;
}

}  // namespace detail

inline WCoeffs w_coefficients(const Parameters& p_template, const HopfHopfPoint& hh,
                              const EigBasis& b, const QuadraticCoeffs& qg) {
    Parameters p = p_template;
    p.kappa1 = hh.kappa1;
    p.kappa2 = hh.kappa2;
    const complex iw1(0.0, hh.omega1), iw2(0.0, hh.omega2);
    const ExpSum q1b = b.q1.conjugate(), q2b = b.q2.conjugate();
    const QuadraticCoeffsOne &g1 = qg.j1, &g2 = qg.j2;
    using detail::Inhomogeneity;
    WCoeffs w;

    w.w2000 = detail::solve_w(p, 2.0 * iw1,
        {Inhomogeneity{g1.g2000, iw1}, {std::conj(g1.g0200), -iw1},
         {g2.g2000, iw2}, {std::conj(g2.g0200), -iw2}},
        F2(p, b.q1, b.q1), w.E2000);

    w.w1100 = detail::solve_w(p, 0.0,
        {Inhomogeneity{g1.g1100, iw1}, {std::conj(g1.g1100), -iw1},
         {g2.g1100, iw2}, {std::conj(g2.g1100), -iw2}},
        F2(p, b.q1, q1b), w.E1100);

    w.w1010 = detail::solve_w(p, iw1 + iw2,
        {Inhomogeneity{g1.g1010, iw1}, {std::conj(g1.g0101), -iw1},
         {g2.g1010, iw2}, {std::conj(g2.g0101), -iw2}},
        F2(p, b.q1, b.q2), w.E1010);

    w.w1001 = detail::solve_w(p, iw1 - iw2,
        {Inhomogeneity{g1.g1001, iw1}, {std::conj(g1.g0110), -iw1},
         {g2.g1001, iw2}, {std::conj(g2.g0110), -iw2}},
        F2(p, b.q1, q2b), w.E1001);

    w.w0020 = detail::solve_w(p, 2.0 * iw2,
        {Inhomogeneity{g1.g0020, iw1}, {std::conj(g1.g0002), -iw1},
         {g2.g0020, iw2}, {std::conj(g2.g0002), -iw2}},
        F2(p, b.q2, b.q2), w.E0020);

    w.w0011 = detail::solve_w(p, 0.0,
        {Inhomogeneity{g1.g0011, iw1}, {std::conj(g1.g0011), -iw1},
         {g2.g0011, iw2}, {std::conj(g2.g0011), -iw2}},
        F2(p, b.q2, q2b), w.E0011);

    return w;
}

/// The four resonant cubic flow coefficients (g^1_2100, g^1_1011, g^2_1110, g^2_0021):
/// F3 on basis triples plus F2 against the w-functions, scaled by conj(D_j).
struct CubicCoeffs {
    complex g2100_1, g1011_1, g1110_2, g0021_2;
};

inline CubicCoeffs cubic_g(const Parameters& p_template, const HopfHopfPoint& hh, const EigBasis& b,
                           const QuadraticCoeffs& /*qg*/, const WCoeffs& w) {
    Parameters p = p_template;
    p.kappa1 = hh.kappa1;
    p.kappa2 = hh.kappa2;
    const ExpSum q1b = b.q1.conjugate(), q2b = b.q2.conjugate();
    const ExpSum w0110 = w.w1001.conjugate();  // realness of w(z): w_0110 = conj(w_1001)
    CubicCoeffs out;
    out.g2100_1 = b.Dbar(1) * (F3(p, b.q1, b.q1, q1b)
                               + 2.0 * F2(p, b.q1, w.w1100)
                               + F2(p, q1b, w.w2000));
    out.g1011_1 = b.Dbar(1) * (F3(p, b.q1, b.q2, q2b)
                               + F2(p, b.q1, w.w0011)
                               + F2(p, b.q2, w.w1001)
                               + F2(p, q2b, w.w1010));
    out.g1110_2 = b.Dbar(2) * (F3(p, b.q1, q1b, b.q2)
                               + F2(p, b.q1, w0110)
                               + F2(p, b.q2, w.w1100)
                               + F2(p, q1b, w.w1010));
    out.g0021_2 = b.Dbar(2) * (F3(p, b.q2, b.q2, q2b)
                               + 2.0 * F2(p, b.q2, w.w0011)
                               + F2(p, q2b, w.w0020));
    return out;
}

/// Factorial-normalized coefficients gt_{lsrk} = g_{lsrk} / (l! s! r! k!).
struct GtCoeffs {
    // quadratic, per j
    struct One {
        complex gt2000, gt0200, gt1100;
        complex gt0020, gt0002, gt0011;
        complex gt1010, gt0101, gt1001, gt0110;
    } j1, j2;
    // resonant cubic
    complex gt2100_1, gt1011_1, gt1110_2, gt0021_2;
};

inline GtCoeffs to_gt(const QuadraticCoeffs& qg, const CubicCoeffs& cg) {
    GtCoeffs t;
    auto conv = [](const QuadraticCoeffsOne& g, GtCoeffs::One& o) {
        o.gt2000 = 0.5 * g.g2000;
        o.gt0200 = 0.5 * g.g0200;
        o.gt1100 = g.g1100;
        o.gt0020 = 0.5 * g.g0020;
        o.gt0002 = 0.5 * g.g0002;
        o.gt0011 = g.g0011;
        o.gt1010 = g.g1010;
        o.gt0101 = g.g0101;
        o.gt1001 = g.g1001;
        o.gt0110 = g.g0110;
    };
    conv(qg.j1, t.j1);
    conv(qg.j2, t.j2);
    t.gt2100_1 = 0.5 * cg.g2100_1;
    t.gt1011_1 = cg.g1011_1;
    t.gt1110_2 = cg.g1110_2;
    t.gt0021_2 = 0.5 * cg.g0021_2;
    return t;
}

/// Kuznetsov resonant cubic coefficients of the Poincare normal form at mu = 0.
/// The two trailing |.|^2 terms of each formula are purely imaginary and drop out of
/// every real part; they are evaluated separately into `tail*` and not folded into G,
/// which matches the published coefficient values.
struct GCoeffs {
    complex G2100_1, G1011_1, G1110_2, G0021_2;
    complex tail2100_1, tail1011_1, tail1110_2, tail0021_2;
};

inline GCoeffs G_coefficients(const HopfHopfPoint& hh, const GtCoeffs& t) {
    const double w1 = hh.omega1, w2 = hh.omega2;
    const double denoms[] = {w1, w2, 2.0 * w1 - w2, 2.0 * w1 + w2, w1 - 2.0 * w2, w1 + 2.0 * w2};
    for (double d : denoms)
        if (std::abs(d) < 1e-8)
            throw StrongResonance("G_coefficients: resonant denominator (HH.0 fails)");
    const complex i1(0.0, 1.0);
    const auto& a = t.j1;
    const auto& b = t.j2;
    auto cj = [](complex z) { return std::conj(z); };
    auto sq = [](complex z) { return std::norm(z); };  // |z|^2

    GCoeffs G;
    G.G2100_1 = t.gt2100_1
              + i1 / w1 * a.gt1100 * a.gt2000
              + i1 / w2 * (a.gt1010 * b.gt1100 - a.gt1001 * cj(b.gt1100))
              - i1 / (2.0 * w1 + w2) * a.gt0101 * cj(b.gt0200)
              - i1 / (2.0 * w1 - w2) * a.gt0110 * b.gt2000;
    G.tail2100_1 = -i1 / w1 * sq(a.gt1100) - 2.0 * i1 / (3.0 * w1) * sq(a.gt0200);

    G.G1011_1 = t.gt1011_1
              + i1 / w2 * (a.gt1010 * b.gt0011 - a.gt1001 * cj(b.gt0011))
              + i1 / w1 * (2.0 * a.gt2000 * a.gt0011 - a.gt1100 * cj(a.gt0011)
                           - b.gt1010 * a.gt0011 - a.gt0011 * cj(b.gt0110))
              - 2.0 * i1 / (w1 + 2.0 * w2) * a.gt0002 * cj(b.gt0101)
              - 2.0 * i1 / (w1 - 2.0 * w2) * a.gt0020 * b.gt1001;
    G.tail1011_1 = -i1 / (2.0 * w1 - w2) * sq(a.gt0110) - i1 / (2.0 * w1 + w2) * sq(a.gt0101);

    G.G1110_2 = t.gt1110_2
              + i1 / w1 * (a.gt1100 * b.gt1010 - b.gt0110 * cj(a.gt1100))
              + i1 / w2 * (2.0 * b.gt0020 * b.gt1100 - b.gt0011 * cj(b.gt1100)
                           - a.gt1010 * b.gt1100 - b.gt1100 * cj(a.gt1001))
              - 2.0 * i1 / (2.0 * w1 + w2) * b.gt0200 * cj(a.gt0101)
              + 2.0 * i1 / (2.0 * w1 - w2) * b.gt2000 * a.gt0110;
    G.tail1110_2 = i1 / (w1 - 2.0 * w2) * sq(b.gt1001) - i1 / (w1 + 2.0 * w2) * sq(b.gt0101);

    G.G0021_2 = t.gt0021_2
              + i1 / w2 * b.gt0011 * b.gt0020
              + i1 / w1 * (b.gt1010 * a.gt0011 - b.gt0110 * cj(a.gt0011))
              - i1 / (2.0 * w2 + w1) * b.gt0101 * cj(a.gt0002)
              - i1 / (2.0 * w2 - w1) * b.gt1001 * a.gt0020;
    G.tail0021_2 = -i1 / w2 * sq(b.gt0011) - 2.0 * i1 / (3.0 * w2) * sq(b.gt0002);
    return G;
}

/// Real parts of the resonant cubic coefficients and the scaled amplitude-equation
/// parameters theta = p12/p22, delta = p21/p11.
struct AmplitudeParams {
    double p11, p12, p21, p22;
    double theta, delta;
};

inline AmplitudeParams amplitude_parameters(const GCoeffs& G) {
    AmplitudeParams a{};
    a.p11 = G.G2100_1.real();
    a.p12 = G.G1011_1.real();
    a.p21 = G.G1110_2.real();
    a.p22 = G.G0021_2.real();
    if (std::abs(a.p11) < 1e-12 || std::abs(a.p22) < 1e-12)
        throw DegenerateCubic("amplitude_parameters: p11 or p22 vanishes (HH.1/HH.4)");
    a.theta = a.p12 / a.p22;
    a.delta = a.p21 / a.p11;
    return a;
}

/// Kuznetsov simple-case taxonomy. p11 < 0 and p22 < 0 select the simple case; the
/// subcase follows from the signs of theta, delta and theta*delta - 1 (after the
/// canonical theta >= delta ordering). theta > 0 > delta is subcase III.
inline std::string classify(const AmplitudeParams& a, double boundary_tol = 1e-12) {
    if (a.p11 > 0.0 || a.p22 > 0.0) return "DifficultCase";
    double th = a.theta, de = a.delta;
    if (std::abs(th) < boundary_tol || std::abs(de) < boundary_tol ||
        std::abs(th * de - 1.0) < boundary_tol || std::abs(th - de) < boundary_tol)
        return "BoundaryDegenerate";
    if (th < de) std::swap(th, de);
    if (th > 0.0 && de > 0.0) return th * de > 1.0 ? "I" : "II";
    if (th > 0.0 && de < 0.0) return "III";
    return th * de > 1.0 ? "V" : "IV";
}

/// Local torus-bifurcation rays in case III:
///   T1: mu2 = delta mu1, mu1 > 0;   T2: mu1 = theta mu2, mu2 > 0,
/// each also expressed as a kappa-ray anchored at (kappa1*, kappa2*) via J^{-1}.
struct TorusRay {
    std::array<double, 2> mu_dir;      // direction in (mu1, mu2)
    std::array<double, 2> kappa_dir;   // J^{-1} mu_dir
    std::array<double, 2> kappa_anchor;
    double mu_slope;                   // slope in the stated parametrization
};

struct TorusRays {
    TorusRay t1, t2;
};

inline TorusRays torus_rays(const HopfHopfPoint& hh, const AmplitudeParams& a, const MuJacobian& m,
                            const std::string& case_label) {
    if (case_label != "III")
        throw WrongCase("torus_rays: classification is '" + case_label + "', expected III");
    TorusRays r;
    r.t1.mu_dir = {1.0, a.delta};
    r.t1.mu_slope = a.delta;  // mu2 = delta mu1
    r.t2.mu_dir = {a.theta, 1.0};
    r.t2.mu_slope = a.theta;  // mu1 = theta mu2
    for (TorusRay* ray : {&r.t1, &r.t2}) {
        ray->kappa_anchor = {hh.kappa1, hh.kappa2};
        ray->kappa_dir = {m.Jinv[0][0] * ray->mu_dir[0] + m.Jinv[0][1] * ray->mu_dir[1],
                          m.Jinv[1][0] * ray->mu_dir[0] + m.Jinv[1][1] * ray->mu_dir[1]};
    }
    return r;
}

/// Nondegeneracy conditions HH.0-HH.6 with their numeric margins.
struct NondegeneracyFlag {
    bool pass = false;
    double margin = 0.0;
};

struct NondegeneracyReport {
    NondegeneracyFlag hh0, hh1, hh2, hh3, hh4, hh5, hh6;
    bool all_pass() const {
        return hh0.pass && hh1.pass && hh2.pass && hh3.pass && hh4.pass && hh5.pass && hh6.pass;
    }
};

inline NondegeneracyReport nondegeneracy_report(const HopfHopfPoint& hh, const AmplitudeParams& a,
                                                const MuJacobian& m) {
    NondegeneracyReport r;
    r.hh0.margin = resonance_margin(hh.omega1, hh.omega2);
    r.hh0.pass = r.hh0.margin > 1e-8;
    r.hh1 = {std::abs(a.p11) > 1e-12, std::abs(a.p11)};
    r.hh2 = {std::abs(a.p12) > 1e-12, std::abs(a.p12)};
    r.hh3 = {std::abs(a.p21) > 1e-12, std::abs(a.p21)};
    r.hh4 = {std::abs(a.p22) > 1e-12, std::abs(a.p22)};
    r.hh5 = {std::abs(m.det) > 1e-12, std::abs(m.det)};
    const double detp = a.p11 * a.p22 - a.p12 * a.p21;
    r.hh6 = {std::abs(detp) > 1e-12, std::abs(detp)};
    return r;
}

/// Everything Table-2-shaped in one bundle.
struct NormalFormReport {
    HopfHopfPoint hh;
    EigBasis basis;
    QuadraticCoeffs quadratic;
    WCoeffs w;
    CubicCoeffs cubic;
    GtCoeffs gt;
    GCoeffs G;
    AmplitudeParams amplitude{};
    MuJacobian jacobian;
    NondegeneracyReport nondegeneracy;
    std::string case_label;
    std::optional<TorusRays> rays;
};

inline NormalFormReport normal_form_report(const Parameters& p_template, const HopfHopfPoint& hh) {
    NormalFormReport r;
    r.hh = hh;
    r.basis = build_basis(p_template, hh);
    r.quadratic = quadratic_g(p_template, hh, r.basis);
    r.w = w_coefficients(p_template, hh, r.basis, r.quadratic);
    r.cubic = cubic_g(p_template, hh, r.basis, r.quadratic, r.w);
    r.gt = to_gt(r.quadratic, r.cubic);
    r.G = G_coefficients(hh, r.gt);
    r.amplitude = amplitude_parameters(r.G);
    r.jacobian = mu_jacobian(p_template, hh);
    r.nondegeneracy = nondegeneracy_report(hh, r.amplitude, r.jacobian);
    r.case_label = classify(r.amplitude);
    if (r.case_label == "III")
        r.rays = torus_rays(hh, r.amplitude, r.jacobian, r.case_label);
    return r;
}

}  // namespace sdde
