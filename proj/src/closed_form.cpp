#include "regime_stop/closed_form.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>

namespace regime_stop {

namespace {

void require_positive_ratio(double y) {
    if (!(y > 0.0)) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "ratio y must be > 0, got %g", y);
        throw Error("NonpositiveRatio", buf);
    }
}

}  // namespace

Roots compute_roots(const ReducedCoeffs& c, const ModelParams& p) {
    const double b = 1.0 + (p.mu1 - p.mu2) / c.sigma;
    const double q_plain = 4.0 * (p.rho - p.mu1) / c.sigma;
    const double q_both = 4.0 * (p.rho + p.lambda0 + p.lambda1 - p.mu1) / c.sigma;
    const double q_zero = 4.0 * (p.rho + p.lambda0 - p.mu1) / c.sigma;
    // under A1 all three discriminants exceed b^2
    assert(b * b + q_plain > 0.0);
    assert(b * b + q_both > 0.0);
    assert(b * b + q_zero > 0.0);
    const double r_plain = std::sqrt(b * b + q_plain);
    const double r_both = std::sqrt(b * b + q_both);
    const double r_zero = std::sqrt(b * b + q_zero);

    Roots r;
    r.delta1 = 0.5 * (b - r_plain);
    r.delta2 = 0.5 * (b + r_plain);
    r.delta3 = 0.5 * (b - r_both);
    r.delta4 = 0.5 * (b + r_both);
    r.gamma1 = 0.5 * (b - r_zero);
    r.gamma2 = 0.5 * (b + r_zero);
    return r;
}

double threshold_k(const Roots& r, const ReducedCoeffs& c) {
    const double b0 = 1.0 - c.a0;
    const double b1 = 1.0 - c.a1;
    // every factor below is positive under A1: no cancellation
    const double num = (1.0 + c.eta) * (-r.delta1) * (r.gamma2 - r.delta3) +
                       b0 * (r.delta1 - r.delta3) * r.gamma2;
    const double den = (1.0 + c.eta) * (r.gamma2 - r.delta3) * (1.0 - r.delta1) +
                       b1 * (r.gamma2 - 1.0) * (r.delta1 - r.delta3);
    return num / den * c.beta_s / c.beta_b;
}

double threshold_k_ungrouped(const Roots& r, const ReducedCoeffs& c) {
    const double d1 = r.delta1, d3 = r.delta3, g2 = r.gamma2, eta = c.eta;
    const double num = d1 * d3 * (1.0 + eta) - (d3 + eta * d1) * g2 -
                       c.a0 * (d1 - d3) * g2;
    const double den = (1.0 + eta) * (d1 * d3 + g2) - (d3 + eta * d1) * g2 -
                       (d1 + eta * d3) - c.a1 * (g2 - 1.0) * (d1 - d3);
    return num / den * c.beta_s / c.beta_b;
}

namespace {

/// The two published routes to C2*k^gamma2 are affine in k and meet exactly
/// at the threshold; re-solving their intersection in extended precision from
/// the regrouped seed strips the last few ulps of formula rounding, which the
/// gamma2-amplified smooth-fit gap would otherwise see on extreme draws.
long double polish_threshold(const Roots& r, const ReducedCoeffs& c, double k) {
    const long double d1 = r.delta1, d3 = r.delta3, g2 = r.gamma2;
    const long double bs = c.beta_s, bb = c.beta_b;
    const long double a0 = c.a0, a1 = c.a1, eta = c.eta;
    const long double pa = (1.0L - a0) * (-d3) * bs / (g2 - d3);
    const long double qa = -(1.0L - a1) * (1.0L - d3) * bb / (g2 - d3);
    const long double pb = (a0 + eta) * d1 * bs / (g2 - d1);
    const long double qb = (eta + a1) * (1.0L - d1) * bb / (g2 - d1);
    const long double slope = qa - qb;
    if (slope == 0.0L) return k;
    const long double intersection = (pb - pa) / slope;
    return std::abs(static_cast<double>(intersection) - k) <= 1e-8 * k
               ? intersection
               : static_cast<long double>(k);
}

/// Smooth-fit coefficients at an extended-precision threshold, double-rounded
/// on the way out so the stored (k, u1, u2, u3) stay mutually consistent to
/// ~1e-16. Extended precision matters: u3 loses up to seven digits to genuine
/// cancellation when the threshold sits near the bracket edge where C3
/// vanishes, and eta*|delta3| ~ 1e7 on extreme draws amplifies what is left.
Coefficients coefficients_at(const Roots& r, const ReducedCoeffs& c,
                             long double kl) {
    const long double d1 = r.delta1, d3 = r.delta3, g2 = r.gamma2;
    const long double bs = c.beta_s, bb = c.beta_b;
    // continuity and first-derivative matching of w1 at k:
    //   u1 + u3 = bs - bb*k,  d1*u1 + d3*u3 = -bb*k
    const long double u1 = (d3 * (bs - bb * kl) + bb * kl) / (d3 - d1);
    const long double u3 = (-bb * kl - d1 * (bs - bb * kl)) / (d3 - d1);
    // the matching pair for w0, solved for u2 = C2*k^gamma2; at the smooth-fit
    // threshold both routes to u2 agree, so use the better-scaled one
    const long double u2 =
        ((1.0L - static_cast<long double>(c.a0)) * (-d3) * bs -
         (1.0L - static_cast<long double>(c.a1)) * (1.0L - d3) * bb * kl) /
        (g2 - d3);

    Coefficients out;
    out.u1 = static_cast<double>(u1);
    out.u2 = static_cast<double>(u2);
    out.u3 = static_cast<double>(u3);
    if (!(out.u1 > 0.0) || !(out.u2 > 0.0) || !(out.u3 > 0.0)) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "anchored coefficients must be positive, got u1=%g u2=%g u3=%g",
                      out.u1, out.u2, out.u3);
        throw Error("NonpositiveCoefficient", buf);
    }
    const long double logk = std::log(kl);
    out.C1 = static_cast<double>(std::exp(std::log(u1) - d1 * logk));
    out.C2 = static_cast<double>(std::exp(std::log(u2) - g2 * logk));
    out.C3 = static_cast<double>(std::exp(std::log(u3) - d3 * logk));
    return out;
}

}  // namespace

Coefficients coefficients(const Roots& r, const ReducedCoeffs& c, double k) {
    return coefficients_at(r, c, static_cast<long double>(k));
}

Solution solve(const ModelParams& params) {
    const ModelParams p = validate(params);
    Solution s;
    s.params = p;
    s.coeffs = derive_coeffs(p);
    s.roots = compute_roots(s.coeffs, p);
    const long double k_refined =
        polish_threshold(s.roots, s.coeffs, threshold_k(s.roots, s.coeffs));
    s.k = static_cast<double>(k_refined);
    const Coefficients co = coefficients_at(s.roots, s.coeffs, k_refined);
    s.C1 = co.C1;
    s.C2 = co.C2;
    s.C3 = co.C3;
    s.u1 = co.u1;
    s.u2 = co.u2;
    s.u3 = co.u3;
    return s;
}

double Solution::w1(double y) const {
    require_positive_ratio(y);
    // stopping region is the closed set {y <= k}; the branches agree at k
    if (y <= k) return coeffs.beta_s - coeffs.beta_b * y;
    const double t = y / k;
    return u1 * std::pow(t, roots.delta1) + u3 * std::pow(t, roots.delta3);
}

double Solution::w0(double y) const {
    require_positive_ratio(y);
    if (y < k)
        return u2 * std::pow(y / k, roots.gamma2) + coeffs.a0 * coeffs.beta_s -
               coeffs.a1 * coeffs.beta_b * y;
    const double t = y / k;
    return u1 * std::pow(t, roots.delta1) - coeffs.eta * u3 * std::pow(t, roots.delta3);
}

double Solution::w1_prime(double y) const {
    require_positive_ratio(y);
    if (y <= k) return -coeffs.beta_b;
    const double t = y / k;
    return (roots.delta1 * u1 * std::pow(t, roots.delta1) +
            roots.delta3 * u3 * std::pow(t, roots.delta3)) / y;
}

double Solution::w0_prime(double y) const {
    require_positive_ratio(y);
    if (y < k)
        return roots.gamma2 * u2 * std::pow(y / k, roots.gamma2) / y -
               coeffs.a1 * coeffs.beta_b;
    const double t = y / k;
    return (roots.delta1 * u1 * std::pow(t, roots.delta1) -
            coeffs.eta * roots.delta3 * u3 * std::pow(t, roots.delta3)) / y;
}

double Solution::w1_second(double y) const {
    require_positive_ratio(y);
    if (y <= k) return 0.0;
    const double t = y / k;
    return (roots.delta1 * (roots.delta1 - 1.0) * u1 * std::pow(t, roots.delta1) +
            roots.delta3 * (roots.delta3 - 1.0) * u3 * std::pow(t, roots.delta3)) /
           (y * y);
}

double Solution::w0_second(double y) const {
    require_positive_ratio(y);
    if (y < k)
        return roots.gamma2 * (roots.gamma2 - 1.0) * u2 *
               std::pow(y / k, roots.gamma2) / (y * y);
    const double t = y / k;
    return (roots.delta1 * (roots.delta1 - 1.0) * u1 * std::pow(t, roots.delta1) -
            coeffs.eta * roots.delta3 * (roots.delta3 - 1.0) * u3 *
                std::pow(t, roots.delta3)) /
           (y * y);
}

double Solution::value(double x1, double x2, int alpha) const {
    if (!(x1 > 0.0) || !(x2 > 0.0)) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "prices must be > 0, got x1=%g, x2=%g", x1, x2);
        throw Error("NonpositivePrice", buf);
    }
    const double y = x2 / x1;
    return x1 * (alpha == 0 ? w0(y) : w1(y));
}

double k0_limit(const ModelParams& p) {
    const ReducedCoeffs c = derive_coeffs(p);
    const double b = 1.0 + (p.mu1 - p.mu2) / c.sigma;
    const double d1 = 0.5 * (b - std::sqrt(b * b + 4.0 * (p.rho - p.mu1) / c.sigma));
    return (-d1) / (1.0 - d1) * c.beta_s / c.beta_b;
}

double k1_limit(const ModelParams& p) {
    const ReducedCoeffs c = derive_coeffs(p);
    const Roots r = compute_roots(c, p);
    const double num = -r.delta1 + r.gamma2 * (1.0 - c.a0);
    const double den = 1.0 - r.delta1 + (r.gamma2 - 1.0) * (1.0 - c.a1);
    return num / den * c.beta_s / c.beta_b;
}

}  // namespace regime_stop
