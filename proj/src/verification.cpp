#include "regime_stop/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "regime_stop/rng.hpp"

namespace regime_stop {

namespace {

/// Action of L on y^p: L[y^p] = q(p) * y^p.
double l_eigenvalue(const Solution& s, double p) {
    return s.coeffs.sigma * p * (p - 1.0) + (s.params.mu2 - s.params.mu1) * p +
           s.params.mu1;
}

struct Accumulator {
    double min_value = std::numeric_limits<double>::infinity();
    double argmin = 0.0;

    void feed(double value, double at) {
        if (value < min_value) {
            min_value = value;
            argmin = at;
        }
    }
};

}  // namespace

ResidualReport qvi_residuals(const Solution& s, const GridSpec& grid) {
    const auto& c = s.coeffs;
    const auto& r = s.roots;
    const double l0 = s.params.lambda0, l1 = s.params.lambda1;
    const double rho = s.params.rho;
    const double k = s.k;
    const int n = grid.points_per_region;

    const double q_d1 = l_eigenvalue(s, r.delta1);
    const double q_d3 = l_eigenvalue(s, r.delta3);
    const double q_g2 = l_eigenvalue(s, r.gamma2);
    const double q_const = s.params.mu1;  // L on constants
    const double q_lin = s.params.mu2;    // L on y

    ResidualReport rep;
    rep.tol_qvi = 1e-9 * c.beta_s;
    rep.grid.reserve(2 * static_cast<std::size_t>(n));

    Accumulator psi_acc, phi_acc, phi_prime_acc;
    double ode_max = 0.0;
    double psi_second_max = -std::numeric_limits<double>::infinity();
    double phi_second_min = std::numeric_limits<double>::infinity();

    // psi coefficients on (0,k): psi(y) = A - B*y - lambda1*C2*y^gamma2
    const double psi_a = (rho + (1.0 - c.a0) * l1 - s.params.mu1) * c.beta_s;
    const double psi_b = (rho + (1.0 - c.a1) * l1 - s.params.mu2) * c.beta_b;

    for (int j = 0; j < n; ++j) {
        const double expo = -grid.decades * (1.0 - (j + 0.5) / n);
        const double y = k * std::pow(10.0, expo);
        rep.grid.push_back(y);
        const double t = std::pow(y / k, r.gamma2);  // (y/k)^gamma2 <= 1 here

        psi_acc.feed(psi_a - psi_b * y - l1 * s.u2 * t, y);
        psi_second_max = std::max(
            psi_second_max, -l1 * r.gamma2 * (r.gamma2 - 1.0) * s.u2 * t / (y * y));

        // state-0 ODE on (0,k): (rho+l0) w0 - L w0 - l0 w1 = 0 with
        // w0 = u2 (y/k)^g2 + a0 bs - a1 bb y and w1 = bs - bb y
        const double term_g2 = s.u2 * t;
        const double term_c = c.a0 * c.beta_s;
        const double term_l = -c.a1 * c.beta_b * y;
        const double w0 = term_g2 + term_c + term_l;
        const double w1 = c.beta_s - c.beta_b * y;
        const double lw0 = q_g2 * term_g2 + q_const * term_c + q_lin * term_l;
        const double resid = (rho + l0) * w0 - lw0 - l0 * w1;
        const double scale = std::abs((rho + l0) * w0) + std::abs(q_g2 * term_g2) +
                             std::abs(q_const * term_c) + std::abs(q_lin * term_l) +
                             std::abs(l0 * w1);
        // below ~1e-280 the power terms are subnormal and relative arithmetic
        // is meaningless; the equation holds trivially there
        if (scale > 1e-280) ode_max = std::max(ode_max, std::abs(resid) / scale);
    }

    for (int j = 0; j < n; ++j) {
        const double expo = grid.decades * (j + 0.5) / n;
        const double y = k * std::pow(10.0, expo);
        rep.grid.push_back(y);
        const double t1 = std::pow(y / k, r.delta1);  // <= 1 here
        const double t3 = std::pow(y / k, r.delta3);

        const double term1 = s.u1 * t1;
        const double term3 = s.u3 * t3;
        const double w1 = term1 + term3;
        const double w0 = term1 - c.eta * term3;

        const double phi = w1 - c.beta_s + c.beta_b * y;
        phi_acc.feed(phi, y);
        phi_prime_acc.feed((r.delta1 * term1 + r.delta3 * term3) / y + c.beta_b, y);
        phi_second_min = std::min(
            phi_second_min, (r.delta1 * (r.delta1 - 1.0) * term1 +
                             r.delta3 * (r.delta3 - 1.0) * term3) / (y * y));

        // both ODEs hold on (k,inf)
        const double lw1 = q_d1 * term1 + q_d3 * term3;
        const double resid1 = (rho + l1) * w1 - lw1 - l1 * w0;
        const double scale1 = std::abs((rho + l1) * w1) + std::abs(q_d1 * term1) +
                              std::abs(q_d3 * term3) + std::abs(l1 * w0);
        if (scale1 > 1e-280) ode_max = std::max(ode_max, std::abs(resid1) / scale1);

        const double lw0 = q_d1 * term1 - c.eta * q_d3 * term3;
        const double resid0 = (rho + l0) * w0 - lw0 - l0 * w1;
        const double scale0 = std::abs((rho + l0) * w0) + std::abs(q_d1 * term1) +
                              std::abs(c.eta * q_d3 * term3) + std::abs(l0 * w1);
        if (scale0 > 1e-280) ode_max = std::max(ode_max, std::abs(resid0) / scale0);
    }

    rep.psi_min = psi_acc.min_value;
    rep.psi_argmin = psi_acc.argmin;
    rep.phi_min = phi_acc.min_value;
    rep.phi_argmin = phi_acc.argmin;
    rep.phi_prime_min = phi_prime_acc.min_value;
    rep.psi_second_max = psi_second_max;
    rep.phi_second_min = phi_second_min;
    rep.ode_residual_max = ode_max;
    rep.smoothfit_gap = smooth_fit_check(s).scaled_max;
    return rep;
}

SmoothFitReport smooth_fit_check(const Solution& s) {
    const auto& c = s.coeffs;
    const auto& r = s.roots;
    const double k = s.k;
    const double bs = c.beta_s, bb = c.beta_b;

    SmoothFitReport rep;

    const double w1_minus = bs - bb * k;
    const double w1_plus = s.u1 + s.u3;
    rep.w1_value_gap = std::abs(w1_minus - w1_plus);
    const double scale_w1v = std::abs(bs) + std::abs(bb * k) + s.u1 + s.u3;

    const double w1p_minus = -bb;
    const double w1p_plus = (r.delta1 * s.u1 + r.delta3 * s.u3) / k;
    rep.w1_deriv_gap = std::abs(w1p_minus - w1p_plus);
    const double scale_w1d =
        bb + (std::abs(r.delta1) * s.u1 + std::abs(r.delta3) * s.u3) / k;

    const double w0_minus = s.u2 + c.a0 * bs - c.a1 * bb * k;
    const double w0_plus = s.u1 - c.eta * s.u3;
    rep.w0_value_gap = std::abs(w0_minus - w0_plus);
    const double scale_w0v =
        s.u2 + c.a0 * bs + c.a1 * bb * k + s.u1 + c.eta * s.u3;

    const double w0p_minus = r.gamma2 * s.u2 / k - c.a1 * bb;
    const double w0p_plus = (r.delta1 * s.u1 - c.eta * r.delta3 * s.u3) / k;
    rep.w0_deriv_gap = std::abs(w0p_minus - w0p_plus);
    const double scale_w0d = r.gamma2 * s.u2 / k + c.a1 * bb +
                             (std::abs(r.delta1) * s.u1 +
                              c.eta * std::abs(r.delta3) * s.u3) / k;

    rep.scaled_max = std::max({rep.w1_value_gap / scale_w1v,
                               rep.w1_deriv_gap / scale_w1d,
                               rep.w0_value_gap / scale_w0v,
                               rep.w0_deriv_gap / scale_w0d});

    rep.w1_second_minus = 0.0;
    rep.w1_second_plus = (r.delta1 * (r.delta1 - 1.0) * s.u1 +
                          r.delta3 * (r.delta3 - 1.0) * s.u3) / (k * k);
    return rep;
}

ModelParams sample_valid_params(std::uint64_t seed, std::uint64_t draw_index) {
    Rng rng(seed, draw_index);
    ModelParams p;
    p.rho = rng.uniform(0.05, 1.0);
    p.lambda0 = rng.log_uniform(1e-2, 1e3);
    p.lambda1 = rng.log_uniform(1e-2, 1e3);
    p.mu1 = rng.uniform(-0.3, p.rho - 0.01);
    p.mu2 = rng.uniform(-0.3, p.rho - 0.01);
    p.K = rng.uniform(0.0, 0.01);
    do {
        p.sigma11 = rng.uniform(-0.5, 0.5);
        p.sigma12 = rng.uniform(-0.5, 0.5);
        p.sigma21 = rng.uniform(-0.5, 0.5);
        p.sigma22 = rng.uniform(-0.5, 0.5);
    } while (derive_coeffs(p).sigma <= 1e-6);
    return p;
}

PositivitySummary positivity_sweep(std::uint64_t draw_count, std::uint64_t seed) {
    PositivitySummary summary;
    summary.draws = draw_count;
    for (std::uint64_t i = 0; i < draw_count; ++i) {
        const ModelParams p = sample_valid_params(seed, i);
        const ReducedCoeffs c = derive_coeffs(p);
        if (p.mu1 > p.mu2) ++summary.case_mu1_gt_mu2;
        if (c.sigma + p.mu1 <= p.mu2) ++summary.case_sigma_le_gap;

        std::string reason;
        try {
            const Solution s = solve(p);
            const double lo =
                -s.roots.delta1 / (1.0 - s.roots.delta1) * c.beta_s / c.beta_b;
            const double hi =
                -s.roots.delta3 / (1.0 - s.roots.delta3) * c.beta_s / c.beta_b;
            char buf[128];
            if (!(s.k > 0.0)) {
                std::snprintf(buf, sizeof(buf), "k = %.17g not positive", s.k);
                reason = buf;
            } else if (!(lo < s.k && s.k < hi)) {
                std::snprintf(buf, sizeof(buf),
                              "k = %.17g outside bracket (%.17g, %.17g)", s.k, lo, hi);
                reason = buf;
            } else if (!(s.u1 > 0.0 && s.u2 > 0.0 && s.u3 > 0.0)) {
                std::snprintf(buf, sizeof(buf),
                              "coefficient not positive: u1=%g u2=%g u3=%g",
                              s.u1, s.u2, s.u3);
                reason = buf;
            }
        } catch (const Error& e) {
            reason = std::string(e.code()) + ": " + e.what();
        }

        if (!reason.empty()) {
            ++summary.failures;
            summary.counterexamples.push_back({i, p, std::move(reason)});
        }
    }
    return summary;
}

}  // namespace regime_stop
