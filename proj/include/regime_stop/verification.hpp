#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "regime_stop/closed_form.hpp"

namespace regime_stop {

/// Evaluation grid: log-spaced points per region, spanning the given number
/// of decades on each side of the threshold, endpoints excluded.
struct GridSpec {
    int points_per_region = 4096;
    double decades = 3.0;
};

/**
 * Residual certificate for the coupled variational inequalities.
 *
 * psi(y) = (rho + lambda1 - L) w1 - lambda1 w0 must be >= 0 on (0,k);
 * phi(y) = w1(y) - beta_s + beta_b y must be >= 0 on (k,inf). Both are
 * evaluated from the closed-form pieces (L has a closed action on powers,
 * constants and linear terms), never by finite differences. ODE residuals
 * and smooth-fit gaps are scale-relative: each is divided by the sum of the
 * magnitudes of the terms entering its equation.
 */
struct ResidualReport {
    std::vector<double> grid;       ///< ordered y values, both regions
    double psi_min = 0.0;           ///< min of psi over grid points in (0,k)
    double psi_argmin = 0.0;
    double phi_min = 0.0;           ///< min of phi over grid points in (k,inf)
    double phi_argmin = 0.0;
    double ode_residual_max = 0.0;  ///< max relative residual of both ODEs
    double smoothfit_gap = 0.0;     ///< max scale-relative gap at the threshold
    double psi_second_max = 0.0;    ///< concavity check: should stay < 0
    double phi_second_min = 0.0;    ///< convexity check: should stay > 0
    double phi_prime_min = 0.0;     ///< monotonicity check: should stay >= 0
    double tol_qvi = 0.0;           ///< 1e-9 * beta_s (payoff-scaled)
    double tol_ode = 1e-9;
    double tol_fit = 1e-10;

    bool pass() const {
        return psi_min >= -tol_qvi && phi_min >= -tol_qvi &&
               ode_residual_max <= tol_ode && smoothfit_gap <= tol_fit;
    }
};

ResidualReport qvi_residuals(const Solution& solution, const GridSpec& grid = {});

/// Continuity and first-derivative mismatches at the threshold, from the
/// analytic branch formulas on each side.
struct SmoothFitReport {
    double w1_value_gap = 0.0;
    double w1_deriv_gap = 0.0;
    double w0_value_gap = 0.0;
    double w0_deriv_gap = 0.0;
    double scaled_max = 0.0;       ///< max gap divided by its equation's scale
    double w1_second_minus = 0.0;  ///< 0 by construction (linear payoff side)
    double w1_second_plus = 0.0;   ///< strictly positive at the threshold
};

SmoothFitReport smooth_fit_check(const Solution& solution);

/// One failed draw, kept verbatim so the failure can be replayed.
struct PositivityCounterexample {
    std::uint64_t draw_index = 0;
    ModelParams params;
    std::string reason;
};

struct PositivitySummary {
    std::uint64_t draws = 0;
    std::uint64_t failures = 0;
    std::uint64_t case_mu1_gt_mu2 = 0;     ///< draws exercising mu1 > mu2
    std::uint64_t case_sigma_le_gap = 0;   ///< draws with sigma + mu1 <= mu2
    std::vector<PositivityCounterexample> counterexamples;

    bool pass() const { return failures == 0; }
};

/**
 * Samples A1-valid parameters (rates log-uniform on [1e-2, 1e3], drifts
 * uniform on [-0.3, rho - 0.01] with rho uniform on [0.05, 1], volatility
 * entries uniform on [-0.5, 0.5] rejecting combined sigma <= 1e-6, K uniform
 * on [0, 0.01]) and checks k > 0, the threshold bracket
 * (-d1/(1-d1))(bs/bb) < k < (-d3/(1-d3))(bs/bb) and C1, C2, C3 > 0.
 * Draw i depends only on (seed, i), so any failure replays in isolation.
 */
PositivitySummary positivity_sweep(std::uint64_t draw_count, std::uint64_t seed);

/// The sweep's parameter sampler, exposed so tests can replay single draws.
ModelParams sample_valid_params(std::uint64_t seed, std::uint64_t draw_index);

}  // namespace regime_stop
