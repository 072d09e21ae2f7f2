#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "regime_stop/closed_form.hpp"

namespace regime_stop {

/// Configuration of one policy simulation.
struct SimConfig {
    ModelParams params;
    double x1_0 = 1.0;  ///< initial price of the long leg
    double x2_0 = 1.0;  ///< initial price of the short leg
    int alpha_0 = 1;    ///< initial regime (1 = trading allowed)
    std::int64_t paths = 100000;
    double horizon = 20.0;      ///< truncation time T_max in years
    std::uint64_t seed = 1;
    double monitor_step = 1e-4; ///< monitoring sub-grid step h in years
    std::optional<double> threshold_override;  ///< defaults to the solved k
    int threads = 0;  ///< 0 = REGIME_STOP_THREADS env var, then hardware
};

/// Estimator output. Unstopped paths at the horizon contribute payoff 0;
/// the analytic truncation bound caps the absolute bias this introduces.
struct SimReport {
    double estimate = 0.0;          ///< mean discounted payoff
    double std_error = 0.0;
    double stopped_fraction = 0.0;  ///< fraction of paths with tau <= T_max
    double truncation_bound = 0.0;
    double closed_form_value = 0.0; ///< v_alpha(x1_0, x2_0) for comparison
    double threshold = 0.0;         ///< ratio threshold actually simulated
    double monitor_step = 0.0;
    std::int64_t paths = 0;
    std::uint64_t seed = 0;
    int alpha_0 = 1;
};

/**
 * Simulates the constrained threshold rule. Per path, the regime chain uses
 * exact exponential holding times; between regime events the log-price pair
 * advances by exact bivariate-normal increments with mean (mu_i - a_ii/2)*dt
 * and covariance A*dt. Within allowed intervals the ratio is checked on the
 * step-h sub-grid (anchored at the interval entry) and the path stops at the
 * first checked instant with y <= threshold, collecting
 * exp(-rho*tau)*(beta_s*X1 - beta_b*X2).
 *
 * Identical (seed, config) produce bit-identical reports independent of
 * thread count: path i draws from a stream keyed by (seed, i) and block
 * partial sums are reduced in fixed order.
 */
SimReport simulate_policy(const SimConfig& config);

/// The step-h and step-h/2 estimates from one coupled path ensemble
/// (simulated at h/2; the h monitor checks every second instant), so the
/// difference isolates the monitoring bias from shared randomness.
struct RefinementReport {
    SimReport at_step;
    SimReport at_half_step;
};

RefinementReport simulate_with_refinement(const SimConfig& config);

/// One threshold in a common-random-numbers comparison.
struct DominanceRow {
    double multiplier = 0.0;
    double threshold = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;
    double stopped_fraction = 0.0;
    double diff_vs_unit = 0.0;        ///< estimate(1.0) - estimate(this)
    double paired_std_error = 0.0;    ///< std error of the per-path difference
};

/// Evaluates every multiplier of the solved threshold on shared paths.
/// A multiplier of 1.0 is included whether or not it was requested.
std::vector<DominanceRow> policy_dominance(const SimConfig& config,
                                           std::vector<double> multipliers);

/// beta_s * x1 * exp(-(rho - mu1) * horizon): bound on the absolute expected
/// discounted payoff beyond the horizon, via E[exp(-rho t) X1_t] <=
/// x1 exp(-(rho - mu1) t).
double truncation_bound(const ModelParams& params, double x1_0, double horizon);

class Rng;

namespace detail {

/// Exact sampler of one log-price increment over `span` years: bivariate
/// normal with mean (mu_i - a_ii/2)*span and covariance A*span. The same
/// stepper drives the policy simulation; exposed for distribution tests and
/// synthetic series generation.
struct GbmStepper {
    double m1 = 0.0, m2 = 0.0;
    double l11 = 0.0, l21 = 0.0, l22 = 0.0;

    GbmStepper(const ModelParams& params, const ReducedCoeffs& coeffs);
    void operator()(double span, Rng& rng, double& dlx1, double& dlx2) const;
};

/// Replays one path of simulate_policy in isolation.
struct PathOutcome {
    bool stopped = false;
    double tau = 0.0;
    double payoff = 0.0;
    double x1 = 0.0;  ///< price of the long leg at the stop, 0 if unstopped
    double x2 = 0.0;
};

PathOutcome simulate_one(const SimConfig& config, std::uint64_t path_index);

}  // namespace detail

}  // namespace regime_stop
