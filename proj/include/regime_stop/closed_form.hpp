#pragma once

#include "regime_stop/model.hpp"

namespace regime_stop {

/**
 * Characteristic exponents of the two Cauchy-Euler equations driving the
 * reduced problem. delta1..delta4 are the four roots of the factored quartic
 * (delta1 < 0 < 1 < delta2 from the rho-factor, delta3 < delta1 and
 * delta4 > delta2 from the (rho + lambda0 + lambda1)-factor); gamma1 < 0 and
 * gamma2 > 1 solve the (rho + lambda0) quadratic. Only delta1, delta3 and
 * gamma2 enter the bounded solution; the rest are kept for diagnostics.
 */
struct Roots {
    double delta1 = 0.0;
    double delta2 = 0.0;
    double delta3 = 0.0;
    double delta4 = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
};

/**
 * Threshold and series coefficients of the piecewise value functions.
 *
 * In the ratio variable y = x2/x1:
 *   w1(y) = beta_s - beta_b*y                  on (0,k),
 *   w1(y) = C1*y^delta1 + C3*y^delta3          on [k,inf);
 *   w0(y) = C2*y^gamma2 + a0*beta_s - a1*beta_b*y     on (0,k),
 *   w0(y) = C1*y^delta1 - eta*C3*y^delta3      on [k,inf).
 *
 * Evaluation uses threshold-anchored coefficients u_i = C_i * k^(exponent),
 * so powers appear only as (y/k)^p with p of the bounded sign; this stays
 * finite when |delta3|, gamma2 ~ sqrt(lambda/sigma) reach ~3e4 in asymptotic
 * sweeps, where the raw C2, C3 over/underflow a double. The raw coefficients
 * are still populated for reporting.
 */
struct Solution {
    ModelParams params;
    ReducedCoeffs coeffs;
    Roots roots;
    double k = 0.0;   ///< threshold in ratio units; stop region is {y <= k}
    double C1 = 0.0;  ///< raw coefficients; positive for all A1-valid inputs
    double C2 = 0.0;
    double C3 = 0.0;
    double u1 = 0.0;  ///< C1 * k^delta1
    double u2 = 0.0;  ///< C2 * k^gamma2
    double u3 = 0.0;  ///< C3 * k^delta3

    double w0(double y) const;  ///< value per unit of x1, regime 0
    double w1(double y) const;  ///< value per unit of x1, regime 1
    double w0_prime(double y) const;
    double w1_prime(double y) const;
    double w0_second(double y) const;
    double w1_second(double y) const;

    /// v_alpha(x1, x2) = x1 * w_alpha(x2/x1); throws NonpositivePrice.
    double value(double x1, double x2, int alpha) const;
};

/// Closed-form evaluation of the six root formulas; no iterative solving.
/// Discriminants are positive under A1 (asserted, not branched on).
Roots compute_roots(const ReducedCoeffs& coeffs, const ModelParams& params);

/// Threshold via the regrouped form whose numerator and denominator are sums
/// of positive terms under A1; agrees with threshold_k_ungrouped to ~1e-15.
double threshold_k(const Roots& roots, const ReducedCoeffs& coeffs);

/// The direct (unregrouped) published form, kept as a cross-check.
double threshold_k_ungrouped(const Roots& roots, const ReducedCoeffs& coeffs);

struct Coefficients {
    double C1 = 0.0, C2 = 0.0, C3 = 0.0;  ///< raw series coefficients
    double u1 = 0.0, u2 = 0.0, u3 = 0.0;  ///< anchored at k (see Solution)
};

/// Solves the smooth-fit system at the given threshold. Throws
/// NonpositiveCoefficient if any anchored coefficient is not strictly
/// positive, which indicates an upstream arithmetic bug, never a user error.
Coefficients coefficients(const Roots& roots, const ReducedCoeffs& coeffs, double k);

/// Assembles the full solution for validated parameters.
Solution solve(const ModelParams& params);

/// Threshold of the unconstrained problem, the lambda0 -> inf limit.
double k0_limit(const ModelParams& params);

/// lambda1 -> inf limit at fixed lambda0; strictly above k0_limit.
double k1_limit(const ModelParams& params);

}  // namespace regime_stop
