#pragma once

#include <array>
#include <vector>

#include "regime_stop/errors.hpp"

namespace regime_stop {

/**
 * Model parameters for the two-stock system with a two-state trading window
 * chain. All rates are annualized: drifts and the discount rate in 1/year,
 * volatility entries in 1/sqrt(year), jump rates in 1/year. K is the
 * proportional transaction cost (dimensionless fraction of notional).
 *
 * Stock 1 is the long leg, stock 2 the short leg; closing the position pays
 * (1-K)*X1 - (1+K)*X2 at the first allowed instant.
 */
struct ModelParams {
    double mu1 = 0.0;      ///< drift of stock 1
    double mu2 = 0.0;      ///< drift of stock 2
    double sigma11 = 0.0;  ///< volatility matrix, row 1
    double sigma12 = 0.0;
    double sigma21 = 0.0;  ///< volatility matrix, row 2
    double sigma22 = 0.0;
    double rho = 0.0;      ///< discount rate; must exceed both drifts
    double lambda0 = 0.0;  ///< jump rate out of state 0 (trading closed)
    double lambda1 = 0.0;  ///< jump rate out of state 1 (trading allowed)
    double K = 0.0;        ///< proportional transaction cost, 0 <= K < 1
};

/// Scalars of the reduced one-dimensional problem in the ratio y = x2/x1.
struct ReducedCoeffs {
    double a11 = 0.0;     ///< sigma11^2 + sigma12^2
    double a12 = 0.0;     ///< sigma11*sigma21 + sigma12*sigma22
    double a22 = 0.0;     ///< sigma21^2 + sigma22^2
    double sigma = 0.0;   ///< combined coefficient (a11 - 2 a12 + a22)/2
    double beta_s = 0.0;  ///< net sale multiplier 1 - K
    double beta_b = 0.0;  ///< gross buy-back multiplier 1 + K
    double a0 = 0.0;      ///< lambda0 / (rho + lambda0 - mu1), in (0,1)
    double a1 = 0.0;      ///< lambda0 / (rho + lambda0 - mu2), in (0,1)
    double eta = 0.0;     ///< rate ratio lambda0 / lambda1
};

/// Two-state trading-window chain: state 0 = closed, state 1 = allowed.
struct MarkovChainSpec {
    double lambda0 = 0.0;
    double lambda1 = 0.0;

    /// Generator rows sum to zero: [[-l0, l0], [l1, -l1]].
    std::array<std::array<double, 2>, 2> generator() const {
        return {{{-lambda0, lambda0}, {lambda1, -lambda1}}};
    }

    /// Long-run fraction of time spent in state 1.
    double stationary_open_fraction() const {
        return lambda0 / (lambda0 + lambda1);
    }
};

/// Reports every violated invariant; empty means the parameters are valid.
/// Codes: A1Violation, NonpositiveRate, DegenerateSigma, CostOutOfRange.
std::vector<ValidationIssue> check(const ModelParams& raw);

/// Returns the parameters unchanged if valid, otherwise throws a
/// ValidationError listing all violations found.
ModelParams validate(const ModelParams& raw);

/// Pure function of the validated parameters; never reads prices.
ReducedCoeffs derive_coeffs(const ModelParams& params);

}  // namespace regime_stop
