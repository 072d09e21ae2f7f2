#pragma once

#include "regime_stop/model.hpp"

namespace regime_stop::testing {

/// Calibrated retail-pair baseline used throughout the tests: daily-close
/// drifts/volatilities (annualized), 0.5 discount rate, symmetric window
/// rates of 10/year and 10bp transaction cost. Solves to k = 0.7036247.
inline ModelParams baseline_params() {
    ModelParams p;
    p.mu1 = 0.2059;
    p.mu2 = 0.2459;
    p.sigma11 = 0.3112;
    p.sigma12 = 0.0729;
    p.sigma21 = 0.0729;
    p.sigma22 = 0.2943;
    p.rho = 0.5;
    p.lambda0 = 10.0;
    p.lambda1 = 10.0;
    p.K = 0.001;
    return p;
}

/// The mu/sigma-diagonal label-swapped variant of the baseline; solves to
/// k = 0.6090946. Kept as a regression anchor for the labeling pitfall.
inline ModelParams swapped_baseline_params() {
    ModelParams p = baseline_params();
    std::swap(p.mu1, p.mu2);
    std::swap(p.sigma11, p.sigma22);
    return p;
}

}  // namespace regime_stop::testing
