#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "regime_stop/model.hpp"

namespace regime_stop {

/// Paired close-price history. Dates must be strictly increasing, prices
/// strictly positive, both series the same length.
struct PriceSeries {
    std::vector<std::string> dates;  ///< ISO-8601 trading-day identifiers
    std::vector<double> p1;
    std::vector<double> p2;
};

/**
 * Moment-matched drift and volatility estimates from per-period log returns
 * r_{i,t} = ln(p_{i,t}/p_{i,t-1}): annualized covariance A = Chat * ppy,
 * drifts mu_i = mean_i * ppy + A_ii/2 (Ito correction), and Sigma the
 * symmetric PSD square root of A, so sigma12 = sigma21 by construction.
 * Asymptotic standard errors: se(mu_i) = sqrt(A_ii / years) and
 * se(A_ij) = sqrt((A_ii A_jj + A_ij^2) / (n - 1)).
 */
struct CalibrationResult {
    double mu1 = 0.0, mu2 = 0.0;
    double sigma11 = 0.0, sigma12 = 0.0, sigma21 = 0.0, sigma22 = 0.0;
    double a11 = 0.0, a12 = 0.0, a22 = 0.0;  ///< annualized covariance
    std::int64_t samples = 0;                ///< number of return observations
    int periods_per_year = 0;
    double se_mu1 = 0.0, se_mu2 = 0.0;
    double se_a11 = 0.0, se_a12 = 0.0, se_a22 = 0.0;
};

/// Throws TooFewObservations, NonpositivePrice, LengthMismatch,
/// NonmonotoneDates.
CalibrationResult calibrate(const PriceSeries& series, int periods_per_year = 252,
                            int min_observations = 30);

/// Reads `date,p1,p2` CSV with a header line. Throws BadCsv on malformed
/// rows; series invariants are checked by calibrate().
PriceSeries read_price_csv(std::istream& in);

}  // namespace regime_stop
