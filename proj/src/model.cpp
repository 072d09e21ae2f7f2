#include "regime_stop/model.hpp"

#include <cstdio>

namespace regime_stop {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), pattern, a, b);
    return buf;
}

double combined_sigma(const ModelParams& p) {
    const double a11 = p.sigma11 * p.sigma11 + p.sigma12 * p.sigma12;
    const double a12 = p.sigma11 * p.sigma21 + p.sigma12 * p.sigma22;
    const double a22 = p.sigma21 * p.sigma21 + p.sigma22 * p.sigma22;
    return (a11 - 2.0 * a12 + a22) / 2.0;
}

}  // namespace

std::vector<ValidationIssue> check(const ModelParams& p) {
    std::vector<ValidationIssue> issues;
    if (!(p.rho > p.mu1))
        issues.push_back({"A1Violation",
                          fmt("requires rho > mu1, got rho=%g, mu1=%g", p.rho, p.mu1)});
    if (!(p.rho > p.mu2))
        issues.push_back({"A1Violation",
                          fmt("requires rho > mu2, got rho=%g, mu2=%g", p.rho, p.mu2)});
    if (!(p.lambda0 > 0.0))
        issues.push_back({"NonpositiveRate", fmt("lambda0 must be > 0, got %g", p.lambda0)});
    if (!(p.lambda1 > 0.0))
        issues.push_back({"NonpositiveRate", fmt("lambda1 must be > 0, got %g", p.lambda1)});
    if (!(p.K >= 0.0 && p.K < 1.0))
        issues.push_back({"CostOutOfRange", fmt("K must satisfy 0 <= K < 1, got %g", p.K)});
    // sigma = 0 collapses the ratio diffusion to a first-order problem, which
    // is out of scope by design; reject rather than fall back.
    if (!(combined_sigma(p) > 0.0))
        issues.push_back({"DegenerateSigma",
                          fmt("combined sigma = (a11 - 2 a12 + a22)/2 must be > 0, got %g",
                              combined_sigma(p))});
    return issues;
}

ModelParams validate(const ModelParams& raw) {
    auto issues = check(raw);
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return raw;
}

ReducedCoeffs derive_coeffs(const ModelParams& p) {
    ReducedCoeffs c;
    c.a11 = p.sigma11 * p.sigma11 + p.sigma12 * p.sigma12;
    c.a12 = p.sigma11 * p.sigma21 + p.sigma12 * p.sigma22;
    c.a22 = p.sigma21 * p.sigma21 + p.sigma22 * p.sigma22;
    c.sigma = (c.a11 - 2.0 * c.a12 + c.a22) / 2.0;
    c.beta_s = 1.0 - p.K;
    c.beta_b = 1.0 + p.K;
    c.a0 = p.lambda0 / (p.rho + p.lambda0 - p.mu1);
    c.a1 = p.lambda0 / (p.rho + p.lambda0 - p.mu2);
    c.eta = p.lambda0 / p.lambda1;
    return c;
}

}  // namespace regime_stop
