#include "regime_stop/closed_form.hpp"

#include <cmath>

#include "doctest.h"
#include "regime_stop/rng.hpp"
#include "regime_stop/verification.hpp"
#include "test_helpers.hpp"

using namespace regime_stop;
using testing::baseline_params;
using testing::swapped_baseline_params;

namespace {

// test-side oracle: residual of a root against its quadratic factor
// sigma*d*(d-1) + (mu2-mu1)*d + mu1 - rho - shift = 0, relative to the
// magnitude of the terms entering it
double root_residual(const ModelParams& p, const ReducedCoeffs& c, double d,
                     double shift) {
    const double t1 = c.sigma * d * (d - 1.0);
    const double t2 = (p.mu2 - p.mu1) * d;
    const double t3 = p.mu1 - p.rho - shift;
    const double scale = std::abs(t1) + std::abs(t2) + std::abs(t3);
    return std::abs(t1 + t2 + t3) / scale;
}

double max_root_residual(const ModelParams& p) {
    const ReducedCoeffs c = derive_coeffs(p);
    const Roots r = compute_roots(c, p);
    const double both = p.lambda0 + p.lambda1;
    double worst = 0.0;
    worst = std::max(worst, root_residual(p, c, r.delta1, 0.0));
    worst = std::max(worst, root_residual(p, c, r.delta2, 0.0));
    worst = std::max(worst, root_residual(p, c, r.delta3, both));
    worst = std::max(worst, root_residual(p, c, r.delta4, both));
    worst = std::max(worst, root_residual(p, c, r.gamma1, p.lambda0));
    worst = std::max(worst, root_residual(p, c, r.gamma2, p.lambda0));
    return worst;
}

}  // namespace

TEST_CASE("root ordering and residuals for the baseline") {
    const ModelParams p = baseline_params();
    const ReducedCoeffs c = derive_coeffs(p);
    const Roots r = compute_roots(c, p);
    CHECK(r.delta1 < 0.0);
    CHECK(r.delta3 < r.delta1);
    CHECK(r.delta2 > 1.0);
    CHECK(r.delta4 > 1.0);
    CHECK(r.gamma1 < 0.0);
    CHECK(r.gamma2 > 1.0);
    CHECK(max_root_residual(p) < 1e-10);

    CHECK(r.delta1 == doctest::Approx(-2.23902086747118916).epsilon(1e-13));
    CHECK(r.delta2 == doctest::Approx(2.48291186112601689).epsilon(1e-13));
    CHECK(r.delta3 == doctest::Approx(-19.4644953576498359).epsilon(1e-13));
    CHECK(r.delta4 == doctest::Approx(19.7083863513046636).epsilon(1e-13));
    CHECK(r.gamma1 == doctest::Approx(-13.8280155697721066).epsilon(1e-13));
    CHECK(r.gamma2 == doctest::Approx(14.0719065634269343).epsilon(1e-13));
}

TEST_CASE("golden-ratio roots when mu1 = mu2 and rho - mu1 = sigma") {
    ModelParams p;
    p.mu1 = p.mu2 = 0.1;
    p.sigma11 = 0.4;  // a11 = 0.16, a22 = 0.04, sigma = 0.1
    p.sigma22 = 0.2;
    p.rho = 0.2;
    p.lambda0 = p.lambda1 = 1.0;
    p.K = 0.0;
    const Roots r = compute_roots(derive_coeffs(p), p);
    CHECK(r.delta1 == doctest::Approx((1.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-14));
    CHECK(r.delta2 == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-14));
}

TEST_CASE("zero jump rates collapse the quartic factors") {
    // validation bypassed: the roots are still defined at lambda = 0
    ModelParams p = baseline_params();
    p.lambda0 = p.lambda1 = 0.0;
    const ReducedCoeffs c = derive_coeffs(p);
    const Roots r = compute_roots(c, p);
    CHECK(r.delta3 == doctest::Approx(r.delta1).epsilon(1e-15));
    CHECK(r.delta4 == doctest::Approx(r.delta2).epsilon(1e-15));
}

TEST_CASE("root residuals stay below 1e-10 over 1000 random draws") {
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const ModelParams p = sample_valid_params(42, i);
        CHECK(max_root_residual(p) < 1e-10);
    }
}

TEST_CASE("threshold matches the published value on the baseline") {
    const Solution s = solve(baseline_params());
    CHECK(s.k == doctest::Approx(0.7036).epsilon(7.2e-5));          // +-5e-5 absolute
    CHECK(s.k == doctest::Approx(0.703624719196655884).epsilon(1e-13));
}

TEST_CASE("label-swapped baseline is a different problem") {
    const Solution s = solve(swapped_baseline_params());
    CHECK(s.k == doctest::Approx(0.609094554905414194).epsilon(1e-13));
    CHECK(s.C1 == doctest::Approx(0.185730216021282311).epsilon(1e-12));
    CHECK(s.C3 == doctest::Approx(1.76329950199049579e-7).epsilon(1e-11));
}

TEST_CASE("published sensitivity anchors: mu1 and cross-volatility moves") {
    ModelParams p = baseline_params();
    p.mu1 = 0.1259;
    CHECK(solve(p).k == doctest::Approx(0.7834).epsilon(7e-5));

    p = baseline_params();
    p.sigma12 = p.sigma21 = -0.0129;
    CHECK(solve(p).k == doctest::Approx(0.6060).epsilon(7e-5));
}

TEST_CASE("grouped and ungrouped threshold forms agree to 1e-12") {
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const ModelParams p = sample_valid_params(42, i);
        const ReducedCoeffs c = derive_coeffs(p);
        const Roots r = compute_roots(c, p);
        const double k_grouped = threshold_k(r, c);
        const double k_direct = threshold_k_ungrouped(r, c);
        CHECK(std::abs(k_grouped - k_direct) <= 1e-12 * std::abs(k_grouped));
    }
}

TEST_CASE("cost enters the threshold only through the multiplier ratio") {
    for (double cost : {0.0001, 0.001, 0.05, 0.3}) {
        ModelParams p = baseline_params();
        p.K = cost;
        ModelParams p0 = baseline_params();
        p0.K = 0.0;
        const double k_cost = solve(p).k;
        const double k_zero = solve(p0).k;
        CHECK(k_cost == doctest::Approx(k_zero * (1.0 - cost) / (1.0 + cost))
                            .epsilon(1e-13));
    }
}

TEST_CASE("coefficients are positive and match the frozen solve") {
    const Solution s = solve(baseline_params());
    CHECK(s.C1 == doctest::Approx(0.132954521922722212).epsilon(1e-12));
    CHECK(s.C2 == doctest::Approx(0.832043974196604893).epsilon(1e-12));
    CHECK(s.C3 == doctest::Approx(2.76229980638860231e-6).epsilon(1e-11));
    CHECK(s.u2 == doctest::Approx(0.00591485821870105435).epsilon(1e-12));
    CHECK(s.C1 > 0.0);
    CHECK(s.C2 > 0.0);
    CHECK(s.C3 > 0.0);
}

TEST_CASE("smooth-fit system residual vanishes at the solved parameters") {
    const Solution s = solve(baseline_params());
    const auto& r = s.roots;
    const auto& c = s.coeffs;
    const double k = s.k;
    // direct substitution of the four matching equations using raw powers
    const double p1 = std::pow(k, r.delta1), p3 = std::pow(k, r.delta3);
    const double pg = std::pow(k, r.gamma2);
    const double eq1 = s.C1 * p1 + s.C3 * p3 - (c.beta_s - c.beta_b * k);
    const double eq2 = s.C1 * r.delta1 * p1 + s.C3 * r.delta3 * p3 + c.beta_b * k;
    const double eq3 = s.C2 * pg + c.a0 * c.beta_s - c.a1 * c.beta_b * k -
                       (s.C1 * p1 - c.eta * s.C3 * p3);
    const double eq4 = s.C2 * r.gamma2 * pg - c.a1 * c.beta_b * k -
                       (r.delta1 * s.C1 * p1 - c.eta * r.delta3 * s.C3 * p3);
    CHECK(std::abs(eq1) < 1e-10);
    CHECK(std::abs(eq2) < 1e-10);
    CHECK(std::abs(eq3) < 1e-10);
    CHECK(std::abs(eq4) < 1e-10);
}

TEST_CASE("second coefficient route agrees with the first to 1e-10") {
    const Solution s = solve(baseline_params());
    const auto& r = s.roots;
    const auto& c = s.coeffs;
    const double k = s.k;
    const double x = s.u2;  // C2 * k^gamma2
    const double c1_bis = ((r.gamma2 - r.delta3) * x - c.a0 * r.delta3 * c.beta_s +
                           c.a1 * (r.delta3 - 1.0) * c.beta_b * k) /
                          ((r.delta1 - r.delta3) * std::pow(k, r.delta1));
    const double c3_bis = ((r.gamma2 - r.delta1) * x - c.a0 * r.delta1 * c.beta_s +
                           c.a1 * (r.delta1 - 1.0) * c.beta_b * k) /
                          (c.eta * (r.delta1 - r.delta3) * std::pow(k, r.delta3));
    CHECK(c1_bis == doctest::Approx(s.C1).epsilon(1e-10));
    CHECK(c3_bis == doctest::Approx(s.C3).epsilon(1e-10));
}

TEST_CASE("direct printed form of the second coefficient matches the solve") {
    // denominator bracket multiplied by k^gamma2 as a whole
    const Solution s = solve(baseline_params());
    const auto& r = s.roots;
    const auto& c = s.coeffs;
    const double num =
        ((1.0 - c.a0) * (c.eta + c.a1) * (1.0 - r.delta1) * (-r.delta3) +
         (1.0 - c.a1) * (c.eta + c.a0) * (1.0 - r.delta3) * r.delta1) *
        c.beta_s;
    const double bracket =
        (1.0 + c.eta) * (r.delta1 * r.delta3 + r.gamma2) -
        r.delta1 * ((c.a1 + c.eta) * r.gamma2 + (1.0 - c.a1)) -
        r.delta3 * ((c.a1 + c.eta) + r.gamma2 * (1.0 - c.a1));
    const double c2_direct = num / (bracket * std::pow(s.k, r.gamma2));
    CHECK(c2_direct == doctest::Approx(s.C2).epsilon(1e-12));
}

TEST_CASE("value function pieces at and around the threshold") {
    const Solution s = solve(baseline_params());
    const double k = s.k;
    const auto& c = s.coeffs;

    // boundary uses the stopping branch; both branches agree by smooth fit
    CHECK(s.w1(k) == c.beta_s - c.beta_b * k);
    CHECK(std::abs(s.u1 + s.u3 - (c.beta_s - c.beta_b * k)) < 1e-10);

    CHECK(s.w1(k / 2.0) ==
          doctest::Approx(0.999 - 1.001 * (k / 2.0)).epsilon(1e-14));
    CHECK(s.w1(k / 2.0) == doctest::Approx(0.646835828042074).epsilon(1e-13));

    // far tail decays to zero through the negative exponents
    CHECK(std::abs(s.w1(1e6 * k)) < 1e-6);
    CHECK(std::abs(s.w0(1e6 * k)) < 1e-6);

    CHECK_THROWS_AS(s.w1(0.0), Error);
    CHECK_THROWS_AS(s.w0(-1.0), Error);
}

TEST_CASE("frozen point values of the reduced functions") {
    const Solution s = solve(baseline_params());
    CHECK(s.w1(1.0) == doctest::Approx(0.132957284222529).epsilon(1e-12));
    CHECK(s.w0(1.0) == doctest::Approx(0.132951759622916).epsilon(1e-12));
}

TEST_CASE("value is the degree-one extension of the reduced functions") {
    const Solution s = solve(baseline_params());
    CHECK(s.value(1.0, 0.5, 1) == doctest::Approx(0.4985).epsilon(1e-13));
    for (double scale : {0.1, 3.0, 10.0}) {
        const double base = s.value(1.3, 0.9, 1);
        CHECK(s.value(scale * 1.3, scale * 0.9, 1) ==
              doctest::Approx(scale * base).epsilon(1e-12));
        const double base0 = s.value(1.3, 0.9, 0);
        CHECK(s.value(scale * 1.3, scale * 0.9, 0) ==
              doctest::Approx(scale * base0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(s.value(0.0, 1.0, 1), Error);
    CHECK_THROWS_AS(s.value(1.0, -2.0, 0), Error);
}

TEST_CASE("value bounds and the immediate-payoff floor on a log grid") {
    const Solution s = solve(baseline_params());
    const auto& c = s.coeffs;
    for (int i = -4; i <= 4; ++i) {
        for (int j = -4; j <= 4; ++j) {
            const double x1 = std::pow(10.0, i / 2.0);
            const double x2 = std::pow(10.0, j / 2.0);
            for (int alpha : {0, 1}) {
                const double v = s.value(x1, x2, alpha);
                CHECK(v >= -c.beta_b * x2 - 1e-12 * (x1 + x2));
                CHECK(v <= c.beta_s * x1 + 1e-12 * (x1 + x2));
            }
            CHECK(s.value(x1, x2, 1) >=
                  c.beta_s * x1 - c.beta_b * x2 - 1e-12 * (x1 + x2));
        }
    }
}

TEST_CASE("limits bracket the constrained threshold") {
    const ModelParams p = baseline_params();
    const double k0 = k0_limit(p);
    const double k1 = k1_limit(p);
    CHECK(k0 == doctest::Approx(0.689883576158927).epsilon(1e-12));
    CHECK(k1 == doctest::Approx(0.739773856704098).epsilon(1e-12));
    CHECK(k1 > k0);

    ModelParams fast_open = p;
    fast_open.lambda0 = 1e8;
    CHECK(std::abs(solve(fast_open).k - k0) < 1e-3);

    ModelParams fast_close = p;
    fast_close.lambda1 = 1e8;
    CHECK(std::abs(solve(fast_close).k - k1) < 1e-3);
}

TEST_CASE("threshold decreases toward the unconstrained limit in lambda0") {
    const ModelParams p = baseline_params();
    ModelParams mid = p;
    mid.lambda0 = 1e4;
    const double k_10 = solve(p).k;
    const double k_1e4 = solve(mid).k;
    CHECK(k_10 >= k_1e4);
    CHECK(k_1e4 >= k0_limit(p) - 1e-6);
}

TEST_CASE("k1 limit bounds hold across random draws") {
    for (std::uint64_t i = 0; i < 300; ++i) {
        const ModelParams p = sample_valid_params(7, i);
        CHECK(k1_limit(p) > k0_limit(p));
    }
}

TEST_CASE("anchored coefficients stay finite in extreme sweeps") {
    ModelParams p = baseline_params();
    p.lambda0 = 1e8;
    p.lambda1 = 1e8;
    const Solution s = solve(p);
    CHECK(std::isfinite(s.k));
    CHECK(s.u1 > 0.0);
    CHECK(s.u2 > 0.0);
    CHECK(s.u3 > 0.0);
    CHECK(std::isfinite(s.w1(2.0 * s.k)));
    CHECK(std::isfinite(s.w0(0.5 * s.k)));
}
