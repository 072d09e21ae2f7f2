// Acceptance suite: one line per criterion, nonzero exit if any selected
// criterion fails. With no arguments every criterion runs; otherwise the
// arguments name the criteria to run, e.g. `acceptance 1 2 5`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <set>
#include <string>
#include <vector>

#include "regime_stop/calibration.hpp"
#include "regime_stop/closed_form.hpp"
#include "regime_stop/montecarlo.hpp"
#include "regime_stop/rng.hpp"
#include "regime_stop/studies.hpp"
#include "regime_stop/verification.hpp"
#include "test_helpers.hpp"

using namespace regime_stop;
using testing::baseline_params;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& label) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += label;
        }
    }
};

// ---- criterion 1: golden threshold ----
Outcome criterion1() {
    Outcome out;
    const ModelParams params = baseline_params();
    solve(params);  // warm caches before timing
    const auto start = Clock::now();
    const Solution s = solve(params);
    const double elapsed = seconds_since(start);

    char buf[160];
    std::snprintf(buf, sizeof(buf), "k = %.8f (|k - 0.7036| = %.2e), solve took %.3g ms",
                  s.k, std::abs(s.k - 0.7036), elapsed * 1e3);
    out.detail = buf;
    out.require(std::abs(s.k - 0.7036) <= 5e-5, "k outside +-5e-5 of 0.7036");
    out.require(elapsed < 1e-3, "solve slower than 1 ms");
    return out;
}

// ---- criterion 2: table reproduction ----
struct TableRow {
    const char* parameter;
    std::vector<double> values;
    std::vector<double> printed;
};

Outcome criterion2() {
    Outcome out;
    const std::vector<TableRow> rows = {
        {"mu1", {0.1259, 0.1659, 0.2059, 0.2459, 0.2859},
         {0.7834, 0.7481, 0.7036, 0.6481, 0.5798}},
        {"mu2", {0.1659, 0.2059, 0.2459, 0.2859, 0.3259},
         {0.6332, 0.6688, 0.7036, 0.7367, 0.7669}},
        {"sigma11", {0.2312, 0.2712, 0.3112, 0.3512, 0.3912},
         {0.7516, 0.7286, 0.7036, 0.6777, 0.6514}},
        {"sigma22", {0.2143, 0.2543, 0.2943, 0.3343, 0.3743},
         {0.7469, 0.7265, 0.7036, 0.6794, 0.6543}},
        // the fourth entry is printed to five digits (0.75477); at the
        // four-decimal precision of the rest it reads 0.7548
        {"sigma_cross", {-0.0129, 0.0329, 0.0729, 0.1129, 0.1529},
         {0.6060, 0.6561, 0.7036, 0.7548, 0.8094}},
        {"rho", {0.3, 0.4, 0.5, 0.6, 0.7},
         {0.5590, 0.6541, 0.7036, 0.7358, 0.7590}},
        {"K", {0.0001, 0.0005, 0.001, 0.002, 0.003},
         {0.7049, 0.7043, 0.7036, 0.7022, 0.7008}},
    };

    const auto start = Clock::now();
    int total = 0, matched = 0;
    double worst = 0.0;
    std::string misses;
    for (const auto& row : rows) {
        SweepSpec spec{baseline_params(), row.parameter, row.values};
        const auto sweep = run_sweep(spec);
        for (std::size_t i = 0; i < row.values.size(); ++i) {
            ++total;
            const double dev = std::abs(sweep[i].k - row.printed[i]);
            worst = std::max(worst, dev);
            if (dev <= 5e-5) {
                ++matched;
            } else {
                char buf[96];
                std::snprintf(buf, sizeof(buf), " %s=%g (printed %.4f, solved %.5f)",
                              row.parameter, row.values[i], row.printed[i],
                              sweep[i].k);
                misses += buf;
            }
        }
    }
    const double elapsed = seconds_since(start);

    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "%d/%d printed cells within +-5e-5, max |dev| = %.2e, %.3g s",
                  matched, total, worst, elapsed);
    out.detail = buf;
    if (!misses.empty()) out.detail += "; beyond tolerance:" + misses;
    out.require(matched == total, "printed-table mismatches listed above");
    out.require(elapsed < 1.0, "table reproduction slower than 1 s");
    return out;
}

// ---- criterion 3: QVI certificates ----
Outcome criterion3() {
    Outcome out;
    const auto start = Clock::now();
    const GridSpec grid{4096, 3.0};

    const ResidualReport base = qvi_residuals(solve(baseline_params()), grid);
    out.require(base.psi_min >= -base.tol_qvi, "baseline psi breached");
    out.require(base.phi_min >= -base.tol_qvi, "baseline phi breached");
    out.require(base.ode_residual_max <= 1e-9, "baseline ODE residual");
    out.require(base.smoothfit_gap <= 1e-10, "baseline smooth-fit gap");

    int failures = 0;
    double worst_psi = 0.0, worst_ode = 0.0, worst_fit = 0.0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const ResidualReport r = qvi_residuals(solve(sample_valid_params(42, i)), grid);
        if (!(r.psi_min >= -r.tol_qvi && r.phi_min >= -r.tol_qvi &&
              r.ode_residual_max <= 1e-9 && r.smoothfit_gap <= 1e-10))
            ++failures;
        worst_psi = std::min(worst_psi, std::min(r.psi_min, r.phi_min) / r.tol_qvi);
        worst_ode = std::max(worst_ode, r.ode_residual_max);
        worst_fit = std::max(worst_fit, r.smoothfit_gap);
    }
    const double elapsed = seconds_since(start);

    char buf[220];
    std::snprintf(buf, sizeof(buf),
                  "baseline + 1000 draws: %d failures, worst min/tol = %.3g, "
                  "worst ODE = %.2e, worst fit = %.2e, %.3g s",
                  failures, worst_psi, worst_ode, worst_fit, elapsed);
    out.detail = buf;
    out.require(failures == 0, "random-draw certificate failures");
    out.require(elapsed < 30.0, "certificates slower than 30 s");
    return out;
}

// ---- criterion 4: coefficient positivity sweep ----
Outcome criterion4() {
    Outcome out;
    const auto start = Clock::now();
    const PositivitySummary sweep = positivity_sweep(10000, 42);
    const double elapsed = seconds_since(start);

    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "%llu draws: %llu counterexamples, mu1>mu2 in %llu, "
                  "sigma+mu1<=mu2 in %llu, %.3g s",
                  static_cast<unsigned long long>(sweep.draws),
                  static_cast<unsigned long long>(sweep.failures),
                  static_cast<unsigned long long>(sweep.case_mu1_gt_mu2),
                  static_cast<unsigned long long>(sweep.case_sigma_le_gap), elapsed);
    out.detail = buf;
    for (std::size_t i = 0; i < std::min<std::size_t>(3, sweep.counterexamples.size()); ++i)
        out.detail += "; counterexample draw " +
                      std::to_string(sweep.counterexamples[i].draw_index) + ": " +
                      sweep.counterexamples[i].reason;
    out.require(sweep.failures == 0, "positivity counterexamples");
    out.require(sweep.case_mu1_gt_mu2 >= 100, "mu1>mu2 branch under-covered");
    out.require(sweep.case_sigma_le_gap >= 100, "sigma+mu1<=mu2 branch under-covered");
    out.require(elapsed < 10.0, "sweep slower than 10 s");
    return out;
}

// ---- criterion 5: asymptotic limits ----
Outcome criterion5() {
    Outcome out;
    const ModelParams base = baseline_params();
    const auto start = Clock::now();
    const double k0 = k0_limit(base);
    const double k1 = k1_limit(base);
    ModelParams fast_open = base;
    fast_open.lambda0 = 1e8;
    ModelParams fast_close = base;
    fast_close.lambda1 = 1e8;
    const double k_open = solve(fast_open).k;
    const double k_close = solve(fast_close).k;
    const double elapsed = seconds_since(start);

    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "|k(1e8,10) - k0| = %.2e, |k(10,1e8) - k1| = %.2e, "
                  "k1 - k0 = %.4f, %.3g ms",
                  std::abs(k_open - k0), std::abs(k_close - k1), k1 - k0,
                  elapsed * 1e3);
    out.detail = buf;
    out.require(std::abs(k_open - k0) < 1e-3, "lambda0 limit not reached");
    out.require(std::abs(k_close - k1) < 1e-3, "lambda1 limit not reached");
    out.require(k1 > k0, "limit ordering violated");
    out.require(elapsed < 0.010, "limits slower than 10 ms");
    return out;
}

// ---- criterion 6: Monte Carlo verification ----
Outcome criterion6() {
    Outcome out;
    const auto start = Clock::now();
    std::string detail;
    for (int alpha : {1, 0}) {
        SimConfig cfg;
        cfg.params = baseline_params();
        cfg.x1_0 = 1.0;
        cfg.x2_0 = 1.0;
        cfg.alpha_0 = alpha;
        cfg.paths = 1000000;
        cfg.horizon = 20.0;
        cfg.seed = 42;
        cfg.monitor_step = 1e-4;
        const RefinementReport rep = simulate_with_refinement(cfg);
        const SimReport& at_h = rep.at_step;
        const double refine_shift =
            std::abs(at_h.estimate - rep.at_half_step.estimate);
        const double budget =
            3.0 * at_h.std_error + at_h.truncation_bound + refine_shift;
        const double err = std::abs(at_h.estimate - at_h.closed_form_value);

        char buf[220];
        std::snprintf(buf, sizeof(buf),
                      "alpha=%d: est %.6f vs v %.6f (|err| %.2e <= 3se+trunc+shift "
                      "%.2e, shift %.1e)",
                      alpha, at_h.estimate, at_h.closed_form_value, err, budget,
                      refine_shift);
        if (!detail.empty()) detail += "; ";
        detail += buf;
        out.require(err <= budget, std::string("alpha=") + std::to_string(alpha) +
                                       " estimate outside budget");
    }
    const double elapsed = seconds_since(start);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "; %.3g s (target 120 s)", elapsed);
    out.detail = detail + buf;
    return out;
}

// ---- criterion 7: policy dominance ----
Outcome criterion7() {
    Outcome out;
    const auto start = Clock::now();
    SimConfig cfg;
    cfg.params = baseline_params();
    cfg.paths = 200000;
    cfg.horizon = 20.0;
    cfg.seed = 42;
    cfg.monitor_step = 1e-4;

    const auto rows = policy_dominance(cfg, {0.6, 0.8, 1.0, 1.25, 1.6});
    const auto unit = std::find_if(rows.begin(), rows.end(), [](const auto& r) {
        return r.multiplier == 1.0;
    });
    std::string detail = "estimates:";
    for (const auto& row : rows) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), " m=%.2f: %.6f (paired se %.1e)",
                      row.multiplier, row.estimate, row.paired_std_error);
        detail += buf;
        char label[64];
        std::snprintf(label, sizeof(label), "multiplier %.2f beats the threshold",
                      row.multiplier);
        out.require(unit->estimate >= row.estimate - 2.0 * row.paired_std_error,
                    label);
    }

    SimConfig never = cfg;
    never.paths = 20000;
    never.threshold_override = solve(cfg.params).k * 1e-6;
    const SimReport never_rep = simulate_policy(never);
    const double never_budget =
        3.0 * never_rep.std_error + never_rep.truncation_bound;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "; never-stop est %.2e (budget %.2e)",
                  never_rep.estimate, never_budget);
    detail += buf;
    out.require(std::abs(never_rep.estimate) <= never_budget,
                "never-stop estimate outside its budget");

    const double elapsed = seconds_since(start);
    std::snprintf(buf, sizeof(buf), "; %.3g s", elapsed);
    out.detail = detail + buf;
    out.require(elapsed < 180.0, "dominance slower than 3 min");
    return out;
}

// ---- criterion 8: calibration round trip ----
Outcome criterion8() {
    Outcome out;
    const ModelParams truth = baseline_params();
    const ReducedCoeffs coeffs = derive_coeffs(truth);

    // fifteen years of daily closes from the exact increment sampler, seed 7
    const detail::GbmStepper step(truth, coeffs);
    Rng rng(7, 0);
    PriceSeries series;
    double lx1 = 0.0, lx2 = 0.0;
    const int ppy = 252;
    for (int t = 0; t <= 15 * ppy; ++t) {
        char date[16];
        std::snprintf(date, sizeof(date), "d%07d", t);
        series.dates.push_back(date);
        series.p1.push_back(std::exp(lx1));
        series.p2.push_back(std::exp(lx2));
        double d1 = 0.0, d2 = 0.0;
        step(1.0 / ppy, rng, d1, d2);
        lx1 += d1;
        lx2 += d2;
    }

    const CalibrationResult r = calibrate(series, ppy);
    out.require(std::abs(r.mu1 - truth.mu1) <= 3.0 * r.se_mu1, "mu1 beyond 3 se");
    out.require(std::abs(r.mu2 - truth.mu2) <= 3.0 * r.se_mu2, "mu2 beyond 3 se");
    out.require(std::abs(r.a11 - coeffs.a11) <= 3.0 * r.se_a11, "a11 beyond 3 se");
    out.require(std::abs(r.a12 - coeffs.a12) <= 3.0 * r.se_a12, "a12 beyond 3 se");
    out.require(std::abs(r.a22 - coeffs.a22) <= 3.0 * r.se_a22, "a22 beyond 3 se");

    ModelParams recovered = truth;
    recovered.mu1 = r.mu1;
    recovered.mu2 = r.mu2;
    recovered.sigma11 = r.sigma11;
    recovered.sigma12 = r.sigma12;
    recovered.sigma21 = r.sigma21;
    recovered.sigma22 = r.sigma22;
    const double k = solve(recovered).k;

    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "recovered mu = (%.4f, %.4f) at (%.2f, %.2f) se from truth; "
                  "k(recovered) = %.4f, |k - 0.7036| = %.4f",
                  r.mu1, r.mu2, std::abs(r.mu1 - truth.mu1) / r.se_mu1,
                  std::abs(r.mu2 - truth.mu2) / r.se_mu2, k, std::abs(k - 0.7036));
    out.detail = buf;
    out.require(std::abs(k - 0.7036) <= 0.05,
                "downstream threshold beyond 0.05 (drift-noise floor: se(mu) ~ "
                "0.08 from 15y of data and dk/dmu1 ~ -1.4)");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
    const auto wanted = [&](int id) {
        return selected.empty() || selected.count(id) > 0;
    };

    struct Entry {
        int id;
        const char* name;
        Outcome (*run)();
    };
    const Entry entries[] = {
        {1, "golden threshold", criterion1},
        {2, "table reproduction", criterion2},
        {3, "QVI certificate", criterion3},
        {4, "coefficient positivity", criterion4},
        {5, "asymptotic limits", criterion5},
        {6, "Monte Carlo verification", criterion6},
        {7, "policy dominance", criterion7},
        {8, "calibration round trip", criterion8},
    };

    int failures = 0;
    for (const Entry& entry : entries) {
        if (!wanted(entry.id)) continue;
        const Outcome out = entry.run();
        std::printf("criterion %d (%s): %s -- %s\n", entry.id, entry.name,
                    out.pass ? "PASS" : "FAIL", out.detail.c_str());
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
