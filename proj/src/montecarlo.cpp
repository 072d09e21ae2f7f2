#include "regime_stop/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "regime_stop/rng.hpp"

namespace regime_stop {

namespace {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("REGIME_STOP_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

constexpr int kMaxMonitors = 16;
constexpr std::int64_t kBlockSize = 4096;

// Skips are taken only while a Brownian first passage to the barrier within
// the skipped span has probability <= ~1.3e-15 (8-sigma margin net of drift),
// so the step-h monitoring estimand is unchanged at double precision.
constexpr double kBridgeSigmas = 8.0;

struct Monitor {
    double log_threshold = 0.0;
    int stride = 1;  // fire every `stride` grid units
};

struct Engine {
    double m1 = 0.0, m2 = 0.0;                  // log-price drifts
    double l11 = 0.0, l21 = 0.0, l22 = 0.0;     // Cholesky factor of A
    double sigma_y = 0.0;                       // vol of the log ratio
    double nu_down = 0.0;                       // downward drift of the log ratio
    double lambda[2] = {0.0, 0.0};
    double rho = 0.0;
    double beta_s = 0.0, beta_b = 0.0;
    double lx1_0 = 0.0, lx2_0 = 0.0;
    int alpha_0 = 1;
    double horizon = 0.0;
    double step = 0.0;
    int n_monitors = 0;
    Monitor monitors[kMaxMonitors];
};

struct PathResult {
    double payoff[kMaxMonitors];
    double tau[kMaxMonitors];
    double x1_at_stop[kMaxMonitors];
    double x2_at_stop[kMaxMonitors];
    bool stopped[kMaxMonitors];
};

Engine make_engine(const SimConfig& cfg, const ReducedCoeffs& c, double step) {
    Engine e;
    const detail::GbmStepper stepper(cfg.params, c);
    e.m1 = stepper.m1;
    e.m2 = stepper.m2;
    e.l11 = stepper.l11;
    e.l21 = stepper.l21;
    e.l22 = stepper.l22;
    e.sigma_y = std::sqrt(2.0 * c.sigma);
    e.nu_down = std::max(0.0, -(e.m2 - e.m1));
    e.lambda[0] = cfg.params.lambda0;
    e.lambda[1] = cfg.params.lambda1;
    e.rho = cfg.params.rho;
    e.beta_s = c.beta_s;
    e.beta_b = c.beta_b;
    e.lx1_0 = std::log(cfg.x1_0);
    e.lx2_0 = std::log(cfg.x2_0);
    e.alpha_0 = cfg.alpha_0;
    e.horizon = cfg.horizon;
    e.step = step;
    return e;
}

inline void advance(const Engine& e, Rng& rng, double span, double& lx1, double& lx2) {
    double z1, z2;
    rng.normal_pair(z1, z2);
    const double rt = std::sqrt(span);
    lx1 += e.m1 * span + rt * e.l11 * z1;
    lx2 += e.m2 * span + rt * (e.l21 * z1 + e.l22 * z2);
}

/// Largest number of grid units that provably cannot contain a monitored
/// crossing: nu_down*s + 8*sigma_y*sqrt(s) <= d0 solved for the span s.
/// Callers only skip from strictly above the barrier.
inline std::int64_t skip_units(const Engine& e, double d0) {
    if (!(d0 > 0.0)) return 1;
    const double b = kBridgeSigmas * e.sigma_y;
    double sqrt_s;
    if (e.nu_down <= 0.0) {
        sqrt_s = d0 / b;
    } else {
        sqrt_s = (-b + std::sqrt(b * b + 4.0 * e.nu_down * d0)) / (2.0 * e.nu_down);
    }
    const double s = sqrt_s * sqrt_s;
    if (!(s > e.step)) return 1;
    const double units = s / e.step;
    if (units >= 1e18) return static_cast<std::int64_t>(1) << 60;
    return static_cast<std::int64_t>(units);
}

void simulate_path(const Engine& e, Rng& rng, PathResult& out) {
    for (int m = 0; m < e.n_monitors; ++m) {
        out.payoff[m] = 0.0;
        out.tau[m] = 0.0;
        out.x1_at_stop[m] = 0.0;
        out.x2_at_stop[m] = 0.0;
        out.stopped[m] = false;
    }
    int active = e.n_monitors;
    int first_active = 0;
    double t = 0.0;
    double lx1 = e.lx1_0, lx2 = e.lx2_0;
    int state = e.alpha_0;

    const auto check = [&](std::int64_t unit_index, double t_now) {
        const double ly = lx2 - lx1;
        for (int m = first_active; m < e.n_monitors; ++m) {
            if (ly > e.monitors[m].log_threshold) break;  // sorted descending
            if (out.stopped[m] || unit_index % e.monitors[m].stride != 0) continue;
            const double x1 = std::exp(lx1), x2 = std::exp(lx2);
            out.stopped[m] = true;
            out.tau[m] = t_now;
            out.x1_at_stop[m] = x1;
            out.x2_at_stop[m] = x2;
            out.payoff[m] =
                std::exp(-e.rho * t_now) * (e.beta_s * x1 - e.beta_b * x2);
            --active;
        }
        while (first_active < e.n_monitors && out.stopped[first_active])
            ++first_active;
    };

    while (active > 0 && t < e.horizon) {
        const double hold = rng.exponential(e.lambda[state]);
        const double t_end = std::min(t + hold, e.horizon);
        if (state == 1) {
            check(0, t);  // interval entry is a monitored instant
            if (active == 0) break;
            const std::int64_t units =
                static_cast<std::int64_t>(std::floor((t_end - t) / e.step));
            std::int64_t j = 0;
            while (j < units && active > 0) {
                // a strided monitor can sit below its threshold between the
                // instants it watches (d0 <= 0); step singly until it fires
                // or the ratio climbs back out
                const double d0 =
                    (lx2 - lx1) - e.monitors[first_active].log_threshold;
                std::int64_t n = skip_units(e, d0);
                n = std::min(n, units - j);
                n = std::max<std::int64_t>(n, 1);
                advance(e, rng, static_cast<double>(n) * e.step, lx1, lx2);
                j += n;
                check(j, t + static_cast<double>(j) * e.step);
            }
            if (active == 0 || t_end >= e.horizon) break;
            const double rem = t_end - (t + static_cast<double>(j) * e.step);
            if (rem > 0.0) advance(e, rng, rem, lx1, lx2);
        } else {
            if (t_end >= e.horizon) break;  // cannot stop anymore
            advance(e, rng, t_end - t, lx1, lx2);
        }
        t = t_end;
        state ^= 1;
    }
}

struct BlockStats {
    double sum[kMaxMonitors] = {};
    double sumsq[kMaxMonitors] = {};
    std::int64_t stopped[kMaxMonitors] = {};
    double dsum[kMaxMonitors] = {};
    double dsumsq[kMaxMonitors] = {};
};

struct Totals {
    double estimate[kMaxMonitors] = {};
    double std_error[kMaxMonitors] = {};
    double stopped_fraction[kMaxMonitors] = {};
    double diff_vs_unit[kMaxMonitors] = {};
    double paired_std_error[kMaxMonitors] = {};
};

/// Runs all paths in fixed blocks; block results are reduced in block order,
/// so the totals do not depend on the thread schedule.
Totals run_blocks(const Engine& e, std::int64_t paths, std::uint64_t seed,
                  int threads, int unit_monitor) {
    const std::int64_t n_blocks = (paths + kBlockSize - 1) / kBlockSize;
    std::vector<BlockStats> blocks(static_cast<std::size_t>(n_blocks));
    std::atomic<std::int64_t> next{0};

    const auto worker = [&]() {
        PathResult res;
        for (;;) {
            const std::int64_t b = next.fetch_add(1);
            if (b >= n_blocks) return;
            BlockStats st;
            const std::int64_t lo = b * kBlockSize;
            const std::int64_t hi = std::min(paths, lo + kBlockSize);
            for (std::int64_t p = lo; p < hi; ++p) {
                Rng rng(seed, static_cast<std::uint64_t>(p));
                simulate_path(e, rng, res);
                for (int m = 0; m < e.n_monitors; ++m) {
                    st.sum[m] += res.payoff[m];
                    st.sumsq[m] += res.payoff[m] * res.payoff[m];
                    st.stopped[m] += res.stopped[m] ? 1 : 0;
                    if (unit_monitor >= 0) {
                        const double d = res.payoff[unit_monitor] - res.payoff[m];
                        st.dsum[m] += d;
                        st.dsumsq[m] += d * d;
                    }
                }
            }
            blocks[static_cast<std::size_t>(b)] = st;
        }
    };

    const int n_threads = std::max(1, std::min<int>(threads, static_cast<int>(n_blocks)));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    BlockStats agg;
    for (const auto& st : blocks) {
        for (int m = 0; m < e.n_monitors; ++m) {
            agg.sum[m] += st.sum[m];
            agg.sumsq[m] += st.sumsq[m];
            agg.stopped[m] += st.stopped[m];
            agg.dsum[m] += st.dsum[m];
            agg.dsumsq[m] += st.dsumsq[m];
        }
    }

    Totals out;
    const double n = static_cast<double>(paths);
    for (int m = 0; m < e.n_monitors; ++m) {
        const double mean = agg.sum[m] / n;
        out.estimate[m] = mean;
        const double var = std::max(0.0, agg.sumsq[m] - n * mean * mean);
        out.std_error[m] = paths > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
        out.stopped_fraction[m] = static_cast<double>(agg.stopped[m]) / n;
        if (unit_monitor >= 0) {
            const double dmean = agg.dsum[m] / n;
            out.diff_vs_unit[m] = dmean;
            const double dvar = std::max(0.0, agg.dsumsq[m] - n * dmean * dmean);
            out.paired_std_error[m] =
                paths > 1 ? std::sqrt(dvar / (n - 1.0) / n) : 0.0;
        }
    }
    return out;
}

void validate_config(const SimConfig& cfg) {
    char buf[128];
    if (!(cfg.horizon > 0.0)) {
        std::snprintf(buf, sizeof(buf), "horizon must be > 0, got %g", cfg.horizon);
        throw Error("InvalidHorizon", buf);
    }
    if (cfg.threshold_override && !(*cfg.threshold_override > 0.0)) {
        std::snprintf(buf, sizeof(buf), "threshold must be > 0, got %g",
                      *cfg.threshold_override);
        throw Error("InvalidThreshold", buf);
    }
    if (cfg.paths < 1) {
        std::snprintf(buf, sizeof(buf), "paths must be >= 1, got %lld",
                      static_cast<long long>(cfg.paths));
        throw Error("InvalidPathCount", buf);
    }
    if (!(cfg.monitor_step > 0.0)) {
        std::snprintf(buf, sizeof(buf), "monitor step must be > 0, got %g",
                      cfg.monitor_step);
        throw Error("InvalidMonitorStep", buf);
    }
    if (!(cfg.x1_0 > 0.0) || !(cfg.x2_0 > 0.0)) {
        std::snprintf(buf, sizeof(buf), "prices must be > 0, got x1=%g, x2=%g",
                      cfg.x1_0, cfg.x2_0);
        throw Error("NonpositivePrice", buf);
    }
    if (cfg.alpha_0 != 0 && cfg.alpha_0 != 1) {
        std::snprintf(buf, sizeof(buf), "alpha must be 0 or 1, got %d", cfg.alpha_0);
        throw Error("InvalidRegime", buf);
    }
}

SimReport make_report(const SimConfig& cfg, const Solution& sol, double threshold,
                      double step, const Totals& totals, int monitor) {
    SimReport rep;
    rep.estimate = totals.estimate[monitor];
    rep.std_error = totals.std_error[monitor];
    rep.stopped_fraction = totals.stopped_fraction[monitor];
    rep.truncation_bound = truncation_bound(cfg.params, cfg.x1_0, cfg.horizon);
    rep.closed_form_value = sol.value(cfg.x1_0, cfg.x2_0, cfg.alpha_0);
    rep.threshold = threshold;
    rep.monitor_step = step;
    rep.paths = cfg.paths;
    rep.seed = cfg.seed;
    rep.alpha_0 = cfg.alpha_0;
    return rep;
}

}  // namespace

SimReport simulate_policy(const SimConfig& cfg) {
    validate_config(cfg);
    const Solution sol = solve(cfg.params);
    const double threshold = cfg.threshold_override.value_or(sol.k);

    Engine e = make_engine(cfg, sol.coeffs, cfg.monitor_step);
    e.n_monitors = 1;
    e.monitors[0] = {std::log(threshold), 1};

    const Totals totals =
        run_blocks(e, cfg.paths, cfg.seed, resolve_threads(cfg.threads), -1);
    return make_report(cfg, sol, threshold, cfg.monitor_step, totals, 0);
}

RefinementReport simulate_with_refinement(const SimConfig& cfg) {
    validate_config(cfg);
    const Solution sol = solve(cfg.params);
    const double threshold = cfg.threshold_override.value_or(sol.k);

    // one ensemble at step h/2 drives both monitors; the step-h monitor
    // fires on even instants only
    Engine e = make_engine(cfg, sol.coeffs, cfg.monitor_step / 2.0);
    e.n_monitors = 2;
    e.monitors[0] = {std::log(threshold), 2};
    e.monitors[1] = {std::log(threshold), 1};

    const Totals totals =
        run_blocks(e, cfg.paths, cfg.seed, resolve_threads(cfg.threads), -1);
    RefinementReport rep;
    rep.at_step = make_report(cfg, sol, threshold, cfg.monitor_step, totals, 0);
    rep.at_half_step =
        make_report(cfg, sol, threshold, cfg.monitor_step / 2.0, totals, 1);
    return rep;
}

std::vector<DominanceRow> policy_dominance(const SimConfig& cfg,
                                           std::vector<double> multipliers) {
    validate_config(cfg);
    if (std::none_of(multipliers.begin(), multipliers.end(),
                     [](double m) { return m == 1.0; }))
        multipliers.push_back(1.0);
    for (double m : multipliers)
        if (!(m > 0.0)) throw Error("InvalidThreshold", "multiplier must be > 0");
    if (multipliers.size() > static_cast<std::size_t>(kMaxMonitors))
        throw Error("InvalidThreshold", "at most 16 multipliers supported");

    const Solution sol = solve(cfg.params);
    const double base = cfg.threshold_override.value_or(sol.k);

    // shared paths: monitors sorted by threshold, largest first
    std::vector<std::size_t> order(multipliers.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return multipliers[a] > multipliers[b];
    });

    Engine e = make_engine(cfg, sol.coeffs, cfg.monitor_step);
    e.n_monitors = static_cast<int>(multipliers.size());
    int unit_monitor = -1;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const double mult = multipliers[order[pos]];
        e.monitors[pos] = {std::log(mult * base), 1};
        if (mult == 1.0) unit_monitor = static_cast<int>(pos);
    }

    const Totals totals = run_blocks(e, cfg.paths, cfg.seed,
                                     resolve_threads(cfg.threads), unit_monitor);

    std::vector<DominanceRow> rows(multipliers.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        DominanceRow& row = rows[order[pos]];
        row.multiplier = multipliers[order[pos]];
        row.threshold = row.multiplier * base;
        row.estimate = totals.estimate[pos];
        row.std_error = totals.std_error[pos];
        row.stopped_fraction = totals.stopped_fraction[pos];
        row.diff_vs_unit = totals.diff_vs_unit[pos];
        row.paired_std_error = totals.paired_std_error[pos];
    }
    return rows;
}

double truncation_bound(const ModelParams& p, double x1_0, double horizon) {
    return (1.0 - p.K) * x1_0 * std::exp(-(p.rho - p.mu1) * horizon);
}

namespace detail {

GbmStepper::GbmStepper(const ModelParams& params, const ReducedCoeffs& coeffs) {
    m1 = params.mu1 - coeffs.a11 / 2.0;
    m2 = params.mu2 - coeffs.a22 / 2.0;
    l11 = std::sqrt(coeffs.a11);
    l21 = l11 > 0.0 ? coeffs.a12 / l11 : 0.0;
    l22 = std::sqrt(std::max(coeffs.a22 - l21 * l21, 0.0));
}

void GbmStepper::operator()(double span, Rng& rng, double& dlx1,
                            double& dlx2) const {
    double z1, z2;
    rng.normal_pair(z1, z2);
    const double rt = std::sqrt(span);
    dlx1 = m1 * span + rt * l11 * z1;
    dlx2 = m2 * span + rt * (l21 * z1 + l22 * z2);
}

PathOutcome simulate_one(const SimConfig& cfg, std::uint64_t path_index) {
    validate_config(cfg);
    const Solution sol = solve(cfg.params);
    const double threshold = cfg.threshold_override.value_or(sol.k);

    Engine e = make_engine(cfg, sol.coeffs, cfg.monitor_step);
    e.n_monitors = 1;
    e.monitors[0] = {std::log(threshold), 1};

    Rng rng(cfg.seed, path_index);
    PathResult res;
    simulate_path(e, rng, res);

    PathOutcome out;
    out.stopped = res.stopped[0];
    out.tau = res.tau[0];
    out.payoff = res.payoff[0];
    out.x1 = res.x1_at_stop[0];
    out.x2 = res.x2_at_stop[0];
    return out;
}

}  // namespace detail

}  // namespace regime_stop
