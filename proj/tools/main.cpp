// regime-stop: closed-form selling thresholds for pairs positions under
// Markov-modulated trading windows, with residual verification, Monte Carlo
// policy checks, calibration and sensitivity studies.
//
// Primary stream discipline: stdout carries exactly one JSON or CSV payload;
// diagnostics, pretty tables and the reproducibility manifest go to stderr.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "regime_stop/calibration.hpp"
#include "regime_stop/closed_form.hpp"
#include "regime_stop/montecarlo.hpp"
#include "regime_stop/studies.hpp"
#include "regime_stop/verification.hpp"

using json = nlohmann::json;
using namespace regime_stop;

namespace {

constexpr const char* kSchema = "regime-stop/v1";

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// Optional per-field parameter record; filled from --config then overridden
/// by flags, completed into a ModelParams only when every key is present.
struct ParamDraft {
    std::optional<double> mu1, mu2, sigma11, sigma12, sigma21, sigma22;
    std::optional<double> rho, lambda0, lambda1, K;

    void merge_json(const json& j) {
        const auto take = [&](const char* key, std::optional<double>& slot) {
            if (j.contains(key) && j[key].is_number()) slot = j[key].get<double>();
        };
        take("mu1", mu1);
        take("mu2", mu2);
        take("sigma11", sigma11);
        take("sigma12", sigma12);
        take("sigma21", sigma21);
        take("sigma22", sigma22);
        take("rho", rho);
        take("lambda0", lambda0);
        take("lambda1", lambda1);
        take("K", K);
    }

    void set(const std::string& key, double value) {
        if (key == "mu1") mu1 = value;
        else if (key == "mu2") mu2 = value;
        else if (key == "sigma11") sigma11 = value;
        else if (key == "sigma12") sigma12 = value;
        else if (key == "sigma21") sigma21 = value;
        else if (key == "sigma22") sigma22 = value;
        else if (key == "rho") rho = value;
        else if (key == "lambda0") lambda0 = value;
        else if (key == "lambda1") lambda1 = value;
        else if (key == "K") K = value;
        else throw Error("UnknownKey", "unknown parameter key '" + key + "'");
    }

    ModelParams require() const {
        std::string missing;
        const auto need = [&](const char* name, const std::optional<double>& slot) {
            if (!slot) {
                if (!missing.empty()) missing += ", ";
                missing += name;
            }
        };
        need("mu1", mu1);
        need("mu2", mu2);
        need("sigma11", sigma11);
        need("sigma12", sigma12);
        need("sigma21", sigma21);
        need("sigma22", sigma22);
        need("rho", rho);
        need("lambda0", lambda0);
        need("lambda1", lambda1);
        need("K", K);
        if (!missing.empty())
            throw Error("MissingParameter",
                        "missing model parameters: " + missing +
                            " (provide --config or flags)");
        ModelParams p;
        p.mu1 = *mu1;
        p.mu2 = *mu2;
        p.sigma11 = *sigma11;
        p.sigma12 = *sigma12;
        p.sigma21 = *sigma21;
        p.sigma22 = *sigma22;
        p.rho = *rho;
        p.lambda0 = *lambda0;
        p.lambda1 = *lambda1;
        p.K = *K;
        return p;
    }
};

/// Flat `key = value` lines with # comments, or a JSON object (sniffed by a
/// leading '{', e.g. the calibrate output fed straight back in).
void load_config(const std::string& path, ParamDraft& draft) {
    std::ifstream in(path);
    if (!in) throw Error("ConfigNotFound", "cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j = json::parse(text, nullptr, true, true);
        draft.merge_json(j);
        return;
    }

    std::istringstream lines(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "line %zu: expected key = value", lineno);
            throw Error("BadConfig", buf);
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        try {
            std::size_t used = 0;
            const double v = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
            draft.set(key, v);
        } catch (const std::invalid_argument&) {
            char buf[128];
            std::snprintf(buf, sizeof(buf), "line %zu: bad numeric value '%s'",
                          lineno, value.c_str());
            throw Error("BadConfig", buf);
        }
    }
}

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> out;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw Error("BadValueList", "no values in '" + text + "'");
    return out;
}

/// "lo:hi:count" log-spaced, or an explicit comma list.
std::vector<double> parse_grid(const std::string& text) {
    if (text.find(':') == std::string::npos) return parse_value_list(text);
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw Error("BadGrid", "expected lo:hi:count in '" + text + "'");
    const double lo = std::stod(text.substr(0, c1));
    const double hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    const int count = std::stoi(text.substr(c2 + 1));
    if (!(lo > 0.0) || !(hi >= lo) || count < 1)
        throw Error("BadGrid", "grid must satisfy 0 < lo <= hi, count >= 1");
    return log_spaced(lo, hi, count);
}

struct RunContext {
    std::string subcommand;
    std::string out_path;       // empty = stdout
    std::string manifest_path;  // empty = stderr only
    json manifest_extra = json::object();
    std::optional<ModelParams> params;
};

json params_json(const ModelParams& p) {
    return {{"mu1", p.mu1},         {"mu2", p.mu2},
            {"sigma11", p.sigma11}, {"sigma12", p.sigma12},
            {"sigma21", p.sigma21}, {"sigma22", p.sigma22},
            {"rho", p.rho},         {"lambda0", p.lambda0},
            {"lambda1", p.lambda1}, {"K", p.K}};
}

/// Writes the payload, then the manifest describing it.
void emit(const RunContext& ctx, const std::string& payload) {
    if (ctx.out_path.empty()) {
        std::cout << payload;
        std::cout.flush();
    } else {
        std::ofstream out(ctx.out_path, std::ios::binary);
        if (!out) throw Error("WriteFailed", "cannot write '" + ctx.out_path + "'");
        out << payload;
    }

    json manifest{{"schema", kSchema},
                  {"tool", "regime-stop"},
                  {"version", REGIME_STOP_VERSION},
                  {"subcommand", ctx.subcommand},
                  {"settings", ctx.manifest_extra},
                  {"output",
                   {{"dest", ctx.out_path.empty() ? "stdout" : ctx.out_path},
                    {"bytes", payload.size()},
                    {"fnv1a64", hex64(fnv1a64(payload))}}}};
    manifest["params"] = ctx.params ? params_json(*ctx.params) : json();
    std::cerr << manifest.dump() << "\n";
    if (!ctx.manifest_path.empty()) {
        std::ofstream mf(ctx.manifest_path, std::ios::binary);
        if (!mf)
            throw Error("WriteFailed", "cannot write '" + ctx.manifest_path + "'");
        mf << manifest.dump() << "\n";
    }
}

json solution_json(const Solution& s) {
    return {{"schema", kSchema},
            {"params", params_json(s.params)},
            {"reduced",
             {{"a11", s.coeffs.a11},
              {"a12", s.coeffs.a12},
              {"a22", s.coeffs.a22},
              {"sigma", s.coeffs.sigma},
              {"beta_s", s.coeffs.beta_s},
              {"beta_b", s.coeffs.beta_b},
              {"a0", s.coeffs.a0},
              {"a1", s.coeffs.a1},
              {"eta", s.coeffs.eta}}},
            {"roots",
             {{"delta1", s.roots.delta1},
              {"delta2", s.roots.delta2},
              {"delta3", s.roots.delta3},
              {"delta4", s.roots.delta4},
              {"gamma1", s.roots.gamma1},
              {"gamma2", s.roots.gamma2}}},
            {"k", s.k},
            {"C1", s.C1},
            {"C2", s.C2},
            {"C3", s.C3},
            {"k0", k0_limit(s.params)},
            {"k1", k1_limit(s.params)}};
}

json report_json(const SimReport& rep) {
    return {{"estimate", rep.estimate},
            {"std_error", rep.std_error},
            {"stopped_fraction", rep.stopped_fraction},
            {"truncation_bound", rep.truncation_bound},
            {"closed_form_value", rep.closed_form_value},
            {"threshold", rep.threshold},
            {"monitor_step", rep.monitor_step},
            {"paths", rep.paths},
            {"seed", rep.seed},
            {"alpha", rep.alpha_0}};
}

void print_solution_table(const Solution& s, double k0, double k1) {
    std::fprintf(stderr,
                 "threshold and coefficients (annualized parameters)\n"
                 "  k   = %.10g   (close at the first allowed instant with "
                 "x2/x1 <= k)\n"
                 "  C1  = %.10g\n  C2  = %.10g\n  C3  = %.10g\n"
                 "  roots: delta1 = %.10g, delta2 = %.10g\n"
                 "         delta3 = %.10g, delta4 = %.10g\n"
                 "         gamma1 = %.10g, gamma2 = %.10g\n"
                 "  limits: k0 = %.10g (lambda0 -> inf), k1 = %.10g "
                 "(lambda1 -> inf)\n",
                 s.k, s.C1, s.C2, s.C3, s.roots.delta1, s.roots.delta2,
                 s.roots.delta3, s.roots.delta4, s.roots.gamma1, s.roots.gamma2,
                 k0, k1);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"closed-form pairs-selling thresholds under Markov trading windows"};
    app.set_version_flag("--version", REGIME_STOP_VERSION);
    app.require_subcommand(1);

    std::string config_path, out_path, manifest_path;
    bool pretty = false;
    std::optional<std::uint64_t> seed_flag;
    ParamDraft flag_draft;

    const auto add_param_option = [&](CLI::App* sub, const char* name,
                                      std::optional<double>& slot,
                                      const char* help) {
        sub->add_option_function<double>(
            name, [&slot](const double& v) { slot = v; }, help);
    };

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path,
                        "parameter file: key = value lines or calibrate JSON");
        sub->add_option("--out", out_path, "write the payload to a file");
        sub->add_option("--manifest", manifest_path,
                        "also write the run manifest to a file");
        sub->add_flag("--pretty", pretty, "human-readable summary on stderr");
        sub->add_option_function<std::uint64_t>(
            "--seed", [&](const std::uint64_t& v) { seed_flag = v; },
            "seed for randomized work (ignored by purely deterministic runs)");
        add_param_option(sub, "--mu1", flag_draft.mu1, "drift of stock 1 (1/year)");
        add_param_option(sub, "--mu2", flag_draft.mu2, "drift of stock 2 (1/year)");
        add_param_option(sub, "--sigma11", flag_draft.sigma11,
                         "volatility entry (1/sqrt(year))");
        add_param_option(sub, "--sigma12", flag_draft.sigma12, "volatility entry");
        add_param_option(sub, "--sigma21", flag_draft.sigma21, "volatility entry");
        add_param_option(sub, "--sigma22", flag_draft.sigma22, "volatility entry");
        add_param_option(sub, "--rho", flag_draft.rho,
                         "discount rate (1/year), must exceed both drifts");
        add_param_option(sub, "--lambda0", flag_draft.lambda0,
                         "reopening rate of the trading window (1/year)");
        add_param_option(sub, "--lambda1", flag_draft.lambda1,
                         "closing rate of the trading window (1/year)");
        add_param_option(sub, "--K", flag_draft.K, "proportional transaction cost");
    };

    const auto resolve_params = [&]() {
        ParamDraft draft;
        if (!config_path.empty()) load_config(config_path, draft);
        const auto override_slot = [](std::optional<double>& dst,
                                      const std::optional<double>& src) {
            if (src) dst = src;
        };
        override_slot(draft.mu1, flag_draft.mu1);
        override_slot(draft.mu2, flag_draft.mu2);
        override_slot(draft.sigma11, flag_draft.sigma11);
        override_slot(draft.sigma12, flag_draft.sigma12);
        override_slot(draft.sigma21, flag_draft.sigma21);
        override_slot(draft.sigma22, flag_draft.sigma22);
        override_slot(draft.rho, flag_draft.rho);
        override_slot(draft.lambda0, flag_draft.lambda0);
        override_slot(draft.lambda1, flag_draft.lambda1);
        override_slot(draft.K, flag_draft.K);
        return draft.require();
    };

    // ---- solve ----
    auto* solve_cmd = app.add_subcommand(
        "solve", "closed-form threshold, coefficients and limits as JSON");
    add_common(solve_cmd);

    // ---- verify ----
    auto* verify_cmd = app.add_subcommand(
        "verify",
        "residual certificates for the variational inequalities; exit 0 on pass");
    add_common(verify_cmd);
    int verify_grid = 4096;
    double verify_decades = 3.0;
    std::uint64_t verify_draws = 0, verify_positivity = 0;
    std::string report_path;
    verify_cmd->add_option("--grid-points", verify_grid, "points per region");
    verify_cmd->add_option("--decades", verify_decades, "grid half-width in decades");
    verify_cmd->add_option("--draws", verify_draws,
                           "also certify this many random parameter draws");
    verify_cmd->add_option("--positivity-draws", verify_positivity,
                           "coefficient-positivity sweep size");
    verify_cmd->add_option("--report", report_path, "dump the full report as JSON");

    // ---- simulate ----
    auto* sim_cmd = app.add_subcommand(
        "simulate", "Monte Carlo check of the threshold policy (JSON or CSV)");
    add_common(sim_cmd);
    SimConfig sim_base;
    double sim_multiplier = 0.0;
    bool sim_refine = false;
    std::string dominance_list;
    sim_cmd->add_option("--paths", sim_base.paths, "number of paths");
    sim_cmd->add_option("--horizon", sim_base.horizon, "truncation time in years");
    sim_cmd->add_option("--x1", sim_base.x1_0, "initial long-leg price");
    sim_cmd->add_option("--x2", sim_base.x2_0, "initial short-leg price");
    sim_cmd->add_option("--alpha", sim_base.alpha_0, "initial regime (0 or 1)");
    sim_cmd->add_option("--monitor-step", sim_base.monitor_step,
                        "monitoring sub-grid step in years");
    sim_cmd->add_option("--threshold-multiplier", sim_multiplier,
                        "scale the solved threshold (0 = use k itself)");
    sim_cmd->add_flag("--refine", sim_refine,
                      "couple a half-step run for the convergence check");
    sim_cmd->add_option("--dominance", dominance_list,
                        "comma list of threshold multipliers; emits a CSV table");

    // ---- calibrate ----
    auto* cal_cmd = app.add_subcommand(
        "calibrate", "drift/volatility estimates from date,p1,p2 close CSV");
    add_common(cal_cmd);
    std::string csv_path;
    int periods_per_year = 252, min_observations = 30;
    cal_cmd->add_option("csv", csv_path, "price CSV path, or - for stdin")
        ->required();
    cal_cmd->add_option("--periods-per-year", periods_per_year,
                        "annualization factor");
    cal_cmd->add_option("--min-observations", min_observations,
                        "minimum return count");

    // ---- table ----
    auto* table_cmd = app.add_subcommand(
        "table", "sensitivity sweeps, value-function profiles, asymptotic curves");
    add_common(table_cmd);
    std::string sweep_arg, lambda_grid_arg = "1e-2:1e8:41";
    bool profiles = false, asymptotics = false;
    int profile_points = 201;
    table_cmd->add_option("--sweep", sweep_arg, "param=v1,v2,... sensitivity table");
    table_cmd->add_flag("--profiles", profiles, "w/v function samples over y");
    table_cmd->add_flag("--asymptotics", asymptotics, "k along each lambda");
    table_cmd->add_option("--lambda-grid", lambda_grid_arg,
                          "lo:hi:count (log-spaced) or comma list");
    table_cmd->add_option("--points", profile_points, "profile sample count");

    // ---- surface ----
    auto* surface_cmd =
        app.add_subcommand("surface", "k over a lambda0 x lambda1 grid as CSV");
    add_common(surface_cmd);
    std::string l0_arg = "1e-2:1e4:13", l1_arg = "1e-2:1e4:13";
    surface_cmd->add_option("--lambda0-grid", l0_arg, "lo:hi:count or comma list");
    surface_cmd->add_option("--lambda1-grid", l1_arg, "lo:hi:count or comma list");

    CLI11_PARSE(app, argc, argv);

    try {
        RunContext ctx;
        ctx.out_path = out_path;
        ctx.manifest_path = manifest_path;

        if (solve_cmd->parsed()) {
            ctx.subcommand = "solve";
            const ModelParams params = resolve_params();
            ctx.params = params;
            const Solution s = regime_stop::solve(params);
            const double k0 = k0_limit(params), k1 = k1_limit(params);
            if (pretty) print_solution_table(s, k0, k1);
            emit(ctx, solution_json(s).dump() + "\n");
            return 0;
        }

        if (verify_cmd->parsed()) {
            ctx.subcommand = "verify";
            const std::uint64_t verify_seed = seed_flag.value_or(42);
            const ModelParams params = resolve_params();
            ctx.params = params;
            ctx.manifest_extra = {{"grid_points", verify_grid},
                                  {"decades", verify_decades},
                                  {"draws", verify_draws},
                                  {"positivity_draws", verify_positivity},
                                  {"seed", verify_seed}};
            const GridSpec grid{verify_grid, verify_decades};
            const ResidualReport base = qvi_residuals(regime_stop::solve(params), grid);
            bool pass = base.pass();

            const auto report_brief = [](const ResidualReport& r) {
                return json{{"psi_min", r.psi_min},
                            {"phi_min", r.phi_min},
                            {"ode_residual_max", r.ode_residual_max},
                            {"smoothfit_gap", r.smoothfit_gap},
                            {"tol_qvi", r.tol_qvi},
                            {"tol_ode", r.tol_ode},
                            {"tol_fit", r.tol_fit},
                            {"pass", r.pass()}};
            };

            json draws_summary;
            if (verify_draws > 0) {
                std::uint64_t failures = 0;
                double worst_psi = 0.0, worst_ode = 0.0, worst_fit = 0.0;
                for (std::uint64_t i = 0; i < verify_draws; ++i) {
                    const ModelParams drawn = sample_valid_params(verify_seed, i);
                    const ResidualReport r =
                        qvi_residuals(regime_stop::solve(drawn), grid);
                    if (!r.pass()) ++failures;
                    worst_psi = std::min(worst_psi, r.psi_min / r.tol_qvi);
                    worst_ode = std::max(worst_ode, r.ode_residual_max);
                    worst_fit = std::max(worst_fit, r.smoothfit_gap);
                }
                pass = pass && failures == 0;
                draws_summary = {{"draws", verify_draws},
                                 {"failures", failures},
                                 {"worst_psi_over_tol", worst_psi},
                                 {"worst_ode_residual", worst_ode},
                                 {"worst_smoothfit_gap", worst_fit}};
            }

            json positivity_summary;
            if (verify_positivity > 0) {
                const PositivitySummary sweep =
                    positivity_sweep(verify_positivity, verify_seed);
                pass = pass && sweep.pass();
                positivity_summary = {{"draws", sweep.draws},
                                      {"failures", sweep.failures},
                                      {"case_mu1_gt_mu2", sweep.case_mu1_gt_mu2},
                                      {"case_sigma_le_gap", sweep.case_sigma_le_gap}};
                for (const auto& ce : sweep.counterexamples) {
                    positivity_summary["counterexamples"].push_back(
                        {{"draw_index", ce.draw_index},
                         {"reason", ce.reason},
                         {"params", params_json(ce.params)}});
                }
            }

            json out{{"schema", kSchema},
                     {"params", params_json(params)},
                     {"config_report", report_brief(base)},
                     {"pass", pass}};
            if (!draws_summary.is_null()) out["random_draws"] = draws_summary;
            if (!positivity_summary.is_null()) out["positivity"] = positivity_summary;

            if (!report_path.empty()) {
                json full = out;
                full["config_report"]["grid"] = base.grid;
                full["config_report"]["psi_argmin"] = base.psi_argmin;
                full["config_report"]["phi_argmin"] = base.phi_argmin;
                full["config_report"]["psi_second_max"] = base.psi_second_max;
                full["config_report"]["phi_second_min"] = base.phi_second_min;
                full["config_report"]["phi_prime_min"] = base.phi_prime_min;
                std::ofstream rf(report_path, std::ios::binary);
                if (!rf)
                    throw Error("WriteFailed", "cannot write '" + report_path + "'");
                rf << full.dump(2) << "\n";
            }
            if (pretty)
                std::fprintf(stderr,
                             "verify: %s (psi_min=%.3g, phi_min=%.3g, "
                             "ode=%.3g, fit=%.3g)\n",
                             pass ? "PASS" : "FAIL", base.psi_min, base.phi_min,
                             base.ode_residual_max, base.smoothfit_gap);
            emit(ctx, out.dump() + "\n");
            return pass ? 0 : 2;
        }

        if (sim_cmd->parsed()) {
            ctx.subcommand = "simulate";
            SimConfig cfg = sim_base;
            if (seed_flag) cfg.seed = *seed_flag;
            cfg.params = resolve_params();
            ctx.params = cfg.params;
            if (sim_multiplier != 0.0) {
                const double k = regime_stop::solve(cfg.params).k;
                cfg.threshold_override = sim_multiplier * k;
            }
            ctx.manifest_extra = {{"paths", cfg.paths},
                                  {"horizon", cfg.horizon},
                                  {"seed", cfg.seed},
                                  {"x1", cfg.x1_0},
                                  {"x2", cfg.x2_0},
                                  {"alpha", cfg.alpha_0},
                                  {"monitor_step", cfg.monitor_step},
                                  {"threshold_multiplier", sim_multiplier},
                                  {"refine", sim_refine},
                                  {"dominance", dominance_list}};

            if (!dominance_list.empty()) {
                const auto rows =
                    policy_dominance(cfg, parse_value_list(dominance_list));
                std::string csv =
                    "multiplier,threshold,estimate,std_error,stopped_fraction,"
                    "diff_vs_unit,paired_std_error\n";
                char line[256];
                for (const auto& row : rows) {
                    std::snprintf(line, sizeof(line),
                                  "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                                  row.multiplier, row.threshold, row.estimate,
                                  row.std_error, row.stopped_fraction,
                                  row.diff_vs_unit, row.paired_std_error);
                    csv += line;
                }
                emit(ctx, csv);
                return 0;
            }

            if (sim_refine) {
                const RefinementReport rep = simulate_with_refinement(cfg);
                json out{{"schema", kSchema},
                         {"at_step", report_json(rep.at_step)},
                         {"at_half_step", report_json(rep.at_half_step)}};
                emit(ctx, out.dump() + "\n");
                return 0;
            }

            const SimReport rep = simulate_policy(cfg);
            if (pretty)
                std::fprintf(stderr,
                             "estimate %.6g +- %.2g (closed form %.6g, "
                             "stopped %.1f%%)\n",
                             rep.estimate, rep.std_error, rep.closed_form_value,
                             100.0 * rep.stopped_fraction);
            json out = report_json(rep);
            out["schema"] = kSchema;
            emit(ctx, out.dump() + "\n");
            return 0;
        }

        if (cal_cmd->parsed()) {
            ctx.subcommand = "calibrate";
            ctx.manifest_extra = {{"csv", csv_path},
                                  {"periods_per_year", periods_per_year},
                                  {"min_observations", min_observations}};
            PriceSeries series;
            if (csv_path == "-") {
                series = read_price_csv(std::cin);
            } else {
                std::ifstream in(csv_path);
                if (!in)
                    throw Error("ConfigNotFound",
                                "cannot open CSV file '" + csv_path + "'");
                series = read_price_csv(in);
            }
            const CalibrationResult r =
                calibrate(series, periods_per_year, min_observations);
            // keys match the config keys, so this JSON feeds solve --config
            json out{{"schema", kSchema},
                     {"mu1", r.mu1},
                     {"mu2", r.mu2},
                     {"sigma11", r.sigma11},
                     {"sigma12", r.sigma12},
                     {"sigma21", r.sigma21},
                     {"sigma22", r.sigma22},
                     {"a11", r.a11},
                     {"a12", r.a12},
                     {"a22", r.a22},
                     {"samples", r.samples},
                     {"periods_per_year", r.periods_per_year},
                     {"se_mu1", r.se_mu1},
                     {"se_mu2", r.se_mu2},
                     {"se_a11", r.se_a11},
                     {"se_a12", r.se_a12},
                     {"se_a22", r.se_a22}};
            if (pretty)
                std::fprintf(stderr,
                             "mu = (%.4f, %.4f), sigma rows = (%.4f, %.4f; "
                             "%.4f, %.4f), %lld returns\n",
                             r.mu1, r.mu2, r.sigma11, r.sigma12, r.sigma21,
                             r.sigma22, static_cast<long long>(r.samples));
            emit(ctx, out.dump() + "\n");
            return 0;
        }

        if (table_cmd->parsed()) {
            ctx.subcommand = "table";
            const ModelParams params = resolve_params();
            ctx.params = params;
            ctx.manifest_extra = {{"sweep", sweep_arg},
                                  {"profiles", profiles},
                                  {"asymptotics", asymptotics},
                                  {"lambda_grid", lambda_grid_arg},
                                  {"points", profile_points}};
            if (!sweep_arg.empty()) {
                const auto eq = sweep_arg.find('=');
                if (eq == std::string::npos)
                    throw Error("BadSweep", "expected --sweep param=v1,v2,...");
                SweepSpec spec{params, sweep_arg.substr(0, eq),
                               parse_value_list(sweep_arg.substr(eq + 1))};
                emit(ctx, sweep_csv(spec, run_sweep(spec)));
                return 0;
            }
            if (asymptotics) {
                const auto curves =
                    asymptotic_curves(params, parse_grid(lambda_grid_arg));
                emit(ctx, asymptotic_csv(curves));
                return 0;
            }
            if (profiles) {
                const Solution s = regime_stop::solve(params);
                const auto grid =
                    log_spaced(s.k * 1e-2, s.k * 1e3, profile_points);
                emit(ctx, profiles_csv(function_profiles(s, grid)));
                return 0;
            }
            throw Error("MissingMode",
                        "table needs one of --sweep, --profiles, --asymptotics");
        }

        if (surface_cmd->parsed()) {
            ctx.subcommand = "surface";
            const ModelParams params = resolve_params();
            ctx.params = params;
            ctx.manifest_extra = {{"lambda0_grid", l0_arg}, {"lambda1_grid", l1_arg}};
            const auto l0_grid = parse_grid(l0_arg);
            const auto l1_grid = parse_grid(l1_arg);
            emit(ctx, surface_csv(l0_grid, l1_grid,
                                  surface(params, l0_grid, l1_grid)));
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: Unhandled: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
