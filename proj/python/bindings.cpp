// pybind11 surface for the regime_stop core: model validation, the
// closed-form solve, residual certificates, Monte Carlo policy checks,
// calibration and parameter studies.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "regime_stop/calibration.hpp"
#include "regime_stop/closed_form.hpp"
#include "regime_stop/montecarlo.hpp"
#include "regime_stop/studies.hpp"
#include "regime_stop/verification.hpp"

namespace py = pybind11;
using namespace regime_stop;

PYBIND11_MODULE(_core, m) {
    m.doc() =
        "Closed-form selling thresholds for pairs positions under "
        "Markov-modulated trading windows, with verification and Monte Carlo "
        "tools.";

    py::register_exception<Error>(m, "RegimeStopError", PyExc_ValueError);

    py::class_<ModelParams>(m, "ModelParams",
                            "Annualized model parameters; stock 1 is the long "
                            "leg, stock 2 the short leg.")
        .def(py::init([](double mu1, double mu2, double sigma11, double sigma12,
                         double sigma21, double sigma22, double rho,
                         double lambda0, double lambda1, double K) {
                 ModelParams p;
                 p.mu1 = mu1;
                 p.mu2 = mu2;
                 p.sigma11 = sigma11;
                 p.sigma12 = sigma12;
                 p.sigma21 = sigma21;
                 p.sigma22 = sigma22;
                 p.rho = rho;
                 p.lambda0 = lambda0;
                 p.lambda1 = lambda1;
                 p.K = K;
                 return p;
             }),
             py::arg("mu1"), py::arg("mu2"), py::arg("sigma11"),
             py::arg("sigma12"), py::arg("sigma21"), py::arg("sigma22"),
             py::arg("rho"), py::arg("lambda0"), py::arg("lambda1"),
             py::arg("K") = 0.0)
        .def_readwrite("mu1", &ModelParams::mu1)
        .def_readwrite("mu2", &ModelParams::mu2)
        .def_readwrite("sigma11", &ModelParams::sigma11)
        .def_readwrite("sigma12", &ModelParams::sigma12)
        .def_readwrite("sigma21", &ModelParams::sigma21)
        .def_readwrite("sigma22", &ModelParams::sigma22)
        .def_readwrite("rho", &ModelParams::rho)
        .def_readwrite("lambda0", &ModelParams::lambda0)
        .def_readwrite("lambda1", &ModelParams::lambda1)
        .def_readwrite("K", &ModelParams::K)
        .def("__repr__", [](const ModelParams& p) {
            char buf[256];
            std::snprintf(buf, sizeof(buf),
                          "ModelParams(mu1=%g, mu2=%g, sigma=[[%g, %g], [%g, "
                          "%g]], rho=%g, lambda0=%g, lambda1=%g, K=%g)",
                          p.mu1, p.mu2, p.sigma11, p.sigma12, p.sigma21,
                          p.sigma22, p.rho, p.lambda0, p.lambda1, p.K);
            return std::string(buf);
        });

    py::class_<ValidationIssue>(m, "ValidationIssue")
        .def_readonly("code", &ValidationIssue::code)
        .def_readonly("message", &ValidationIssue::message)
        .def("__repr__", [](const ValidationIssue& i) {
            return i.code + ": " + i.message;
        });

    m.def("check", &check, py::arg("params"),
          "Every violated invariant; empty means valid.");
    m.def("validate", &validate, py::arg("params"),
          "Returns the parameters or raises listing all violations.");

    py::class_<ReducedCoeffs>(m, "ReducedCoeffs")
        .def_readonly("a11", &ReducedCoeffs::a11)
        .def_readonly("a12", &ReducedCoeffs::a12)
        .def_readonly("a22", &ReducedCoeffs::a22)
        .def_readonly("sigma", &ReducedCoeffs::sigma)
        .def_readonly("beta_s", &ReducedCoeffs::beta_s)
        .def_readonly("beta_b", &ReducedCoeffs::beta_b)
        .def_readonly("a0", &ReducedCoeffs::a0)
        .def_readonly("a1", &ReducedCoeffs::a1)
        .def_readonly("eta", &ReducedCoeffs::eta);
    m.def("derive_coeffs", &derive_coeffs, py::arg("params"));

    py::class_<Roots>(m, "Roots")
        .def_readonly("delta1", &Roots::delta1)
        .def_readonly("delta2", &Roots::delta2)
        .def_readonly("delta3", &Roots::delta3)
        .def_readonly("delta4", &Roots::delta4)
        .def_readonly("gamma1", &Roots::gamma1)
        .def_readonly("gamma2", &Roots::gamma2);
    m.def("compute_roots", &compute_roots, py::arg("coeffs"), py::arg("params"));
    m.def("threshold_k", &threshold_k, py::arg("roots"), py::arg("coeffs"),
          "Threshold from the grouped, cancellation-free form.");

    py::class_<Solution>(m, "Solution",
                         "Threshold, series coefficients and value-function "
                         "evaluators.")
        .def_readonly("params", &Solution::params)
        .def_readonly("coeffs", &Solution::coeffs)
        .def_readonly("roots", &Solution::roots)
        .def_readonly("k", &Solution::k)
        .def_readonly("C1", &Solution::C1)
        .def_readonly("C2", &Solution::C2)
        .def_readonly("C3", &Solution::C3)
        .def("w0", &Solution::w0, py::arg("y"), "Value per unit of x1, regime 0.")
        .def("w1", &Solution::w1, py::arg("y"), "Value per unit of x1, regime 1.")
        .def("value", &Solution::value, py::arg("x1"), py::arg("x2"),
             py::arg("alpha"), "v_alpha(x1, x2) = x1 * w_alpha(x2/x1).")
        .def("__repr__", [](const Solution& s) {
            char buf[128];
            std::snprintf(buf, sizeof(buf), "Solution(k=%.10g, C1=%g, C2=%g, C3=%g)",
                          s.k, s.C1, s.C2, s.C3);
            return std::string(buf);
        });
    m.def("solve", &solve, py::arg("params"),
          "Validate, reduce and solve the smooth-fit system in closed form.");
    m.def("k0_limit", &k0_limit, py::arg("params"),
          "Unconstrained threshold, the lambda0 -> inf limit.");
    m.def("k1_limit", &k1_limit, py::arg("params"),
          "lambda1 -> inf limit at fixed lambda0; exceeds k0_limit.");

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<>())
        .def(py::init([](int points, double decades) {
                 return GridSpec{points, decades};
             }),
             py::arg("points_per_region") = 4096, py::arg("decades") = 3.0)
        .def_readwrite("points_per_region", &GridSpec::points_per_region)
        .def_readwrite("decades", &GridSpec::decades);

    py::class_<ResidualReport>(m, "ResidualReport")
        .def_readonly("grid", &ResidualReport::grid)
        .def_readonly("psi_min", &ResidualReport::psi_min)
        .def_readonly("phi_min", &ResidualReport::phi_min)
        .def_readonly("ode_residual_max", &ResidualReport::ode_residual_max)
        .def_readonly("smoothfit_gap", &ResidualReport::smoothfit_gap)
        .def_readonly("psi_second_max", &ResidualReport::psi_second_max)
        .def_readonly("phi_second_min", &ResidualReport::phi_second_min)
        .def_readonly("phi_prime_min", &ResidualReport::phi_prime_min)
        .def_readonly("tol_qvi", &ResidualReport::tol_qvi)
        .def_readonly("tol_ode", &ResidualReport::tol_ode)
        .def_readonly("tol_fit", &ResidualReport::tol_fit)
        .def("passes", &ResidualReport::pass);
    m.def("qvi_residuals", &qvi_residuals, py::arg("solution"),
          py::arg("grid") = GridSpec{},
          "Residual certificate for the coupled variational inequalities.");

    py::class_<SmoothFitReport>(m, "SmoothFitReport")
        .def_readonly("w1_value_gap", &SmoothFitReport::w1_value_gap)
        .def_readonly("w1_deriv_gap", &SmoothFitReport::w1_deriv_gap)
        .def_readonly("w0_value_gap", &SmoothFitReport::w0_value_gap)
        .def_readonly("w0_deriv_gap", &SmoothFitReport::w0_deriv_gap)
        .def_readonly("scaled_max", &SmoothFitReport::scaled_max)
        .def_readonly("w1_second_minus", &SmoothFitReport::w1_second_minus)
        .def_readonly("w1_second_plus", &SmoothFitReport::w1_second_plus);
    m.def("smooth_fit_check", &smooth_fit_check, py::arg("solution"));

    py::class_<PositivityCounterexample>(m, "PositivityCounterexample")
        .def_readonly("draw_index", &PositivityCounterexample::draw_index)
        .def_readonly("params", &PositivityCounterexample::params)
        .def_readonly("reason", &PositivityCounterexample::reason);
    py::class_<PositivitySummary>(m, "PositivitySummary")
        .def_readonly("draws", &PositivitySummary::draws)
        .def_readonly("failures", &PositivitySummary::failures)
        .def_readonly("case_mu1_gt_mu2", &PositivitySummary::case_mu1_gt_mu2)
        .def_readonly("case_sigma_le_gap", &PositivitySummary::case_sigma_le_gap)
        .def_readonly("counterexamples", &PositivitySummary::counterexamples)
        .def("passes", &PositivitySummary::pass);
    m.def("positivity_sweep", &positivity_sweep, py::arg("draw_count"),
          py::arg("seed"),
          "Random A1-valid draws checking k > 0, the threshold bracket and "
          "coefficient positivity; draw i depends only on (seed, i).");
    m.def("sample_valid_params", &sample_valid_params, py::arg("seed"),
          py::arg("draw_index"));

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init([](const ModelParams& params, double x1, double x2,
                         int alpha, std::int64_t paths, double horizon,
                         std::uint64_t seed, double monitor_step,
                         std::optional<double> threshold_override, int threads) {
                 SimConfig cfg;
                 cfg.params = params;
                 cfg.x1_0 = x1;
                 cfg.x2_0 = x2;
                 cfg.alpha_0 = alpha;
                 cfg.paths = paths;
                 cfg.horizon = horizon;
                 cfg.seed = seed;
                 cfg.monitor_step = monitor_step;
                 cfg.threshold_override = threshold_override;
                 cfg.threads = threads;
                 return cfg;
             }),
             py::arg("params"), py::arg("x1") = 1.0, py::arg("x2") = 1.0,
             py::arg("alpha") = 1, py::arg("paths") = 100000,
             py::arg("horizon") = 20.0, py::arg("seed") = 1,
             py::arg("monitor_step") = 1e-4,
             py::arg("threshold_override") = std::nullopt,
             py::arg("threads") = 0)
        .def_readwrite("params", &SimConfig::params)
        .def_readwrite("x1", &SimConfig::x1_0)
        .def_readwrite("x2", &SimConfig::x2_0)
        .def_readwrite("alpha", &SimConfig::alpha_0)
        .def_readwrite("paths", &SimConfig::paths)
        .def_readwrite("horizon", &SimConfig::horizon)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("monitor_step", &SimConfig::monitor_step)
        .def_readwrite("threshold_override", &SimConfig::threshold_override)
        .def_readwrite("threads", &SimConfig::threads);

    py::class_<SimReport>(m, "SimReport")
        .def_readonly("estimate", &SimReport::estimate)
        .def_readonly("std_error", &SimReport::std_error)
        .def_readonly("stopped_fraction", &SimReport::stopped_fraction)
        .def_readonly("truncation_bound", &SimReport::truncation_bound)
        .def_readonly("closed_form_value", &SimReport::closed_form_value)
        .def_readonly("threshold", &SimReport::threshold)
        .def_readonly("monitor_step", &SimReport::monitor_step)
        .def_readonly("paths", &SimReport::paths)
        .def_readonly("seed", &SimReport::seed)
        .def_readonly("alpha", &SimReport::alpha_0)
        .def("__repr__", [](const SimReport& r) {
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "SimReport(estimate=%.6g, std_error=%.3g, "
                          "closed_form_value=%.6g, stopped=%.3f)",
                          r.estimate, r.std_error, r.closed_form_value,
                          r.stopped_fraction);
            return std::string(buf);
        });
    m.def("simulate_policy", &simulate_policy, py::arg("config"),
          py::call_guard<py::gil_scoped_release>(),
          "Monte Carlo estimate of the constrained threshold rule; "
          "bit-reproducible for a fixed (seed, config).");

    py::class_<RefinementReport>(m, "RefinementReport")
        .def_readonly("at_step", &RefinementReport::at_step)
        .def_readonly("at_half_step", &RefinementReport::at_half_step);
    m.def("simulate_with_refinement", &simulate_with_refinement,
          py::arg("config"), py::call_guard<py::gil_scoped_release>(),
          "Coupled step-h and step-h/2 estimates for the convergence check.");

    py::class_<DominanceRow>(m, "DominanceRow")
        .def_readonly("multiplier", &DominanceRow::multiplier)
        .def_readonly("threshold", &DominanceRow::threshold)
        .def_readonly("estimate", &DominanceRow::estimate)
        .def_readonly("std_error", &DominanceRow::std_error)
        .def_readonly("stopped_fraction", &DominanceRow::stopped_fraction)
        .def_readonly("diff_vs_unit", &DominanceRow::diff_vs_unit)
        .def_readonly("paired_std_error", &DominanceRow::paired_std_error);
    m.def("policy_dominance", &policy_dominance, py::arg("config"),
          py::arg("multipliers"), py::call_guard<py::gil_scoped_release>(),
          "Common-random-numbers comparison of scaled thresholds.");
    m.def("truncation_bound", &truncation_bound, py::arg("params"),
          py::arg("x1"), py::arg("horizon"));

    py::class_<PriceSeries>(m, "PriceSeries")
        .def(py::init([](std::vector<std::string> dates, std::vector<double> p1,
                         std::vector<double> p2) {
                 PriceSeries s;
                 s.dates = std::move(dates);
                 s.p1 = std::move(p1);
                 s.p2 = std::move(p2);
                 return s;
             }),
             py::arg("dates"), py::arg("p1"), py::arg("p2"))
        .def_readwrite("dates", &PriceSeries::dates)
        .def_readwrite("p1", &PriceSeries::p1)
        .def_readwrite("p2", &PriceSeries::p2);

    py::class_<CalibrationResult>(m, "CalibrationResult")
        .def_readonly("mu1", &CalibrationResult::mu1)
        .def_readonly("mu2", &CalibrationResult::mu2)
        .def_readonly("sigma11", &CalibrationResult::sigma11)
        .def_readonly("sigma12", &CalibrationResult::sigma12)
        .def_readonly("sigma21", &CalibrationResult::sigma21)
        .def_readonly("sigma22", &CalibrationResult::sigma22)
        .def_readonly("a11", &CalibrationResult::a11)
        .def_readonly("a12", &CalibrationResult::a12)
        .def_readonly("a22", &CalibrationResult::a22)
        .def_readonly("samples", &CalibrationResult::samples)
        .def_readonly("periods_per_year", &CalibrationResult::periods_per_year)
        .def_readonly("se_mu1", &CalibrationResult::se_mu1)
        .def_readonly("se_mu2", &CalibrationResult::se_mu2)
        .def_readonly("se_a11", &CalibrationResult::se_a11)
        .def_readonly("se_a12", &CalibrationResult::se_a12)
        .def_readonly("se_a22", &CalibrationResult::se_a22)
        .def("params", [](const CalibrationResult& r, double rho, double lambda0,
                          double lambda1, double K) {
                 ModelParams p;
                 p.mu1 = r.mu1;
                 p.mu2 = r.mu2;
                 p.sigma11 = r.sigma11;
                 p.sigma12 = r.sigma12;
                 p.sigma21 = r.sigma21;
                 p.sigma22 = r.sigma22;
                 p.rho = rho;
                 p.lambda0 = lambda0;
                 p.lambda1 = lambda1;
                 p.K = K;
                 return p;
             },
             py::arg("rho"), py::arg("lambda0"), py::arg("lambda1"),
             py::arg("K") = 0.0,
             "Combine the estimates with the remaining model inputs.");
    m.def("calibrate", &calibrate, py::arg("series"),
          py::arg("periods_per_year") = 252, py::arg("min_observations") = 30,
          "Moment-matched drifts and symmetric-PSD volatility factor from log "
          "returns, with asymptotic standard errors.");

    py::class_<SweepSpec>(m, "SweepSpec")
        .def(py::init([](const ModelParams& base, std::string parameter,
                         std::vector<double> values) {
                 return SweepSpec{base, std::move(parameter), std::move(values)};
             }),
             py::arg("base"), py::arg("parameter"), py::arg("values"));
    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("value", &SweepRow::value)
        .def_readonly("ok", &SweepRow::ok)
        .def_readonly("error", &SweepRow::error)
        .def_readonly("k", &SweepRow::k)
        .def_readonly("C1", &SweepRow::C1)
        .def_readonly("C2", &SweepRow::C2)
        .def_readonly("C3", &SweepRow::C3)
        .def_readonly("k0", &SweepRow::k0)
        .def_readonly("k1", &SweepRow::k1);
    m.def("run_sweep", &run_sweep, py::arg("spec"));

    py::class_<AsymptoticCurves>(m, "AsymptoticCurves")
        .def_readonly("lambda_grid", &AsymptoticCurves::lambda)
        .def_readonly("k_vs_lambda0", &AsymptoticCurves::k_vs_lambda0)
        .def_readonly("k_vs_lambda1", &AsymptoticCurves::k_vs_lambda1)
        .def_readonly("k0", &AsymptoticCurves::k0)
        .def_readonly("k1", &AsymptoticCurves::k1);
    m.def("asymptotic_curves", &asymptotic_curves, py::arg("base"),
          py::arg("lambda_grid"));
    m.def("surface", &surface, py::arg("base"), py::arg("lambda0_grid"),
          py::arg("lambda1_grid"));

    py::class_<ProfileRow>(m, "ProfileRow")
        .def_readonly("y", &ProfileRow::y)
        .def_readonly("w0", &ProfileRow::w0)
        .def_readonly("w1", &ProfileRow::w1)
        .def_readonly("payoff_line", &ProfileRow::payoff_line)
        .def_readonly("v0", &ProfileRow::v0)
        .def_readonly("v1", &ProfileRow::v1);
    m.def("function_profiles", &function_profiles, py::arg("solution"),
          py::arg("y_grid"));
    m.def("log_spaced", &log_spaced, py::arg("lo"), py::arg("hi"),
          py::arg("count"));

#ifdef REGIME_STOP_VERSION
    m.attr("__version__") = REGIME_STOP_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
