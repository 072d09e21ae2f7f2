#pragma once

#include <string>
#include <vector>

#include "regime_stop/closed_form.hpp"

namespace regime_stop {

/// One-parameter-at-a-time sensitivity sweep. `parameter` is one of the ten
/// config keys, or "sigma_cross" to move sigma12 and sigma21 together.
struct SweepSpec {
    ModelParams base;
    std::string parameter;
    std::vector<double> values;
};

/// One sweep point; invalid parameter sets are reported in place, never
/// silently dropped.
struct SweepRow {
    double value = 0.0;
    bool ok = false;
    std::string error;  ///< validation codes when !ok
    double k = 0.0;
    double C1 = 0.0, C2 = 0.0, C3 = 0.0;
    double k0 = 0.0, k1 = 0.0;
};

std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// k along one lambda at a time, with the two limit references.
struct AsymptoticCurves {
    std::vector<double> lambda;
    std::vector<double> k_vs_lambda0;  ///< lambda0 swept, lambda1 at base
    std::vector<double> k_vs_lambda1;  ///< lambda1 swept, lambda0 at base
    double k0 = 0.0;
    double k1 = 0.0;
};

AsymptoticCurves asymptotic_curves(const ModelParams& base,
                                   const std::vector<double>& lambda_grid);

/// k over the product grid; result[i][j] pairs lambda0_grid[i] with
/// lambda1_grid[j].
std::vector<std::vector<double>> surface(const ModelParams& base,
                                         const std::vector<double>& lambda0_grid,
                                         const std::vector<double>& lambda1_grid);

/// Plot-ready samples of the reduced value functions and the payoff line,
/// plus the degree-1 homogeneous values v_i(x1, y*x1) at x1 = 1.
struct ProfileRow {
    double y = 0.0;
    double w0 = 0.0;
    double w1 = 0.0;
    double payoff_line = 0.0;  ///< beta_s - beta_b * y
    double v0 = 0.0;           ///< v0(1, y)
    double v1 = 0.0;           ///< v1(1, y)
};

std::vector<ProfileRow> function_profiles(const Solution& solution,
                                          const std::vector<double>& y_grid);

/// Log-spaced grid helper: count points from lo to hi inclusive.
std::vector<double> log_spaced(double lo, double hi, int count);

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows);
std::string asymptotic_csv(const AsymptoticCurves& curves);
std::string surface_csv(const std::vector<double>& lambda0_grid,
                        const std::vector<double>& lambda1_grid,
                        const std::vector<std::vector<double>>& k_grid);
std::string profiles_csv(const std::vector<ProfileRow>& rows);

}  // namespace regime_stop
