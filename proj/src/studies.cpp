#include "regime_stop/studies.hpp"

#include <cmath>
#include <cstdio>

namespace regime_stop {

namespace {

void apply_parameter(ModelParams& p, const std::string& name, double value) {
    if (name == "mu1") p.mu1 = value;
    else if (name == "mu2") p.mu2 = value;
    else if (name == "sigma11") p.sigma11 = value;
    else if (name == "sigma12") p.sigma12 = value;
    else if (name == "sigma21") p.sigma21 = value;
    else if (name == "sigma22") p.sigma22 = value;
    else if (name == "rho") p.rho = value;
    else if (name == "lambda0") p.lambda0 = value;
    else if (name == "lambda1") p.lambda1 = value;
    else if (name == "K") p.K = value;
    else if (name == "sigma_cross") { p.sigma12 = value; p.sigma21 = value; }
    else throw Error("UnknownParameter", "no sweepable parameter named '" + name + "'");
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    std::vector<SweepRow> rows;
    rows.reserve(spec.values.size());
    for (double value : spec.values) {
        SweepRow row;
        row.value = value;
        ModelParams p = spec.base;
        apply_parameter(p, spec.parameter, value);
        const auto issues = check(p);
        if (!issues.empty()) {
            std::string joined;
            for (const auto& issue : issues) {
                if (!joined.empty()) joined += "; ";
                joined += issue.code;
            }
            row.error = joined;
        } else {
            const Solution s = solve(p);
            row.ok = true;
            row.k = s.k;
            row.C1 = s.C1;
            row.C2 = s.C2;
            row.C3 = s.C3;
            row.k0 = k0_limit(p);
            row.k1 = k1_limit(p);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

AsymptoticCurves asymptotic_curves(const ModelParams& base,
                                   const std::vector<double>& lambda_grid) {
    AsymptoticCurves out;
    out.lambda = lambda_grid;
    out.k0 = k0_limit(base);
    out.k1 = k1_limit(base);
    out.k_vs_lambda0.reserve(lambda_grid.size());
    out.k_vs_lambda1.reserve(lambda_grid.size());
    for (double lambda : lambda_grid) {
        ModelParams p0 = base;
        p0.lambda0 = lambda;
        out.k_vs_lambda0.push_back(solve(p0).k);
        ModelParams p1 = base;
        p1.lambda1 = lambda;
        out.k_vs_lambda1.push_back(solve(p1).k);
    }
    return out;
}

std::vector<std::vector<double>> surface(const ModelParams& base,
                                         const std::vector<double>& lambda0_grid,
                                         const std::vector<double>& lambda1_grid) {
    std::vector<std::vector<double>> grid;
    grid.reserve(lambda0_grid.size());
    for (double l0 : lambda0_grid) {
        std::vector<double> row;
        row.reserve(lambda1_grid.size());
        for (double l1 : lambda1_grid) {
            ModelParams p = base;
            p.lambda0 = l0;
            p.lambda1 = l1;
            row.push_back(solve(p).k);
        }
        grid.push_back(std::move(row));
    }
    return grid;
}

std::vector<ProfileRow> function_profiles(const Solution& solution,
                                          const std::vector<double>& y_grid) {
    std::vector<ProfileRow> rows;
    rows.reserve(y_grid.size());
    for (double y : y_grid) {
        ProfileRow row;
        row.y = y;
        row.w0 = solution.w0(y);
        row.w1 = solution.w1(y);
        row.payoff_line = solution.coeffs.beta_s - solution.coeffs.beta_b * y;
        row.v0 = solution.value(1.0, y, 0);
        row.v1 = solution.value(1.0, y, 1);
        rows.push_back(row);
    }
    return rows;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    std::vector<double> out;
    if (count < 1) return out;
    out.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        out.push_back(lo);
        return out;
    }
    const double llo = std::log10(lo), lhi = std::log10(hi);
    for (int i = 0; i < count; ++i)
        out.push_back(std::pow(10.0, llo + (lhi - llo) * i / (count - 1)));
    return out;
}

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
    std::string out = spec.parameter + ",k,C1,C2,C3,k0,k1,error\n";
    for (const auto& row : rows) {
        out += format_double(row.value);
        if (row.ok) {
            out += "," + format_double(row.k) + "," + format_double(row.C1) + "," +
                   format_double(row.C2) + "," + format_double(row.C3) + "," +
                   format_double(row.k0) + "," + format_double(row.k1) + ",";
        } else {
            out += ",,,,,,," + row.error;
        }
        out += "\n";
    }
    return out;
}

std::string asymptotic_csv(const AsymptoticCurves& curves) {
    std::string out = "lambda,k_vs_lambda0,k_vs_lambda1,k0,k1\n";
    for (std::size_t i = 0; i < curves.lambda.size(); ++i) {
        out += format_double(curves.lambda[i]) + "," +
               format_double(curves.k_vs_lambda0[i]) + "," +
               format_double(curves.k_vs_lambda1[i]) + "," +
               format_double(curves.k0) + "," + format_double(curves.k1) + "\n";
    }
    return out;
}

std::string surface_csv(const std::vector<double>& lambda0_grid,
                        const std::vector<double>& lambda1_grid,
                        const std::vector<std::vector<double>>& k_grid) {
    std::string out = "lambda0\\lambda1";
    for (double l1 : lambda1_grid) out += "," + format_double(l1);
    out += "\n";
    for (std::size_t i = 0; i < lambda0_grid.size(); ++i) {
        out += format_double(lambda0_grid[i]);
        for (double k : k_grid[i]) out += "," + format_double(k);
        out += "\n";
    }
    return out;
}

std::string profiles_csv(const std::vector<ProfileRow>& rows) {
    std::string out = "y,w0,w1,payoff_line,v0,v1\n";
    for (const auto& row : rows) {
        out += format_double(row.y) + "," + format_double(row.w0) + "," +
               format_double(row.w1) + "," + format_double(row.payoff_line) + "," +
               format_double(row.v0) + "," + format_double(row.v1) + "\n";
    }
    return out;
}

}  // namespace regime_stop
