#include "regime_stop/calibration.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>

namespace regime_stop {

CalibrationResult calibrate(const PriceSeries& series, int periods_per_year,
                            int min_observations) {
    char buf[160];
    const std::size_t n_prices = series.p1.size();
    if (series.p2.size() != n_prices ||
        (!series.dates.empty() && series.dates.size() != n_prices)) {
        std::snprintf(buf, sizeof(buf),
                      "series lengths differ: dates=%zu p1=%zu p2=%zu",
                      series.dates.size(), series.p1.size(), series.p2.size());
        throw Error("LengthMismatch", buf);
    }
    const std::int64_t n = static_cast<std::int64_t>(n_prices) - 1;
    if (n < min_observations) {
        std::snprintf(buf, sizeof(buf),
                      "need at least %d return observations, got %lld",
                      min_observations, static_cast<long long>(n));
        throw Error("TooFewObservations", buf);
    }
    for (std::size_t i = 0; i < n_prices; ++i) {
        if (!(series.p1[i] > 0.0) || !(series.p2[i] > 0.0)) {
            std::snprintf(buf, sizeof(buf), "nonpositive price at row %zu", i);
            throw Error("NonpositivePrice", buf);
        }
    }
    for (std::size_t i = 1; i < series.dates.size(); ++i) {
        if (!(series.dates[i - 1] < series.dates[i])) {
            std::snprintf(buf, sizeof(buf), "dates not strictly increasing at row %zu", i);
            throw Error("NonmonotoneDates", buf);
        }
    }

    double m1 = 0.0, m2 = 0.0;
    for (std::int64_t t = 1; t <= n; ++t) {
        m1 += std::log(series.p1[t] / series.p1[t - 1]);
        m2 += std::log(series.p2[t] / series.p2[t - 1]);
    }
    m1 /= static_cast<double>(n);
    m2 /= static_cast<double>(n);

    double c11 = 0.0, c12 = 0.0, c22 = 0.0;
    for (std::int64_t t = 1; t <= n; ++t) {
        const double r1 = std::log(series.p1[t] / series.p1[t - 1]) - m1;
        const double r2 = std::log(series.p2[t] / series.p2[t - 1]) - m2;
        c11 += r1 * r1;
        c12 += r1 * r2;
        c22 += r2 * r2;
    }
    const double denom = static_cast<double>(n - 1);
    c11 /= denom;
    c12 /= denom;
    c22 /= denom;

    CalibrationResult out;
    const double ppy = static_cast<double>(periods_per_year);
    out.a11 = c11 * ppy;
    out.a12 = c12 * ppy;
    out.a22 = c22 * ppy;
    out.mu1 = m1 * ppy + out.a11 / 2.0;
    out.mu2 = m2 * ppy + out.a22 / 2.0;
    out.samples = n;
    out.periods_per_year = periods_per_year;

    // symmetric PSD square root of the 2x2 covariance
    const double det = std::max(out.a11 * out.a22 - out.a12 * out.a12, 0.0);
    const double s = std::sqrt(det);
    const double trace_term = out.a11 + out.a22 + 2.0 * s;
    if (trace_term > 0.0) {
        const double tnorm = std::sqrt(trace_term);
        out.sigma11 = (out.a11 + s) / tnorm;
        out.sigma12 = out.a12 / tnorm;
        out.sigma21 = out.sigma12;
        out.sigma22 = (out.a22 + s) / tnorm;
    }

    const double years = static_cast<double>(n) / ppy;
    out.se_mu1 = std::sqrt(out.a11 / years);
    out.se_mu2 = std::sqrt(out.a22 / years);
    out.se_a11 = std::sqrt(2.0 * out.a11 * out.a11 / denom);
    out.se_a22 = std::sqrt(2.0 * out.a22 * out.a22 / denom);
    out.se_a12 = std::sqrt((out.a11 * out.a22 + out.a12 * out.a12) / denom);
    return out;
}

PriceSeries read_price_csv(std::istream& in) {
    PriceSeries series;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (row == 1) {
            if (line != "date,p1,p2") {
                throw Error("BadCsv",
                            "expected header 'date,p1,p2', got '" + line + "'");
            }
            continue;
        }
        std::istringstream ss(line);
        std::string date, f1, f2;
        if (!std::getline(ss, date, ',') || !std::getline(ss, f1, ',') ||
            !std::getline(ss, f2)) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "malformed row %zu", row);
            throw Error("BadCsv", buf);
        }
        try {
            std::size_t used1 = 0, used2 = 0;
            const double v1 = std::stod(f1, &used1);
            const double v2 = std::stod(f2, &used2);
            if (used1 != f1.size() || used2 != f2.size()) throw std::invalid_argument(f1);
            series.dates.push_back(date);
            series.p1.push_back(v1);
            series.p2.push_back(v2);
        } catch (const std::exception&) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "non-numeric price at row %zu", row);
            throw Error("BadCsv", buf);
        }
    }
    return series;
}

}  // namespace regime_stop
