#include "scour/metrics.hpp"

#include "scour/error.hpp"
#include "text.hpp"

#include <cmath>
#include <ostream>
#include <string>

namespace scour {

namespace {

void check(std::span<const PredictionPair> pairs) {
    if (pairs.empty()) throw ValidationError("metrics: no prediction pairs");
    for (const auto& p : pairs)
        if (!std::isfinite(p.measured) || !std::isfinite(p.estimated))
            throw ValidationError("metrics: non-finite measured or estimated value");
}

std::string optional_cell(const std::optional<double>& v) {
    return v ? detail::format_double(*v) : std::string("NA");
}

} // namespace

std::string_view to_string(MetricUnits units) {
    return units == MetricUnits::Meters ? "meters" : "dimensionless";
}

MetricUnits parse_metric_units(std::string_view text) {
    if (text == "meters" || text == "m") return MetricUnits::Meters;
    if (text == "dimensionless" || text == "S/y") return MetricUnits::Dimensionless;
    throw ConfigError("unknown metric units '" + std::string(text) +
                      "' (expected meters or dimensionless)");
}

double rmse(std::span<const PredictionPair> pairs) {
    check(pairs);
    double sse = 0.0;
    for (const auto& p : pairs) {
        const double d = p.measured - p.estimated;
        sse += d * d;
    }
    return std::sqrt(sse / static_cast<double>(pairs.size()));
}

MetricReport compute_metrics(std::span<const PredictionPair> pairs, MetricUnits units) {
    check(pairs);
    const auto n = static_cast<double>(pairs.size());

    double sum_e = 0.0, sum_abs = 0.0, sse = 0.0, sum_y = 0.0;
    for (const auto& p : pairs) {
        const double e = p.estimated - p.measured;
        sum_e += e;
        sum_abs += std::abs(e);
        sse += e * e;
        sum_y += p.measured;
    }
    const double mean_e = sum_e / n;
    const double mean_y = sum_y / n;

    double sst = 0.0, centered = 0.0;
    for (const auto& p : pairs) {
        const double dy = p.measured - mean_y;
        const double de = (p.estimated - p.measured) - mean_e;
        sst += dy * dy;
        centered += de * de;
    }

    MetricReport r;
    r.n = pairs.size();
    r.units = units;
    r.bias = mean_e;
    r.rmse = std::sqrt(sse / n);
    r.mae = sum_abs / n;
    if (sst > 0.0) r.r2 = 1.0 - sse / sst;
    if (pairs.size() >= 2) {
        r.se = std::sqrt(centered / (n - 1.0));
        r.band_width = kBandFactor * *r.se;
    }
    return r;
}

void write_metric_header(std::ostream& out, MetricUnits units) {
    if (units == MetricUnits::Meters)
        out << "model_id,n,r2,rmse_m,bias_m,mae_m,band_m\n";
    else
        out << "model_id,n,r2,rmse,bias,mae,band\n";
}

void write_metric_row(std::ostream& out, std::string_view model_id, const MetricReport& report) {
    using detail::format_double;
    out << model_id << ',' << report.n << ',' << optional_cell(report.r2) << ','
        << format_double(report.rmse) << ',' << format_double(report.bias) << ','
        << format_double(report.mae) << ',' << optional_cell(report.band_width) << '\n';
}

} // namespace scour
