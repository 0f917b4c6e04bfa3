#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace scour {

struct PredictionPair {
    double measured = 0.0;
    double estimated = 0.0;
};

enum class MetricUnits { Meters, Dimensionless };

std::string_view to_string(MetricUnits units);
MetricUnits parse_metric_units(std::string_view text);

/// Residuals are e_i = estimated_i - measured_i, so positive bias means overestimation.
struct MetricReport {
    std::size_t n = 0;
    double bias = 0.0;
    std::optional<double> r2;         // undefined when measured values have zero variance
    double rmse = 0.0;
    double mae = 0.0;
    std::optional<double> se;         // undefined for n < 2
    std::optional<double> band_width; // 1.96 * se
    MetricUnits units = MetricUnits::Meters;

    bool operator==(const MetricReport&) const = default;
};

inline constexpr double kBandFactor = 1.96;

/// Throws ValidationError on empty input or non-finite values.
MetricReport compute_metrics(std::span<const PredictionPair> pairs,
                             MetricUnits units = MetricUnits::Meters);

double rmse(std::span<const PredictionPair> pairs);

/// Header for `write_metric_row`.
void write_metric_header(std::ostream& out, MetricUnits units);
/// `model_id,n,r2,rmse,bias,mae,band`; undefined values are written as NA.
void write_metric_row(std::ostream& out, std::string_view model_id, const MetricReport& report);

} // namespace scour
