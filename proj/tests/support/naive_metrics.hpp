#pragma once

// Textbook loop-per-quantity evaluation of the error measures, kept deliberately
// separate from the library implementation to serve as an oracle.

#include "scour/metrics.hpp"

#include <cmath>
#include <optional>
#include <span>

namespace scour::testing {

struct NaiveMetrics {
    double bias = 0.0;
    std::optional<double> r2;
    double rmse = 0.0;
    double mae = 0.0;
    std::optional<double> se;
};

inline NaiveMetrics naive_metrics(std::span<const PredictionPair> pairs) {
    const double n = static_cast<double>(pairs.size());
    NaiveMetrics m;

    double total = 0.0;
    for (const auto& p : pairs) total += p.estimated - p.measured;
    m.bias = total / n;

    double mean_measured = 0.0;
    for (const auto& p : pairs) mean_measured += p.measured / n;
    double num = 0.0;
    for (const auto& p : pairs) num += std::pow(p.measured - p.estimated, 2);
    double den = 0.0;
    for (const auto& p : pairs) den += std::pow(p.measured - mean_measured, 2);
    if (den > 0.0) m.r2 = 1.0 - num / den;

    m.rmse = std::sqrt(num / n);

    double abs_total = 0.0;
    for (const auto& p : pairs) abs_total += std::fabs(p.estimated - p.measured);
    m.mae = abs_total / n;

    if (pairs.size() >= 2) {
        double spread = 0.0;
        for (const auto& p : pairs) spread += std::pow((p.estimated - p.measured) - m.bias, 2);
        m.se = std::sqrt(spread / (n - 1.0));
    }
    return m;
}

} // namespace scour::testing
