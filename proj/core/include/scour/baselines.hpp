#pragma once

#include "scour/data.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scour {

/// Published closed-form pier-scour equations used for comparison.
enum class BaselineId {
    LaursenToch1956,
    Shen1969,
    Hancu1971,
    Johnson1992,
    RichardsonDavis2001,
    HEC18,
    Azamathulla2009,
    Sharafi2016,
};

/// Inputs a formula reads beyond the dimensionless core (sigma, Fr, D/y, d50/y).
enum class BaselineInput { CriticalVelocity, PierLengthRatio };

struct BaselineInfo {
    BaselineId id;
    std::string_view key;   // machine id, e.g. "richardson_davis_2001"
    std::string_view label; // e.g. "Richardson and Davis (2001)"
    bool laboratory_origin; // derived from laboratory data
    bool field_origin;      // derived from field data
    std::optional<BaselineInput> extra_input;
};

std::span<const BaselineInfo> all_baselines();
const BaselineInfo& baseline_info(BaselineId id);
BaselineId parse_baseline(std::string_view key);

struct BaselineOptions {
    /// Use Vc^2/(gD) inside Hancu's cube root instead of the printed Vc/(gD).
    bool hancu_squared = false;
};

struct BaselinePrediction {
    double s_over_y = 0.0;
    /// Hancu only: 2V/Vc - 1 <= 0, prediction clamped to 0.
    bool clamped = false;
};

/// True when the record carries every input the formula needs.
bool baseline_applicable(BaselineId id, const RawScourRecord& record);

/// Predicted S/y. Hancu's S/D is converted through D/y. Throws MissingInputError
/// naming formula and input when the record cannot feed the formula.
BaselinePrediction evaluate_baseline(BaselineId id, const RawScourRecord& record,
                                     const BaselineOptions& options = {});

/// Same for every formula except Hancu, which needs dimensional V, Vc and D.
double evaluate_baseline(BaselineId id, const DimensionlessRecord& record);

struct BaselineColumn {
    BaselineId id;
    std::vector<std::optional<double>> predictions; // S/y, parallel to the input records
    std::size_t skipped = 0;
    std::size_t clamped = 0;
};

struct BaselineTable {
    std::vector<BaselineColumn> columns;
};

BaselineTable run_baseline_suite(std::span<const BaselineId> ids,
                                 std::span<const RawScourRecord> records,
                                 const BaselineOptions& options = {});

} // namespace scour
