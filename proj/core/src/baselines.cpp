#include "scour/baselines.hpp"

#include "scour/error.hpp"

#include <array>
#include <cmath>

namespace scour {

namespace {

constexpr std::array<BaselineInfo, 8> kBaselines{{
    {BaselineId::LaursenToch1956, "laursen_toch_1956", "Laursen and Toch (1956)", true, false, std::nullopt},
    {BaselineId::Shen1969, "shen_1969", "Shen et al. (1969)", true, false, std::nullopt},
    {BaselineId::Hancu1971, "hancu_1971", "Hancu (1971)", true, false, BaselineInput::CriticalVelocity},
    {BaselineId::Johnson1992, "johnson_1992", "Johnson (1992)", true, false, std::nullopt},
    {BaselineId::RichardsonDavis2001, "richardson_davis_2001", "Richardson and Davis (2001)", false, true, std::nullopt},
    {BaselineId::HEC18, "hec18", "HEC-18", true, true, std::nullopt},
    {BaselineId::Azamathulla2009, "azamathulla_2009", "Azamathulla et al. (2009)", false, true, BaselineInput::PierLengthRatio},
    {BaselineId::Sharafi2016, "sharafi_2016", "Sharafi et al. (2016)", false, true, BaselineInput::PierLengthRatio},
}};

[[noreturn]] void missing(BaselineId id, std::string_view input) {
    throw MissingInputError(std::string(baseline_info(id).label) + " requires " + std::string(input));
}

// Formulas over the dimensionless core plus L/y where needed.
double core_formula(BaselineId id, double sigma, double fr, double dy, double d50y,
                    std::optional<double> ly) {
    using std::pow;
    switch (id) {
    case BaselineId::LaursenToch1956: return 1.35 * pow(dy, 0.7);
    case BaselineId::Shen1969: return 3.4 * pow(fr, 0.67) * pow(dy, 0.67);
    case BaselineId::Johnson1992: return 2.02 * pow(sigma, -0.98) * pow(fr, 0.21) * pow(dy, 0.98);
    case BaselineId::RichardsonDavis2001: return 2.6 * pow(fr, 0.65) * pow(dy, 0.43);
    case BaselineId::HEC18: return 2.1 * pow(fr, 0.43) * pow(dy, 0.65);
    case BaselineId::Azamathulla2009:
        if (!ly) missing(id, "L/y");
        return 1.82 * pow(sigma, -0.03159) * pow(fr, 0.42) * pow(d50y, 0.042) * pow(dy, -0.28) *
               pow(*ly, -0.37);
    case BaselineId::Sharafi2016:
        if (!ly) missing(id, "L/y");
        return 0.28 * pow(sigma, 0.13) * pow(fr, 0.47) * pow(d50y, -0.1) * pow(dy, 0.44) *
               pow(*ly, 0.23);
    case BaselineId::Hancu1971: missing(id, "V, Vc and D in physical units");
    }
    throw MissingInputError("unknown baseline");
}

} // namespace

std::span<const BaselineInfo> all_baselines() { return kBaselines; }

const BaselineInfo& baseline_info(BaselineId id) {
    return kBaselines[static_cast<std::size_t>(id)];
}

BaselineId parse_baseline(std::string_view key) {
    for (const auto& b : kBaselines)
        if (b.key == key) return b.id;
    std::string valid;
    for (const auto& b : kBaselines) valid += (valid.empty() ? "" : ", ") + std::string(b.key);
    throw ConfigError("unknown baseline '" + std::string(key) + "'; valid: " + valid);
}

bool baseline_applicable(BaselineId id, const RawScourRecord& record) {
    const auto& extra = baseline_info(id).extra_input;
    if (!extra) return true;
    if (*extra == BaselineInput::CriticalVelocity) return record.critical_velocity.has_value();
    return record.pier_length.has_value();
}

BaselinePrediction evaluate_baseline(BaselineId id, const RawScourRecord& record,
                                     const BaselineOptions& options) {
    const DimensionlessRecord f = derive_features(record);
    if (id == BaselineId::Hancu1971) {
        if (!record.critical_velocity) missing(id, "critical velocity Vc");
        const double v = record.mean_velocity;
        const double vc = *record.critical_velocity;
        const double d = record.pier_width;
        const double intensity = 2.0 * v / vc - 1.0;
        if (intensity <= 0.0) return {0.0, true};
        const double ratio = (options.hancu_squared ? vc * vc : vc) / (kGravity * d);
        const double s_over_d = 2.42 * intensity * std::cbrt(ratio);
        return {s_over_d * (d / record.flow_depth), false};
    }
    std::optional<double> ly;
    if (record.scale == Scale::Field) ly = f.fifth_feature;
    return {core_formula(id, f.gradation, f.froude, f.width_ratio, f.grain_ratio, ly), false};
}

double evaluate_baseline(BaselineId id, const DimensionlessRecord& record) {
    std::optional<double> ly;
    if (record.scale == Scale::Field) ly = record.fifth_feature;
    return core_formula(id, record.gradation, record.froude, record.width_ratio, record.grain_ratio, ly);
}

BaselineTable run_baseline_suite(std::span<const BaselineId> ids,
                                 std::span<const RawScourRecord> records,
                                 const BaselineOptions& options) {
    BaselineTable table;
    for (BaselineId id : ids) {
        BaselineColumn col{id, {}, 0, 0};
        col.predictions.reserve(records.size());
        for (const auto& r : records) {
            if (!baseline_applicable(id, r)) {
                col.predictions.emplace_back();
                ++col.skipped;
                continue;
            }
            const auto p = evaluate_baseline(id, r, options);
            if (p.clamped) ++col.clamped;
            col.predictions.emplace_back(p.s_over_y);
        }
        table.columns.push_back(std::move(col));
    }
    return table;
}

} // namespace scour
