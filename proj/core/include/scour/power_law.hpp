#pragma once

#include "scour/data.hpp"
#include "scour/swarm.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scour {

enum class Feature { Sigma, Froude, DOverY, D50OverY, VOverVc, LOverY };

/// Identifier used in model files, e.g. "d_over_y".
std::string_view feature_id(Feature f);
/// Conventional symbol, e.g. "D/y".
std::string_view feature_symbol(Feature f);
/// Parses an identifier or a symbol; throws ParseError naming unknown ids.
Feature parse_feature(std::string_view text);

/// VOverVc exists only on laboratory records, LOverY only on field records.
bool feature_available(Feature f, Scale scale);

/// Throws MissingInputError when the record's scale lacks the feature.
double feature_value(const DimensionlessRecord& record, Feature f);

/// The five features of the full model form for a scale.
std::vector<Feature> full_feature_set(Scale scale);

struct ModelSpec {
    std::string id;
    Scale scale = Scale::Laboratory;
    std::vector<Feature> features;

    /// Non-empty, duplicate-free, scale-compatible feature list.
    void validate() const;
    bool operator==(const ModelSpec&) const = default;
};

/// L1..L6 and F1..F6, the sensitivity matrix of feature exclusions.
std::span<const std::string_view> builtin_spec_ids(Scale scale);
std::vector<std::string_view> builtin_spec_ids();
bool is_builtin_spec(std::string_view id);
ModelSpec builtin_spec(std::string_view id);
std::vector<ModelSpec> builtin_specs(Scale scale);

/// S/y = a * prod(feature_k ^ exponent_k).
struct PowerLawModel {
    ModelSpec spec;
    double a = 1.0;
    std::vector<double> exponents;
    std::optional<std::uint64_t> fit_seed;
    std::optional<double> fit_rmse;

    void validate() const;
    /// [a, exponents...] in spec feature order.
    std::vector<double> coefficients() const;
    static PowerLawModel from_coefficients(ModelSpec spec, std::span<const double> coefficients);

    bool operator==(const PowerLawModel&) const = default;
};

double predict(const PowerLawModel& model, const DimensionlessRecord& record);

/// Search box for [a, exponents...].
struct CoefficientBounds {
    double a_lower = 1e-6;
    double a_upper = 10.0;
    double exponent_lower = -3.0;
    double exponent_upper = 3.0;

    SearchBounds for_spec(const ModelSpec& spec) const;
    bool operator==(const CoefficientBounds&) const = default;
};

/// RMSE of predicted vs measured S/y over `training`, as a function of [a, exponents...].
/// Non-finite predictions evaluate to +inf. The returned objective owns its data.
Objective rmse_objective(const ModelSpec& spec, std::span<const DimensionlessRecord> training);

struct FitResult {
    PowerLawModel model;
    OptimizationResult optimization;
};

/// Throws NumericalError when an active feature is constant over a training set of
/// two or more records, since its exponent cannot be separated from `a`.
FitResult fit(const ModelSpec& spec, std::span<const DimensionlessRecord> training,
              const SwarmConfig& swarm, const CoefficientBounds& bounds = {});

void write_model(std::ostream& out, const PowerLawModel& model);
PowerLawModel read_model(std::istream& in);
void save_model(const std::filesystem::path& path, const PowerLawModel& model);
PowerLawModel load_model(const std::filesystem::path& path);

} // namespace scour
