#include "scour/power_law.hpp"

#include "json_io.hpp"
#include "scour/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <memory>

namespace scour {

namespace {

using detail::Json;

struct FeatureInfo {
    Feature feature;
    std::string_view id;
    std::string_view symbol;
};

constexpr std::array<FeatureInfo, 6> kFeatures{{
    {Feature::Sigma, "sigma", "sigma"},
    {Feature::Froude, "froude", "Fr"},
    {Feature::DOverY, "d_over_y", "D/y"},
    {Feature::D50OverY, "d50_over_y", "d50/y"},
    {Feature::VOverVc, "v_over_vc", "V/Vc"},
    {Feature::LOverY, "l_over_y", "L/y"},
}};

constexpr std::array<std::string_view, 6> kLabIds{"L1", "L2", "L3", "L4", "L5", "L6"};
constexpr std::array<std::string_view, 6> kFieldIds{"F1", "F2", "F3", "F4", "F5", "F6"};

using F = Feature;

ModelSpec make_builtin(std::string_view id) {
    if (id == "L1") return {"L1", Scale::Laboratory, {F::Sigma, F::Froude, F::DOverY, F::D50OverY, F::VOverVc}};
    if (id == "L2") return {"L2", Scale::Laboratory, {F::Froude, F::DOverY, F::D50OverY, F::VOverVc}};
    if (id == "L3") return {"L3", Scale::Laboratory, {F::Sigma, F::DOverY, F::D50OverY, F::VOverVc}};
    if (id == "L4") return {"L4", Scale::Laboratory, {F::Sigma, F::Froude, F::D50OverY, F::VOverVc}};
    if (id == "L5") return {"L5", Scale::Laboratory, {F::Sigma, F::Froude, F::DOverY, F::VOverVc}};
    if (id == "L6") return {"L6", Scale::Laboratory, {F::Sigma, F::Froude, F::DOverY, F::D50OverY}};
    if (id == "F1") return {"F1", Scale::Field, {F::Sigma, F::Froude, F::DOverY, F::D50OverY, F::LOverY}};
    if (id == "F2") return {"F2", Scale::Field, {F::Froude, F::DOverY, F::D50OverY, F::LOverY}};
    if (id == "F3") return {"F3", Scale::Field, {F::Sigma, F::Froude, F::DOverY, F::D50OverY}};
    if (id == "F4") return {"F4", Scale::Field, {F::Sigma, F::Froude, F::D50OverY, F::LOverY}};
    if (id == "F5") return {"F5", Scale::Field, {F::Sigma, F::Froude, F::DOverY, F::LOverY}};
    if (id == "F6") return {"F6", Scale::Field, {F::Sigma, F::DOverY, F::D50OverY, F::LOverY}};
    std::string valid;
    for (auto v : builtin_spec_ids()) valid += (valid.empty() ? "" : ", ") + std::string(v);
    throw ConfigError("unknown spec id '" + std::string(id) + "'; valid ids: " + valid);
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

template <typename T>
T required(const Json& j, const char* key, const std::string& what) {
    if (!j.contains(key)) throw ParseError(what + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ParseError(what + ": field '" + key + "' has the wrong type");
    }
}

} // namespace

std::string_view feature_id(Feature f) {
    return kFeatures[static_cast<std::size_t>(f)].id;
}

std::string_view feature_symbol(Feature f) {
    return kFeatures[static_cast<std::size_t>(f)].symbol;
}

Feature parse_feature(std::string_view text) {
    for (const auto& info : kFeatures)
        if (text == info.id || text == info.symbol) return info.feature;
    throw ParseError("unknown feature id '" + std::string(text) + "'");
}

bool feature_available(Feature f, Scale scale) {
    if (f == Feature::VOverVc) return scale == Scale::Laboratory;
    if (f == Feature::LOverY) return scale == Scale::Field;
    return true;
}

double feature_value(const DimensionlessRecord& record, Feature f) {
    switch (f) {
    case Feature::Sigma: return record.gradation;
    case Feature::Froude: return record.froude;
    case Feature::DOverY: return record.width_ratio;
    case Feature::D50OverY: return record.grain_ratio;
    case Feature::VOverVc:
    case Feature::LOverY:
        if (!feature_available(f, record.scale))
            throw MissingInputError("feature " + std::string(feature_symbol(f)) +
                                    " is not available on " + std::string(to_string(record.scale)) +
                                    " records");
        return record.fifth_feature;
    }
    throw MissingInputError("unknown feature");
}

std::vector<Feature> full_feature_set(Scale scale) {
    return {Feature::Sigma, Feature::Froude, Feature::DOverY, Feature::D50OverY,
            scale == Scale::Laboratory ? Feature::VOverVc : Feature::LOverY};
}

void ModelSpec::validate() const {
    if (features.empty()) throw ConfigError("model spec '" + id + "': no active features");
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (!feature_available(features[i], scale))
            throw ConfigError("model spec '" + id + "': feature " +
                              std::string(feature_symbol(features[i])) + " is not valid for " +
                              std::string(to_string(scale)) + " scale");
        for (std::size_t j = 0; j < i; ++j)
            if (features[i] == features[j])
                throw ConfigError("model spec '" + id + "': duplicate feature " +
                                  std::string(feature_symbol(features[i])));
    }
}

std::span<const std::string_view> builtin_spec_ids(Scale scale) {
    return scale == Scale::Laboratory ? std::span<const std::string_view>(kLabIds)
                                      : std::span<const std::string_view>(kFieldIds);
}

std::vector<std::string_view> builtin_spec_ids() {
    std::vector<std::string_view> out(kLabIds.begin(), kLabIds.end());
    out.insert(out.end(), kFieldIds.begin(), kFieldIds.end());
    return out;
}

bool is_builtin_spec(std::string_view id) {
    return std::find(kLabIds.begin(), kLabIds.end(), id) != kLabIds.end() ||
           std::find(kFieldIds.begin(), kFieldIds.end(), id) != kFieldIds.end();
}

ModelSpec builtin_spec(std::string_view id) { return make_builtin(id); }

std::vector<ModelSpec> builtin_specs(Scale scale) {
    std::vector<ModelSpec> out;
    for (auto id : builtin_spec_ids(scale)) out.push_back(make_builtin(id));
    return out;
}

void PowerLawModel::validate() const {
    spec.validate();
    if (!(a > 0.0) || !std::isfinite(a))
        throw ValidationError("model '" + spec.id + "': constant a must be finite and > 0");
    if (exponents.size() != spec.features.size())
        throw ValidationError("model '" + spec.id + "': expected " +
                              std::to_string(spec.features.size()) + " exponents, got " +
                              std::to_string(exponents.size()));
    for (double e : exponents)
        if (!std::isfinite(e))
            throw ValidationError("model '" + spec.id + "': exponents must be finite");
}

std::vector<double> PowerLawModel::coefficients() const {
    std::vector<double> out;
    out.reserve(exponents.size() + 1);
    out.push_back(a);
    out.insert(out.end(), exponents.begin(), exponents.end());
    return out;
}

PowerLawModel PowerLawModel::from_coefficients(ModelSpec spec, std::span<const double> coefficients) {
    if (coefficients.size() != spec.features.size() + 1)
        throw ConfigError("coefficient vector has wrong length for spec '" + spec.id + "'");
    PowerLawModel m;
    m.spec = std::move(spec);
    m.a = coefficients[0];
    m.exponents.assign(coefficients.begin() + 1, coefficients.end());
    return m;
}

double predict(const PowerLawModel& model, const DimensionlessRecord& record) {
    double value = model.a;
    for (std::size_t k = 0; k < model.spec.features.size(); ++k) {
        const double x = feature_value(record, model.spec.features[k]);
        if (!(x > 0.0))
            throw ValidationError("feature " + std::string(feature_symbol(model.spec.features[k])) +
                                  " must be positive for prediction");
        value *= std::pow(x, model.exponents[k]);
    }
    return value;
}

SearchBounds CoefficientBounds::for_spec(const ModelSpec& spec) const {
    SearchBounds b;
    b.lower.push_back(a_lower);
    b.upper.push_back(a_upper);
    for (std::size_t k = 0; k < spec.features.size(); ++k) {
        b.lower.push_back(exponent_lower);
        b.upper.push_back(exponent_upper);
    }
    return b;
}

Objective rmse_objective(const ModelSpec& spec, std::span<const DimensionlessRecord> training) {
    spec.validate();
    if (training.empty()) throw ConfigError("rmse objective: empty training set");

    // Row-major log-features; prediction = a * exp(sum e_k * log x_k).
    struct Data {
        std::size_t width = 0;
        std::vector<double> log_features;
        std::vector<double> targets;
    };
    auto data = std::make_shared<Data>();
    data->width = spec.features.size();
    data->log_features.reserve(training.size() * data->width);
    data->targets.reserve(training.size());
    for (const auto& r : training) {
        for (Feature f : spec.features) {
            const double x = feature_value(r, f);
            if (!(x > 0.0))
                throw ValidationError("feature " + std::string(feature_symbol(f)) +
                                      " must be positive in training record " +
                                      std::to_string(r.id));
            data->log_features.push_back(std::log(x));
        }
        data->targets.push_back(r.target);
    }

    return [data](std::span<const double> c) -> double {
        const std::size_t w = data->width;
        if (c.size() != w + 1) return std::numeric_limits<double>::infinity();
        const double a = c[0];
        double sse = 0.0;
        const double* row = data->log_features.data();
        for (std::size_t i = 0; i < data->targets.size(); ++i, row += w) {
            double s = 0.0;
            for (std::size_t k = 0; k < w; ++k) s += c[k + 1] * row[k];
            const double err = data->targets[i] - a * std::exp(s);
            sse += err * err;
        }
        const double rmse = std::sqrt(sse / static_cast<double>(data->targets.size()));
        return std::isfinite(rmse) ? rmse : std::numeric_limits<double>::infinity();
    };
}

FitResult fit(const ModelSpec& spec, std::span<const DimensionlessRecord> training,
              const SwarmConfig& swarm, const CoefficientBounds& bounds) {
    auto objective = rmse_objective(spec, training);
    if (training.size() >= 2) {
        for (Feature f : spec.features) {
            const double first = feature_value(training.front(), f);
            const bool constant = std::all_of(training.begin(), training.end(), [&](const auto& r) {
                return feature_value(r, f) == first;
            });
            if (constant)
                throw NumericalError("spec '" + spec.id + "': feature " +
                                     std::string(feature_symbol(f)) +
                                     " is constant over the training set; its exponent is not identifiable");
        }
    }
    FitResult result;
    result.optimization = optimize(objective, bounds.for_spec(spec), swarm);
    result.model = PowerLawModel::from_coefficients(spec, result.optimization.best_position);
    result.model.fit_seed = swarm.seed;
    result.model.fit_rmse = result.optimization.best_value;
    return result;
}

namespace detail {

Json model_to_json(const PowerLawModel& model) {
    model.validate();
    Json j;
    j["spec_id"] = model.spec.id;
    j["scale"] = std::string(to_string(model.spec.scale));
    Json features = Json::array();
    for (Feature f : model.spec.features) features.push_back(std::string(feature_id(f)));
    j["features"] = std::move(features);
    j["a"] = model.a;
    j["exponents"] = model.exponents;
    j["fit_seed"] = model.fit_seed ? Json(*model.fit_seed) : Json(nullptr);
    j["fit_rmse"] = model.fit_rmse ? Json(*model.fit_rmse) : Json(nullptr);
    return j;
}

PowerLawModel model_from_json(const Json& j, const std::string& what) {
    if (!j.is_object()) throw ParseError(what + ": model must be an object");
    PowerLawModel m;
    m.spec.id = required<std::string>(j, "spec_id", what);
    try {
        m.spec.scale = parse_scale(required<std::string>(j, "scale", what));
    } catch (const ConfigError& e) {
        throw ParseError(what + ": " + e.what());
    }
    for (const auto& name : required<std::vector<std::string>>(j, "features", what)) {
        try {
            m.spec.features.push_back(parse_feature(name));
        } catch (const ParseError& e) {
            throw ParseError(what + ": " + e.what());
        }
    }
    m.a = required<double>(j, "a", what);
    m.exponents = required<std::vector<double>>(j, "exponents", what);
    if (j.contains("fit_seed") && !j["fit_seed"].is_null())
        m.fit_seed = required<std::uint64_t>(j, "fit_seed", what);
    if (j.contains("fit_rmse") && !j["fit_rmse"].is_null())
        m.fit_rmse = required<double>(j, "fit_rmse", what);
    try {
        m.validate();
    } catch (const Error& e) {
        throw ParseError(what + ": " + e.what());
    }
    return m;
}

Json parse_json(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(what + ": syntax error at line " +
                         std::to_string(line_of_offset(text, e.byte)) + " (byte " +
                         std::to_string(e.byte) + ")");
    }
}

} // namespace detail

void write_model(std::ostream& out, const PowerLawModel& model) {
    out << detail::model_to_json(model).dump(2) << '\n';
}

PowerLawModel read_model(std::istream& in) {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return detail::model_from_json(detail::parse_json(text, "model file"), "model file");
}

void save_model(const std::filesystem::path& path, const PowerLawModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write model file '" + path.string() + "'");
    write_model(out, model);
    if (!out) throw Error("failed writing model file '" + path.string() + "'");
}

PowerLawModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open model file '" + path.string() + "'");
    return read_model(in);
}

} // namespace scour
