#include "json_io.hpp"
#include "scour/error.hpp"
#include "scour/workbench.hpp"
#include "text.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <ostream>

namespace scour {

namespace {

using detail::Json;

const std::string kWhat = "report";

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> read_optional(const Json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw ParseError(kWhat + ": missing field '" + std::string(key) + "'");
    return j.at(key);
}

Json to_json(const RunSettings& s) {
    Json j;
    j["scale"] = std::string(to_string(s.scale));
    j["swarm"] = {{"particle_count", s.swarm.particle_count},
                  {"iteration_count", s.swarm.iteration_count},
                  {"inertia_weight", s.swarm.inertia_weight},
                  {"cognitive_coeff", s.swarm.cognitive_coeff},
                  {"social_coeff", s.swarm.social_coeff},
                  {"velocity_cap_fraction", s.swarm.velocity_cap_fraction},
                  {"seed", s.swarm.seed}};
    j["bounds"] = {{"a_lower", s.bounds.a_lower},
                   {"a_upper", s.bounds.a_upper},
                   {"exponent_lower", s.bounds.exponent_lower},
                   {"exponent_upper", s.bounds.exponent_upper}};
    j["split"] = {{"ratio", s.split_ratio}, {"seed", s.split_seed}};
    j["metric_units"] = std::string(to_string(s.units));
    j["hancu_squared"] = s.hancu_squared;
    return j;
}

RunSettings settings_from_json(const Json& j) {
    RunSettings s;
    s.scale = parse_scale(field(j, "scale").get<std::string>());
    const auto& sw = field(j, "swarm");
    s.swarm.particle_count = field(sw, "particle_count").get<std::size_t>();
    s.swarm.iteration_count = field(sw, "iteration_count").get<std::size_t>();
    s.swarm.inertia_weight = field(sw, "inertia_weight").get<double>();
    s.swarm.cognitive_coeff = field(sw, "cognitive_coeff").get<double>();
    s.swarm.social_coeff = field(sw, "social_coeff").get<double>();
    s.swarm.velocity_cap_fraction = field(sw, "velocity_cap_fraction").get<double>();
    s.swarm.seed = field(sw, "seed").get<std::uint64_t>();
    const auto& b = field(j, "bounds");
    s.bounds.a_lower = field(b, "a_lower").get<double>();
    s.bounds.a_upper = field(b, "a_upper").get<double>();
    s.bounds.exponent_lower = field(b, "exponent_lower").get<double>();
    s.bounds.exponent_upper = field(b, "exponent_upper").get<double>();
    const auto& sp = field(j, "split");
    s.split_ratio = field(sp, "ratio").get<double>();
    s.split_seed = field(sp, "seed").get<std::uint64_t>();
    s.units = parse_metric_units(field(j, "metric_units").get<std::string>());
    s.hancu_squared = field(j, "hancu_squared").get<bool>();
    return s;
}

Json to_json(const MetricReport& m) {
    return Json{{"n", m.n},
                {"r2", optional_number(m.r2)},
                {"rmse", m.rmse},
                {"bias", m.bias},
                {"mae", m.mae},
                {"se", optional_number(m.se)},
                {"band_width", optional_number(m.band_width)},
                {"units", std::string(to_string(m.units))}};
}

MetricReport metrics_from_json(const Json& j) {
    MetricReport m;
    m.n = field(j, "n").get<std::size_t>();
    m.r2 = read_optional(j, "r2");
    m.rmse = field(j, "rmse").get<double>();
    m.bias = field(j, "bias").get<double>();
    m.mae = field(j, "mae").get<double>();
    m.se = read_optional(j, "se");
    m.band_width = read_optional(j, "band_width");
    m.units = parse_metric_units(field(j, "units").get<std::string>());
    return m;
}

Json to_json(const EvaluationReport& r) {
    Json j;
    j["model_id"] = r.model_id;
    j["kind"] = r.kind == ModelKind::Fitted ? "fitted" : "baseline";
    j["model"] = r.model ? detail::model_to_json(*r.model) : Json(nullptr);
    j["train"] = r.train ? to_json(*r.train) : Json(nullptr);
    j["test"] = to_json(r.test);
    if (r.trace)
        j["trace"] = {{"iterations", r.trace->iterations},
                      {"evaluations", r.trace->evaluations},
                      {"initial_best", r.trace->initial_best},
                      {"final_best", r.trace->final_best}};
    else
        j["trace"] = nullptr;
    j["skipped"] = r.skipped;
    j["clamped"] = r.clamped;
    Json pairs = Json::array();
    for (const auto& p : r.test_pairs)
        pairs.push_back(Json::array({p.record_id, p.measured, p.predicted, p.flow_depth}));
    j["test_pairs"] = std::move(pairs);
    return j;
}

EvaluationReport evaluation_from_json(const Json& j) {
    EvaluationReport r;
    r.model_id = field(j, "model_id").get<std::string>();
    const auto kind = field(j, "kind").get<std::string>();
    if (kind != "fitted" && kind != "baseline")
        throw ParseError(kWhat + ": unknown model kind '" + kind + "'");
    r.kind = kind == "fitted" ? ModelKind::Fitted : ModelKind::Baseline;
    if (!field(j, "model").is_null()) r.model = detail::model_from_json(j.at("model"), kWhat);
    if (!field(j, "train").is_null()) r.train = metrics_from_json(j.at("train"));
    r.test = metrics_from_json(field(j, "test"));
    if (const auto& t = field(j, "trace"); !t.is_null()) {
        TraceSummary s;
        s.iterations = field(t, "iterations").get<std::size_t>();
        s.evaluations = field(t, "evaluations").get<std::size_t>();
        s.initial_best = field(t, "initial_best").get<double>();
        s.final_best = field(t, "final_best").get<double>();
        r.trace = s;
    }
    r.skipped = field(j, "skipped").get<std::size_t>();
    r.clamped = field(j, "clamped").get<std::size_t>();
    for (const auto& p : field(j, "test_pairs")) {
        if (!p.is_array() || p.size() != 4) throw ParseError(kWhat + ": malformed test pair");
        r.test_pairs.push_back({p[0].get<std::size_t>(), p[1].get<double>(), p[2].get<double>(),
                                p[3].get<double>()});
    }
    return r;
}

Json reports_to_json(std::span<const EvaluationReport> reports) {
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    return arr;
}

std::vector<EvaluationReport> reports_from_json(const Json& j) {
    std::vector<EvaluationReport> out;
    for (const auto& r : j) out.push_back(evaluation_from_json(r));
    return out;
}

Json read_document(std::istream& in, const char* expected_kind) {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    Json j = detail::parse_json(text, kWhat);
    if (field(j, "report").get<std::string>() != expected_kind)
        throw ParseError(kWhat + ": expected a " + std::string(expected_kind) + " report");
    return j;
}

template <typename Fn>
auto guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(kWhat + ": " + e.what());
    } catch (const ConfigError& e) {
        throw ParseError(kWhat + ": " + e.what());
    }
}

template <typename Writer>
void emit(const std::filesystem::path& path, Writer&& writer) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    writer(out);
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

MetricUnits units_of(std::span<const EvaluationReport> reports) {
    return reports.empty() ? MetricUnits::Meters : reports.front().test.units;
}

} // namespace

void write_report(std::ostream& out, const SensitivityReport& report) {
    Json j;
    j["report"] = "sensitivity";
    j["settings"] = to_json(report.settings);
    j["spec_ids"] = report.spec_ids;
    j["training_ids"] = report.training_ids;
    j["testing_ids"] = report.testing_ids;
    j["ranking"] = report.ranking;
    j["most_effective_feature"] = report.most_effective_feature
                                      ? Json(std::string(feature_id(*report.most_effective_feature)))
                                      : Json(nullptr);
    Json failures = Json::array();
    for (const auto& f : report.failures)
        failures.push_back({{"spec_id", f.spec_id}, {"message", f.message}});
    j["failures"] = std::move(failures);
    j["models"] = reports_to_json(report.reports);
    out << j.dump(2) << '\n';
}

void write_report(std::ostream& out, const ComparisonReport& report) {
    Json j;
    j["report"] = "comparison";
    j["settings"] = to_json(report.settings);
    j["testing_ids"] = report.testing_ids;
    j["ranking"] = report.ranking;
    j["notes"] = report.notes;
    j["models"] = reports_to_json(report.rows);
    out << j.dump(2) << '\n';
}

void write_report(std::ostream& out, const EvaluationReport& report, const RunSettings& settings) {
    Json j;
    j["report"] = "fit";
    j["settings"] = to_json(settings);
    j["model"] = to_json(report);
    out << j.dump(2) << '\n';
}

SensitivityReport read_sensitivity_report(std::istream& in) {
    const Json j = read_document(in, "sensitivity");
    return guarded([&] {
        SensitivityReport r;
        r.settings = settings_from_json(field(j, "settings"));
        r.spec_ids = field(j, "spec_ids").get<std::vector<std::string>>();
        r.training_ids = field(j, "training_ids").get<std::vector<std::size_t>>();
        r.testing_ids = field(j, "testing_ids").get<std::vector<std::size_t>>();
        r.ranking = field(j, "ranking").get<std::vector<std::string>>();
        if (const auto& f = field(j, "most_effective_feature"); !f.is_null())
            r.most_effective_feature = parse_feature(f.get<std::string>());
        for (const auto& f : field(j, "failures"))
            r.failures.push_back(
                {field(f, "spec_id").get<std::string>(), field(f, "message").get<std::string>()});
        r.reports = reports_from_json(field(j, "models"));
        return r;
    });
}

ComparisonReport read_comparison_report(std::istream& in) {
    const Json j = read_document(in, "comparison");
    return guarded([&] {
        ComparisonReport r;
        r.settings = settings_from_json(field(j, "settings"));
        r.testing_ids = field(j, "testing_ids").get<std::vector<std::size_t>>();
        r.ranking = field(j, "ranking").get<std::vector<std::string>>();
        r.notes = field(j, "notes").get<std::vector<std::string>>();
        r.rows = reports_from_json(field(j, "models"));
        return r;
    });
}

void emit_report(const SensitivityRun& run, const std::filesystem::path& path) {
    emit(path, [&](std::ostream& out) { write_report(out, make_report(run)); });
}

void emit_report(const ComparisonTable& table, const std::filesystem::path& path) {
    emit(path, [&](std::ostream& out) { write_report(out, make_report(table)); });
}

void write_scatter_data(std::ostream& out, std::span<const EvaluationReport> reports) {
    out << "record_id,measured_S_over_y,predicted_S_over_y,model_id\n";
    for (const auto& r : reports)
        for (const auto& p : r.test_pairs)
            out << p.record_id << ',' << detail::format_double(p.measured) << ','
                << detail::format_double(p.predicted) << ',' << r.model_id << '\n';
}

void write_band_table(std::ostream& out, std::span<const EvaluationReport> reports) {
    out << (units_of(reports) == MetricUnits::Meters ? "model_id,band_m\n" : "model_id,band\n");
    for (const auto& r : reports)
        out << r.model_id << ','
            << (r.test.band_width ? detail::format_double(*r.test.band_width) : std::string("NA"))
            << '\n';
}

void write_metrics_table(std::ostream& out, std::span<const EvaluationReport> reports) {
    write_metric_header(out, units_of(reports));
    for (const auto& r : reports) write_metric_row(out, r.model_id, r.test);
}

void write_robustness_table(std::ostream& out, std::span<const SensitivityRun> runs) {
    out << "split_seed,model_id,rank,test_rmse,most_effective_feature\n";
    for (const auto& run : runs) {
        const std::string effective = run.most_effective_feature
                                          ? std::string(feature_id(*run.most_effective_feature))
                                          : std::string("NA");
        for (std::size_t rank = 0; rank < run.ranking.size(); ++rank) {
            const auto& id = run.ranking[rank];
            const auto it = std::find_if(run.reports.begin(), run.reports.end(),
                                         [&](const auto& r) { return r.model_id == id; });
            out << run.options.split_seed << ',' << id << ',' << rank + 1 << ','
                << detail::format_double(it->test.rmse) << ',' << effective << '\n';
        }
    }
}

void emit_scatter_data(std::span<const EvaluationReport> reports, const std::filesystem::path& path) {
    emit(path, [&](std::ostream& out) { write_scatter_data(out, reports); });
}

void emit_band_table(std::span<const EvaluationReport> reports, const std::filesystem::path& path) {
    emit(path, [&](std::ostream& out) { write_band_table(out, reports); });
}

void emit_metrics_table(std::span<const EvaluationReport> reports, const std::filesystem::path& path) {
    emit(path, [&](std::ostream& out) { write_metrics_table(out, reports); });
}

void emit_robustness_table(std::span<const SensitivityRun> runs, const std::filesystem::path& path) {
    emit(path, [&](std::ostream& out) { write_robustness_table(out, runs); });
}

} // namespace scour
