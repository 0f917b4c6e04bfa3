#include "scour/workbench.hpp"

#include "parallel.hpp"
#include "scour/error.hpp"

#include <algorithm>
#include <exception>
#include <numeric>

namespace scour {

namespace {

TraceSummary summarize_trace(const OptimizationResult& opt) {
    TraceSummary t;
    t.iterations = opt.trace.size();
    t.evaluations = opt.evaluations;
    t.initial_best = opt.trace.empty() ? opt.best_value : opt.trace.front();
    t.final_best = opt.best_value;
    return t;
}

void require_scale(std::span<const RawScourRecord> records, Scale scale, const char* what) {
    for (const auto& r : records)
        if (r.scale != scale)
            throw ValidationError(std::string(what) + ": record " + std::to_string(r.id) +
                                  " is not a " + std::string(to_string(scale)) + " record");
}

std::vector<TestPair> baseline_pairs(BaselineId id, std::span<const RawScourRecord> records,
                                     const BaselineOptions& options, std::size_t& skipped,
                                     std::size_t& clamped) {
    std::vector<TestPair> out;
    for (const auto& r : records) {
        if (!baseline_applicable(id, r)) {
            ++skipped;
            continue;
        }
        const auto p = evaluate_baseline(id, r, options);
        if (p.clamped) ++clamped;
        out.push_back({r.id, r.scour_depth / r.flow_depth, p.s_over_y, r.flow_depth});
    }
    return out;
}

} // namespace

std::vector<PredictionPair> to_prediction_pairs(std::span<const TestPair> pairs, MetricUnits units) {
    std::vector<PredictionPair> out;
    out.reserve(pairs.size());
    const bool meters = units == MetricUnits::Meters;
    for (const auto& p : pairs)
        out.push_back({meters ? p.measured * p.flow_depth : p.measured,
                       meters ? p.predicted * p.flow_depth : p.predicted});
    return out;
}

std::vector<TestPair> predict_pairs(const PowerLawModel& model,
                                    std::span<const RawScourRecord> records) {
    std::vector<TestPair> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        const auto f = derive_features(r);
        out.push_back({r.id, f.target, predict(model, f), r.flow_depth});
    }
    return out;
}

EvaluationReport fit_and_evaluate(const ModelSpec& spec, const DatasetSplit& split,
                                  const WorkbenchOptions& options) {
    const auto training = derive_features(split.training);
    auto fitted = fit(spec, training, options.swarm, options.bounds);

    EvaluationReport rep;
    rep.model_id = spec.id;
    rep.kind = ModelKind::Fitted;
    const auto train_pairs = predict_pairs(fitted.model, split.training);
    rep.train = compute_metrics(to_prediction_pairs(train_pairs, options.units), options.units);
    rep.test_pairs = predict_pairs(fitted.model, split.testing);
    rep.test = compute_metrics(to_prediction_pairs(rep.test_pairs, options.units), options.units);
    rep.trace = summarize_trace(fitted.optimization);
    rep.model = std::move(fitted.model);
    return rep;
}

std::vector<EvaluationReport> fit_specs(std::span<const ModelSpec> specs, const DatasetSplit& split,
                                        const WorkbenchOptions& options) {
    WorkbenchOptions per_fit = options;
    if (specs.size() > 1) per_fit.swarm.workers = 1;
    std::vector<std::optional<EvaluationReport>> slots(specs.size());
    std::vector<std::exception_ptr> errors(specs.size());
    detail::parallel_for(specs.size(), options.workers, [&](std::size_t i) {
        try {
            slots[i] = fit_and_evaluate(specs[i], split, per_fit);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    });
    std::vector<EvaluationReport> out;
    out.reserve(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        out.push_back(std::move(*slots[i]));
    }
    return out;
}

EvaluationReport evaluate_model(const PowerLawModel& model, const DatasetSplit& split,
                                MetricUnits units) {
    EvaluationReport rep;
    rep.model_id = model.spec.id;
    rep.kind = ModelKind::Fitted;
    rep.model = model;
    rep.test_pairs = predict_pairs(model, split.testing);
    rep.test = compute_metrics(to_prediction_pairs(rep.test_pairs, units), units);
    return rep;
}

std::optional<EvaluationReport> evaluate_baseline_report(BaselineId id, const DatasetSplit& split,
                                                         const WorkbenchOptions& options) {
    EvaluationReport rep;
    rep.model_id = std::string(baseline_info(id).key);
    rep.kind = ModelKind::Baseline;

    std::size_t train_skipped = 0, train_clamped = 0;
    const auto train_pairs =
        baseline_pairs(id, split.training, options.baseline, train_skipped, train_clamped);
    rep.test_pairs = baseline_pairs(id, split.testing, options.baseline, rep.skipped, rep.clamped);
    if (rep.test_pairs.empty()) return std::nullopt;

    if (!train_pairs.empty())
        rep.train = compute_metrics(to_prediction_pairs(train_pairs, options.units), options.units);
    rep.test = compute_metrics(to_prediction_pairs(rep.test_pairs, options.units), options.units);
    return rep;
}

std::vector<std::string> rank_by_test_rmse(std::span<const EvaluationReport> reports) {
    std::vector<std::size_t> order(reports.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return reports[a].test.rmse < reports[b].test.rmse;
    });
    std::vector<std::string> out;
    out.reserve(order.size());
    for (auto i : order) out.push_back(reports[i].model_id);
    return out;
}

std::optional<Feature> excluded_feature(const ModelSpec& spec) {
    const auto full = full_feature_set(spec.scale);
    if (spec.features.size() + 1 != full.size()) return std::nullopt;
    std::optional<Feature> missing;
    for (Feature f : full) {
        if (std::find(spec.features.begin(), spec.features.end(), f) != spec.features.end()) continue;
        if (missing) return std::nullopt;
        missing = f;
    }
    return missing;
}

SensitivityRun run_sensitivity(std::span<const RawScourRecord> records, Scale scale,
                               std::span<const ModelSpec> specs, const WorkbenchOptions& options) {
    if (records.size() < 10)
        throw ValidationError("sensitivity: need at least 10 records, got " +
                              std::to_string(records.size()));
    if (specs.empty()) throw ConfigError("sensitivity: empty spec list");
    require_scale(records, scale, "sensitivity");
    for (const auto& s : specs) {
        s.validate();
        if (s.scale != scale)
            throw ConfigError("sensitivity: spec '" + s.id + "' is not a " +
                              std::string(to_string(scale)) + " spec");
    }

    SensitivityRun run;
    run.scale = scale;
    run.options = options;
    run.split = split(records, options.split_ratio, options.split_seed);
    for (const auto& s : specs) run.spec_ids.push_back(s.id);

    WorkbenchOptions per_fit = options;
    if (specs.size() > 1) per_fit.swarm.workers = 1;

    std::vector<std::optional<EvaluationReport>> slots(specs.size());
    std::vector<std::string> errors(specs.size());
    detail::parallel_for(specs.size(), options.workers, [&](std::size_t i) {
        try {
            slots[i] = fit_and_evaluate(specs[i], run.split, per_fit);
        } catch (const Error& e) {
            errors[i] = e.what();
        }
    });

    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (slots[i])
            run.reports.push_back(std::move(*slots[i]));
        else
            run.failures.push_back({specs[i].id, errors[i]});
    }
    if (run.reports.empty()) {
        std::string msg = "sensitivity: every spec failed";
        for (const auto& f : run.failures) msg += "; " + f.spec_id + ": " + f.message;
        throw NumericalError(msg);
    }

    run.ranking = rank_by_test_rmse(run.reports);

    std::size_t candidates = 0;
    double worst = -1.0;
    for (const auto& rep : run.reports) {
        const auto excluded = excluded_feature(rep.model->spec);
        if (!excluded) continue;
        ++candidates;
        if (rep.test.rmse > worst) {
            worst = rep.test.rmse;
            run.most_effective_feature = excluded;
        }
    }
    if (candidates < 2) run.most_effective_feature.reset();
    return run;
}

SensitivityRun run_sensitivity(std::span<const RawScourRecord> records, Scale scale,
                               const WorkbenchOptions& options) {
    const auto specs = builtin_specs(scale);
    return run_sensitivity(records, scale, specs, options);
}

std::vector<SensitivityRun> run_sensitivity_repeated(std::span<const RawScourRecord> records,
                                                     Scale scale, std::span<const ModelSpec> specs,
                                                     const WorkbenchOptions& options,
                                                     std::size_t repeats) {
    if (repeats == 0) throw ConfigError("sensitivity: repeats must be at least 1");
    std::vector<SensitivityRun> runs;
    runs.reserve(repeats);
    for (std::size_t k = 0; k < repeats; ++k) {
        WorkbenchOptions o = options;
        o.split_seed = options.split_seed + k;
        runs.push_back(run_sensitivity(records, scale, specs, o));
    }
    return runs;
}

ComparisonTable run_comparison(Scale scale, std::span<const PowerLawModel> models,
                               std::span<const BaselineId> baselines, const DatasetSplit& split,
                               const WorkbenchOptions& options) {
    if (split.testing.empty()) throw ConfigError("comparison: empty testing set");
    require_scale(split.training, scale, "comparison");
    require_scale(split.testing, scale, "comparison");

    ComparisonTable table;
    table.scale = scale;
    table.split = split;
    table.options = options;

    for (const auto& m : models) {
        m.validate();
        const auto unavailable =
            std::find_if(m.spec.features.begin(), m.spec.features.end(),
                         [&](Feature f) { return !feature_available(f, scale); });
        if (unavailable != m.spec.features.end()) {
            table.notes.push_back("refused " + m.spec.id + ": feature " +
                                  std::string(feature_symbol(*unavailable)) + " does not exist on " +
                                  std::string(to_string(scale)) + " records");
            continue;
        }
        table.rows.push_back(evaluate_model(m, split, options.units));
    }
    for (BaselineId id : baselines) {
        auto rep = evaluate_baseline_report(id, split, options);
        const auto& info = baseline_info(id);
        if (!rep) {
            table.notes.push_back("skipped " + std::string(info.key) +
                                  ": no testing record provides its inputs");
            continue;
        }
        if (rep->skipped > 0)
            table.notes.push_back(std::string(info.key) + ": " + std::to_string(rep->skipped) +
                                  " testing records lack inputs");
        if (rep->clamped > 0)
            table.notes.push_back(std::string(info.key) + ": " + std::to_string(rep->clamped) +
                                  " predictions clamped to 0 below the live-bed threshold");
        table.rows.push_back(std::move(*rep));
    }
    return table;
}

RunSettings settings_of(Scale scale, const WorkbenchOptions& options) {
    RunSettings s;
    s.scale = scale;
    s.swarm = options.swarm;
    s.swarm.workers = 1;
    s.bounds = options.bounds;
    s.split_ratio = options.split_ratio;
    s.split_seed = options.split_seed;
    s.units = options.units;
    s.hancu_squared = options.baseline.hancu_squared;
    return s;
}

SensitivityReport make_report(const SensitivityRun& run) {
    SensitivityReport r;
    r.settings = settings_of(run.scale, run.options);
    r.spec_ids = run.spec_ids;
    for (const auto& rec : run.split.training) r.training_ids.push_back(rec.id);
    for (const auto& rec : run.split.testing) r.testing_ids.push_back(rec.id);
    r.reports = run.reports;
    r.failures = run.failures;
    r.ranking = run.ranking;
    r.most_effective_feature = run.most_effective_feature;
    return r;
}

ComparisonReport make_report(const ComparisonTable& table) {
    ComparisonReport r;
    r.settings = settings_of(table.scale, table.options);
    for (const auto& rec : table.split.testing) r.testing_ids.push_back(rec.id);
    r.rows = table.rows;
    r.ranking = rank_by_test_rmse(table.rows);
    r.notes = table.notes;
    return r;
}

} // namespace scour
