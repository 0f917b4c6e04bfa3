#pragma once

#include "scour/baselines.hpp"
#include "scour/data.hpp"
#include "scour/metrics.hpp"
#include "scour/power_law.hpp"
#include "scour/swarm.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace scour {

struct WorkbenchOptions {
    SwarmConfig swarm;
    CoefficientBounds bounds;
    double split_ratio = 0.7;
    std::uint64_t split_seed = 42;
    MetricUnits units = MetricUnits::Meters;
    BaselineOptions baseline;
    /// Threads for independent fits. Never changes results.
    unsigned workers = 1;
};

struct TraceSummary {
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    double initial_best = 0.0; // first post-step entry
    double final_best = 0.0;

    bool operator==(const TraceSummary&) const = default;
};

enum class ModelKind { Fitted, Baseline };

struct TestPair {
    std::size_t record_id = 0;
    double measured = 0.0;  // S/y
    double predicted = 0.0; // S/y
    double flow_depth = 0.0;

    bool operator==(const TestPair&) const = default;
};

struct EvaluationReport {
    std::string model_id;
    ModelKind kind = ModelKind::Fitted;
    std::optional<PowerLawModel> model; // fitted or transferred power-law models
    std::optional<MetricReport> train;  // absent when the model was not fitted on this split
    MetricReport test;
    std::vector<TestPair> test_pairs;
    std::optional<TraceSummary> trace;
    std::size_t skipped = 0; // baselines: testing records lacking an input
    std::size_t clamped = 0; // Hancu below its live-bed threshold

    bool operator==(const EvaluationReport&) const = default;
};

/// Metric pairs for a set of test pairs in the requested units (meters multiply by y).
std::vector<PredictionPair> to_prediction_pairs(std::span<const TestPair> pairs, MetricUnits units);

/// Predicts every record of `records` with a power-law model. Throws MissingInputError
/// when the model reads a feature the records' scale does not carry.
std::vector<TestPair> predict_pairs(const PowerLawModel& model,
                                    std::span<const RawScourRecord> records);

/// Fits `spec` on the split's training part and evaluates it on both parts.
EvaluationReport fit_and_evaluate(const ModelSpec& spec, const DatasetSplit& split,
                                  const WorkbenchOptions& options);

/// Fits each spec on one shared split, spreading fits over `options.workers` threads.
/// The first failure in spec order is rethrown.
std::vector<EvaluationReport> fit_specs(std::span<const ModelSpec> specs, const DatasetSplit& split,
                                        const WorkbenchOptions& options);

/// Evaluates an already fitted model on the testing part only.
EvaluationReport evaluate_model(const PowerLawModel& model, const DatasetSplit& split,
                                MetricUnits units);

/// Evaluates a published formula on both parts; records lacking inputs are skipped.
/// Returns nullopt when no testing record can feed the formula.
std::optional<EvaluationReport> evaluate_baseline_report(BaselineId id, const DatasetSplit& split,
                                                         const WorkbenchOptions& options);

struct SpecFailure {
    std::string spec_id;
    std::string message;

    bool operator==(const SpecFailure&) const = default;
};

struct SensitivityRun {
    Scale scale = Scale::Laboratory;
    std::vector<std::string> spec_ids;
    DatasetSplit split;
    std::vector<EvaluationReport> reports; // successful fits, in spec order
    std::vector<SpecFailure> failures;
    std::vector<std::string> ranking; // successful spec ids by test RMSE ascending
    /// Feature whose single-exclusion spec has the worst test RMSE; needs two or more
    /// successful single-exclusion specs.
    std::optional<Feature> most_effective_feature;
    WorkbenchOptions options;
};

/// Single-exclusion specs drop exactly one feature of the full five-feature form.
std::optional<Feature> excluded_feature(const ModelSpec& spec);

SensitivityRun run_sensitivity(std::span<const RawScourRecord> records, Scale scale,
                               std::span<const ModelSpec> specs, const WorkbenchOptions& options);
/// Uses the built-in spec list for the scale.
SensitivityRun run_sensitivity(std::span<const RawScourRecord> records, Scale scale,
                               const WorkbenchOptions& options);

/// Robustness study: one run per split seed options.split_seed, +1, ..., +repeats-1.
std::vector<SensitivityRun> run_sensitivity_repeated(std::span<const RawScourRecord> records,
                                                     Scale scale, std::span<const ModelSpec> specs,
                                                     const WorkbenchOptions& options,
                                                     std::size_t repeats);

struct ComparisonTable {
    Scale scale = Scale::Laboratory;
    DatasetSplit split;
    std::vector<EvaluationReport> rows;
    std::vector<std::string> notes;
    WorkbenchOptions options;
};

/// One row per model and applicable baseline, all on the split's testing part. Models
/// fitted at another scale are transferred verbatim when every feature they read exists
/// on the target records and refused with a note otherwise.
ComparisonTable run_comparison(Scale scale, std::span<const PowerLawModel> models,
                               std::span<const BaselineId> baselines, const DatasetSplit& split,
                               const WorkbenchOptions& options);

/// Rows ordered by test RMSE ascending (stable).
std::vector<std::string> rank_by_test_rmse(std::span<const EvaluationReport> reports);

// ---- report files -------------------------------------------------------------

/// Settings echoed into every report. Worker counts are normalized to 1 and paths are
/// left out so reruns with different parallelism produce identical files.
struct RunSettings {
    Scale scale = Scale::Laboratory;
    SwarmConfig swarm;
    CoefficientBounds bounds;
    double split_ratio = 0.7;
    std::uint64_t split_seed = 0;
    MetricUnits units = MetricUnits::Meters;
    bool hancu_squared = false;

    bool operator==(const RunSettings&) const = default;
};

RunSettings settings_of(Scale scale, const WorkbenchOptions& options);

struct SensitivityReport {
    RunSettings settings;
    std::vector<std::string> spec_ids;
    std::vector<std::size_t> training_ids;
    std::vector<std::size_t> testing_ids;
    std::vector<EvaluationReport> reports;
    std::vector<SpecFailure> failures;
    std::vector<std::string> ranking;
    std::optional<Feature> most_effective_feature;

    bool operator==(const SensitivityReport&) const = default;
};

struct ComparisonReport {
    RunSettings settings;
    std::vector<std::size_t> testing_ids;
    std::vector<EvaluationReport> rows;
    std::vector<std::string> ranking;
    std::vector<std::string> notes;

    bool operator==(const ComparisonReport&) const = default;
};

SensitivityReport make_report(const SensitivityRun& run);
ComparisonReport make_report(const ComparisonTable& table);

void write_report(std::ostream& out, const SensitivityReport& report);
void write_report(std::ostream& out, const ComparisonReport& report);
void write_report(std::ostream& out, const EvaluationReport& report, const RunSettings& settings);
SensitivityReport read_sensitivity_report(std::istream& in);
ComparisonReport read_comparison_report(std::istream& in);

void emit_report(const SensitivityRun& run, const std::filesystem::path& path);
void emit_report(const ComparisonTable& table, const std::filesystem::path& path);

/// `record_id,measured_S_over_y,predicted_S_over_y,model_id`
void write_scatter_data(std::ostream& out, std::span<const EvaluationReport> reports);
/// `model_id,band_m` (or `model_id,band` for dimensionless metrics)
void write_band_table(std::ostream& out, std::span<const EvaluationReport> reports);
/// Test metrics, one row per report.
void write_metrics_table(std::ostream& out, std::span<const EvaluationReport> reports);

/// `split_seed,model_id,rank,test_rmse,most_effective_feature`, one row per run and spec.
void write_robustness_table(std::ostream& out, std::span<const SensitivityRun> runs);

void emit_scatter_data(std::span<const EvaluationReport> reports, const std::filesystem::path& path);
void emit_band_table(std::span<const EvaluationReport> reports, const std::filesystem::path& path);
void emit_metrics_table(std::span<const EvaluationReport> reports, const std::filesystem::path& path);
void emit_robustness_table(std::span<const SensitivityRun> runs, const std::filesystem::path& path);

} // namespace scour
