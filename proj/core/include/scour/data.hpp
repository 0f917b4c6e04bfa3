#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scour {

/// Standard gravity used for the Froude number and the Hancu formula, m/s^2.
inline constexpr double kGravity = 9.81;

enum class Scale { Laboratory, Field };

std::string_view to_string(Scale scale);
/// Accepts "lab", "laboratory", "field" (case-sensitive lowercase).
Scale parse_scale(std::string_view text);

/// One measured observation in SI units (m, m/s).
struct RawScourRecord {
    std::size_t id = 0; // position in the source collection
    Scale scale = Scale::Laboratory;
    double pier_width = 0.0;     // D
    double mean_velocity = 0.0;  // V
    double flow_depth = 0.0;     // y
    double d50 = 0.0;            // median grain size
    double gradation = 0.0;      // sigma
    double scour_depth = 0.0;    // S
    std::optional<double> critical_velocity; // Vc, laboratory only
    std::optional<double> pier_length;       // L, field only

    bool operator==(const RawScourRecord&) const = default;
};

/// Throws ValidationError naming the first offending field.
void validate(const RawScourRecord& raw);

struct DimensionlessRecord {
    std::size_t id = 0;
    Scale scale = Scale::Laboratory;
    double gradation = 0.0;
    double froude = 0.0;
    double width_ratio = 0.0; // D/y
    double grain_ratio = 0.0; // d50/y
    double fifth_feature = 0.0; // V/Vc (laboratory) or L/y (field)
    double target = 0.0;      // S/y
    double flow_depth = 0.0;  // y, kept to express results in meters

    bool operator==(const DimensionlessRecord&) const = default;
};

DimensionlessRecord derive_features(const RawScourRecord& raw);
std::vector<DimensionlessRecord> derive_features(std::span<const RawScourRecord> raws);

struct RowRejection {
    std::size_t line = 0; // 1-based line number in the file
    std::string reason;
};

struct LoadResult {
    std::vector<RawScourRecord> records;
    std::vector<RowRejection> rejections;

    std::size_t accepted() const noexcept { return records.size(); }
    std::size_t rejected() const noexcept { return rejections.size(); }
};

/// Column names of the CSV schema for a scale, in canonical order.
std::span<const std::string_view> csv_columns(Scale scale);

/// Parses scour CSV text. Missing required columns raise SchemaError. Bad rows are
/// rejected with their line number, or raise ValidationError when `strict` is set.
LoadResult parse_csv(std::istream& in, Scale scale, bool strict = false);
LoadResult load_csv(const std::filesystem::path& path, Scale scale, bool strict = false);

/// Writes records in the canonical schema with shortest round-trip number formatting.
void write_csv(std::ostream& out, std::span<const RawScourRecord> records, Scale scale);

struct DatasetSplit {
    std::vector<RawScourRecord> training;
    std::vector<RawScourRecord> testing;
    std::uint64_t seed = 0;
    double ratio = 0.7;
};

/// Seeded Fisher-Yates shuffle of the input. The larger part gets
/// round(max(ratio, 1 - ratio) * N) records, clamped so both parts are non-empty, and
/// takes the front of the permutation; splits with ratios r and 1 - r on one seed are
/// therefore mirror images.
DatasetSplit split(std::span<const RawScourRecord> records, double ratio, std::uint64_t seed);

struct VariableSummary {
    std::string name;
    std::size_t n = 0;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double std = 0.0; // sample (N - 1); 0 when n == 1
    bool single_sample() const noexcept { return n == 1; }
};

VariableSummary summarize(std::string name, std::span<const double> values);

/// Raw and dimensionless variables in the usual tabulation order.
std::vector<VariableSummary> summarize(std::span<const RawScourRecord> records);

} // namespace scour
