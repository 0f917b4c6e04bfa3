#include "scour/data.hpp"

#include "scour/error.hpp"
#include "text.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <random>

namespace scour {

namespace {

constexpr std::array<std::string_view, 7> kLabColumns{"D_m", "V_mps", "Vc_mps", "y_m",
                                                      "d50_m", "sigma", "S_m"};
constexpr std::array<std::string_view, 7> kFieldColumns{"D_m", "V_mps", "L_m", "y_m",
                                                        "d50_m", "sigma", "S_m"};

void require_positive(double value, std::string_view field) {
    if (!std::isfinite(value)) throw ValidationError(std::string(field) + " not finite");
    if (!(value > 0.0)) throw ValidationError(std::string(field) + " must be positive");
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(detail::trim(line.substr(start)));
            break;
        }
        out.push_back(detail::trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

// Unbiased draw in [0, bound); std::uniform_int_distribution differs across standard libraries.
std::size_t bounded_draw(std::mt19937_64& rng, std::size_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
}

} // namespace

std::string_view to_string(Scale scale) {
    return scale == Scale::Laboratory ? "lab" : "field";
}

Scale parse_scale(std::string_view text) {
    if (text == "lab" || text == "laboratory") return Scale::Laboratory;
    if (text == "field") return Scale::Field;
    throw ConfigError("unknown scale '" + std::string(text) + "' (expected lab or field)");
}

void validate(const RawScourRecord& raw) {
    require_positive(raw.pier_width, "pier_width");
    require_positive(raw.mean_velocity, "mean_velocity");
    require_positive(raw.flow_depth, "flow_depth");
    require_positive(raw.d50, "d50");
    if (!std::isfinite(raw.gradation)) throw ValidationError("sediment_gradation not finite");
    if (raw.gradation < 1.0) throw ValidationError("sediment_gradation below 1");
    if (!std::isfinite(raw.scour_depth)) throw ValidationError("scour_depth not finite");
    if (raw.scour_depth < 0.0) throw ValidationError("scour_depth negative");
    if (raw.scale == Scale::Laboratory) {
        if (!raw.critical_velocity)
            throw ValidationError("critical_velocity missing for laboratory record");
        require_positive(*raw.critical_velocity, "critical_velocity");
    } else {
        if (!raw.pier_length) throw ValidationError("pier_length missing for field record");
        require_positive(*raw.pier_length, "pier_length");
    }
}

DimensionlessRecord derive_features(const RawScourRecord& raw) {
    validate(raw);
    DimensionlessRecord out;
    out.id = raw.id;
    out.scale = raw.scale;
    out.gradation = raw.gradation;
    out.froude = raw.mean_velocity / std::sqrt(kGravity * raw.flow_depth);
    out.width_ratio = raw.pier_width / raw.flow_depth;
    out.grain_ratio = raw.d50 / raw.flow_depth;
    out.fifth_feature = raw.scale == Scale::Laboratory ? raw.mean_velocity / *raw.critical_velocity
                                                       : *raw.pier_length / raw.flow_depth;
    out.target = raw.scour_depth / raw.flow_depth;
    out.flow_depth = raw.flow_depth;
    return out;
}

std::vector<DimensionlessRecord> derive_features(std::span<const RawScourRecord> raws) {
    std::vector<DimensionlessRecord> out;
    out.reserve(raws.size());
    for (const auto& r : raws) out.push_back(derive_features(r));
    return out;
}

std::span<const std::string_view> csv_columns(Scale scale) {
    return scale == Scale::Laboratory ? std::span<const std::string_view>(kLabColumns)
                                      : std::span<const std::string_view>(kFieldColumns);
}

LoadResult parse_csv(std::istream& in, Scale scale, bool strict) {
    LoadResult result;
    const auto columns = csv_columns(scale);
    std::array<std::size_t, 7> index{};
    std::size_t header_width = 0;
    bool have_header = false;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        const std::string_view text = detail::trim(line);
        if (text.empty() || text.front() == '#') continue;

        const auto fields = split_fields(text);
        if (!have_header) {
            std::map<std::string_view, std::size_t> positions;
            for (std::size_t i = 0; i < fields.size(); ++i) positions.emplace(fields[i], i);
            for (std::size_t c = 0; c < columns.size(); ++c) {
                auto it = positions.find(columns[c]);
                if (it == positions.end())
                    throw SchemaError("missing required column '" + std::string(columns[c]) +
                                      "' for " + std::string(to_string(scale)) + " data");
                index[c] = it->second;
            }
            header_width = fields.size();
            have_header = true;
            continue;
        }

        auto reject = [&](std::string reason) {
            if (strict)
                throw ValidationError("line " + std::to_string(line_no) + ": " + reason);
            result.rejections.push_back({line_no, std::move(reason)});
        };

        if (fields.size() != header_width) {
            reject("expected " + std::to_string(header_width) + " fields, found " +
                   std::to_string(fields.size()));
            continue;
        }

        std::array<double, 7> values{};
        bool ok = true;
        for (std::size_t c = 0; c < columns.size() && ok; ++c) {
            auto v = detail::parse_double(fields[index[c]]);
            if (!v) {
                reject("column " + std::string(columns[c]) + ": non-numeric value '" +
                       std::string(fields[index[c]]) + "'");
                ok = false;
            } else {
                values[c] = *v;
            }
        }
        if (!ok) continue;

        RawScourRecord rec;
        rec.id = result.records.size();
        rec.scale = scale;
        rec.pier_width = values[0];
        rec.mean_velocity = values[1];
        if (scale == Scale::Laboratory)
            rec.critical_velocity = values[2];
        else
            rec.pier_length = values[2];
        rec.flow_depth = values[3];
        rec.d50 = values[4];
        rec.gradation = values[5];
        rec.scour_depth = values[6];
        try {
            validate(rec);
        } catch (const ValidationError& e) {
            reject(e.what());
            continue;
        }
        result.records.push_back(rec);
    }
    if (!have_header) throw SchemaError("no header row found");
    return result;
}

LoadResult load_csv(const std::filesystem::path& path, Scale scale, bool strict) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open data file '" + path.string() + "'");
    return parse_csv(in, scale, strict);
}

void write_csv(std::ostream& out, std::span<const RawScourRecord> records, Scale scale) {
    const auto columns = csv_columns(scale);
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
    out << '\n';
    for (const auto& r : records) {
        if (r.scale != scale) throw ValidationError("write_csv: record scale mismatch");
        const double third = scale == Scale::Laboratory ? r.critical_velocity.value_or(0.0)
                                                        : r.pier_length.value_or(0.0);
        using detail::format_double;
        out << format_double(r.pier_width) << ',' << format_double(r.mean_velocity) << ','
            << format_double(third) << ',' << format_double(r.flow_depth) << ','
            << format_double(r.d50) << ',' << format_double(r.gradation) << ','
            << format_double(r.scour_depth) << '\n';
    }
}

DatasetSplit split(std::span<const RawScourRecord> records, double ratio, std::uint64_t seed) {
    const std::size_t n = records.size();
    if (n < 2) throw ConfigError("split: need at least 2 records, got " + std::to_string(n));
    if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("split: ratio must lie in (0, 1)");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[bounded_draw(rng, i + 1)]);

    // Size the larger part from the larger fraction so r and 1 - r agree on it.
    const bool training_first = ratio >= 0.5;
    const double larger = training_first ? ratio : 1.0 - ratio;
    auto front = static_cast<std::size_t>(std::llround(larger * static_cast<double>(n)));
    front = std::clamp<std::size_t>(front, 1, n - 1);

    DatasetSplit out;
    out.seed = seed;
    out.ratio = ratio;
    auto& front_part = training_first ? out.training : out.testing;
    auto& back_part = training_first ? out.testing : out.training;
    for (std::size_t i = 0; i < n; ++i)
        (i < front ? front_part : back_part).push_back(records[order[i]]);
    return out;
}

VariableSummary summarize(std::string name, std::span<const double> values) {
    if (values.empty()) throw ValidationError("summarize: no values for " + name);
    VariableSummary s;
    s.name = std::move(name);
    s.n = values.size();
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    s.min = *lo;
    s.max = *hi;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
    }
    return s;
}

std::vector<VariableSummary> summarize(std::span<const RawScourRecord> records) {
    if (records.empty()) throw ValidationError("summarize: empty record set");
    const Scale scale = records.front().scale;
    const bool lab = scale == Scale::Laboratory;

    std::vector<std::pair<std::string, std::vector<double>>> columns{
        {"D_m", {}},   {"V_mps", {}}, {lab ? "Vc_mps" : "L_m", {}}, {"y_m", {}},
        {"d50_m", {}}, {"S_m", {}},   {"sigma", {}}, {lab ? "V/Vc" : "L/y", {}},
        {"D/y", {}},   {"d50/y", {}}, {"Fr", {}},    {"S/y", {}}};
    for (const auto& r : records) {
        if (r.scale != scale) throw ValidationError("summarize: mixed laboratory and field records");
        const auto f = derive_features(r);
        const double values[] = {r.pier_width,
                                 r.mean_velocity,
                                 lab ? *r.critical_velocity : *r.pier_length,
                                 r.flow_depth,
                                 r.d50,
                                 r.scour_depth,
                                 r.gradation,
                                 f.fifth_feature,
                                 f.width_ratio,
                                 f.grain_ratio,
                                 f.froude,
                                 f.target};
        for (std::size_t c = 0; c < columns.size(); ++c) columns[c].second.push_back(values[c]);
    }
    std::vector<VariableSummary> out;
    out.reserve(columns.size());
    for (auto& [name, values] : columns) out.push_back(summarize(name, values));
    return out;
}

} // namespace scour
