#pragma once

// Synthetic scour datasets generated from a known power-law model. The generator is
// the oracle for fitting and sensitivity tests.

#include "scour/data.hpp"
#include "scour/power_law.hpp"
#include "scour/swarm.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace scour::testing {

struct Range {
    double lo;
    double hi;
};

/// Min/max of each dimensionless feature in the reference laboratory and field datasets.
struct FeatureRanges {
    Range sigma, froude, d_over_y, d50_over_y, fifth;
    Range flow_depth;
};

inline FeatureRanges lab_ranges() {
    return {{1.1, 5.5}, {0.067, 1.498}, {0.0477, 19.16}, {0.00012, 0.107}, {0.4148, 5.38}, {0.0201, 1.9}};
}

inline FeatureRanges field_ranges() {
    return {{1.2, 20.34}, {0.0269, 1.184}, {0.0722, 50.297}, {4.9e-7, 0.2264}, {0.5142, 81.818},
            {0.1524, 22.524}};
}

inline double draw(std::mt19937_64& rng, Range r) {
    return r.lo + scour::unit_uniform(rng) * (r.hi - r.lo);
}

/// Full five-feature model for a scale with the given constant and exponents.
inline PowerLawModel full_model(Scale scale, double a, std::vector<double> exponents) {
    PowerLawModel m;
    m.spec = {scale == Scale::Laboratory ? "L1" : "F1", scale, full_feature_set(scale)};
    m.a = a;
    m.exponents = std::move(exponents);
    return m;
}

/// Records whose features are uniform within `ranges` and whose scour depth is the
/// generator's prediction times (1 + noise * N(0,1)), floored at zero.
inline std::vector<RawScourRecord> generate(const PowerLawModel& generator, std::size_t n,
                                            std::uint64_t seed, FeatureRanges ranges,
                                            double noise = 0.0) {
    const Scale scale = generator.spec.scale;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<RawScourRecord> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = draw(rng, ranges.flow_depth);
        const double sigma = draw(rng, ranges.sigma);
        const double fr = draw(rng, ranges.froude);
        const double dy = draw(rng, ranges.d_over_y);
        const double d50y = draw(rng, ranges.d50_over_y);
        const double fifth = draw(rng, ranges.fifth);

        RawScourRecord r;
        r.id = i;
        r.scale = scale;
        r.flow_depth = y;
        r.gradation = sigma;
        r.mean_velocity = fr * std::sqrt(kGravity * y);
        r.pier_width = dy * y;
        r.d50 = d50y * y;
        if (scale == Scale::Laboratory)
            r.critical_velocity = r.mean_velocity / fifth;
        else
            r.pier_length = fifth * y;

        double s_over_y = predict(generator, derive_features(r));
        if (noise > 0.0) s_over_y *= 1.0 + noise * gauss(rng);
        r.scour_depth = std::max(0.0, s_over_y * y);
        out.push_back(r);
    }
    return out;
}

} // namespace scour::testing
