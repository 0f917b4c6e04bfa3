#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

namespace scour {

/// Box constraints of the search space, one interval per dimension.
struct SearchBounds {
    std::vector<double> lower;
    std::vector<double> upper;

    SearchBounds() = default;
    SearchBounds(std::vector<double> lo, std::vector<double> hi);

    /// Same interval repeated over `dimension` dimensions.
    static SearchBounds uniform(std::size_t dimension, double lo, double hi);

    std::size_t dimension() const noexcept { return lower.size(); }
    double range(std::size_t d) const { return upper[d] - lower[d]; }
    bool contains(std::span<const double> x) const;

    /// Throws ConfigError unless lower < upper everywhere and dimension >= 1.
    void validate() const;
};

struct SwarmConfig {
    std::size_t particle_count = 50;
    std::size_t iteration_count = 500;
    double inertia_weight = 0.7;
    double cognitive_coeff = 1.5;
    double social_coeff = 1.5;
    std::uint64_t seed = 42;
    double velocity_cap_fraction = 0.2;
    /// Objective evaluations per iteration are spread over this many threads.
    /// Results do not depend on it.
    unsigned workers = 1;

    void validate() const;
    bool operator==(const SwarmConfig&) const = default;
};

struct Particle {
    std::vector<double> position;
    std::vector<double> velocity;
    std::vector<double> best_position;
    double best_value = 0.0;
    double value = 0.0; // objective at `position`
};

struct SwarmState {
    std::vector<Particle> particles;
    /// One generator per particle; see `particle_stream`.
    std::vector<std::mt19937_64> streams;
    std::vector<double> best_position;
    double best_value = 0.0;
    std::vector<double> trace;
    std::size_t evaluations = 0;
};

struct OptimizationResult {
    std::vector<double> best_position;
    double best_value = 0.0;
    std::vector<double> trace;
    std::size_t evaluations = 0;

    bool operator==(const OptimizationResult&) const = default;
};

/// Must be pure and callable from several threads at once.
using Objective = std::function<double(std::span<const double>)>;

/// Sub-stream for particle `index`: splitmix64 of (seed + (index + 1) * golden gamma)
/// seeds an mt19937_64. Particle order and thread count never touch the draws.
std::mt19937_64 particle_stream(std::uint64_t seed, std::size_t index);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double unit_uniform(std::mt19937_64& rng);

SwarmState initialize_swarm(const Objective& objective, const SearchBounds& bounds,
                            const SwarmConfig& config);

/// One synchronous PSO iteration: every particle moves against the global best of
/// the previous iteration, then personal and global bests are reduced in particle order.
void step(SwarmState& state, const Objective& objective, const SearchBounds& bounds,
          const SwarmConfig& config);

OptimizationResult optimize(const Objective& objective, const SearchBounds& bounds,
                            const SwarmConfig& config);

/// `iteration,best_value` lines, header included.
void write_trace_csv(std::ostream& out, const OptimizationResult& result);

} // namespace scour
