#include "scour/swarm.hpp"

#include "parallel.hpp"
#include "scour/error.hpp"
#include "text.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace scour {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double sanitize(double v) { return std::isfinite(v) ? v : kInf; }

void evaluate_all(SwarmState& state, const Objective& objective, unsigned workers) {
    detail::parallel_for(state.particles.size(), workers, [&](std::size_t i) {
        auto& p = state.particles[i];
        p.value = sanitize(objective(std::span<const double>(p.position)));
    });
    state.evaluations += state.particles.size();
}

bool all_non_finite(const SwarmState& state) {
    return std::all_of(state.particles.begin(), state.particles.end(),
                       [](const Particle& p) { return !std::isfinite(p.value); });
}

} // namespace

SearchBounds::SearchBounds(std::vector<double> lo, std::vector<double> hi)
    : lower(std::move(lo)), upper(std::move(hi)) {}

SearchBounds SearchBounds::uniform(std::size_t dimension, double lo, double hi) {
    return SearchBounds(std::vector<double>(dimension, lo), std::vector<double>(dimension, hi));
}

bool SearchBounds::contains(std::span<const double> x) const {
    if (x.size() != dimension()) return false;
    for (std::size_t d = 0; d < x.size(); ++d)
        if (!(x[d] >= lower[d] && x[d] <= upper[d])) return false;
    return true;
}

void SearchBounds::validate() const {
    if (lower.empty()) throw ConfigError("search bounds: dimension must be at least 1");
    if (lower.size() != upper.size())
        throw ConfigError("search bounds: lower and upper have different dimension");
    for (std::size_t d = 0; d < lower.size(); ++d) {
        if (!std::isfinite(lower[d]) || !std::isfinite(upper[d]) || !(lower[d] < upper[d]))
            throw ConfigError("search bounds: dimension " + std::to_string(d) +
                              " needs finite lower < upper");
    }
}

void SwarmConfig::validate() const {
    if (particle_count < 2) throw ConfigError("swarm: particle_count must be >= 2");
    if (iteration_count < 1) throw ConfigError("swarm: iteration_count must be >= 1");
    if (!(inertia_weight >= 0.0) || !std::isfinite(inertia_weight))
        throw ConfigError("swarm: inertia weight must be finite and >= 0");
    if (!(cognitive_coeff >= 0.0) || !std::isfinite(cognitive_coeff))
        throw ConfigError("swarm: cognitive coefficient must be finite and >= 0");
    if (!(social_coeff >= 0.0) || !std::isfinite(social_coeff))
        throw ConfigError("swarm: social coefficient must be finite and >= 0");
    if (!(velocity_cap_fraction > 0.0 && velocity_cap_fraction <= 1.0))
        throw ConfigError("swarm: velocity_cap_fraction must lie in (0, 1]");
}

std::mt19937_64 particle_stream(std::uint64_t seed, std::size_t index) {
    constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;
    return std::mt19937_64(splitmix64(seed + (static_cast<std::uint64_t>(index) + 1) * golden));
}

double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

SwarmState initialize_swarm(const Objective& objective, const SearchBounds& bounds,
                            const SwarmConfig& config) {
    bounds.validate();
    config.validate();

    const std::size_t dim = bounds.dimension();
    SwarmState state;
    state.particles.resize(config.particle_count);
    state.streams.reserve(config.particle_count);

    for (std::size_t i = 0; i < config.particle_count; ++i) {
        auto& rng = state.streams.emplace_back(particle_stream(config.seed, i));
        auto& p = state.particles[i];
        p.position.resize(dim);
        p.velocity.resize(dim);
        for (std::size_t d = 0; d < dim; ++d)
            p.position[d] = bounds.lower[d] + unit_uniform(rng) * bounds.range(d);
        for (std::size_t d = 0; d < dim; ++d) {
            const double cap = config.velocity_cap_fraction * bounds.range(d);
            p.velocity[d] = -cap + 2.0 * cap * unit_uniform(rng);
        }
    }

    evaluate_all(state, objective, config.workers);
    if (all_non_finite(state))
        throw NumericalError("swarm: objective is non-finite at every initial particle");

    state.best_value = kInf;
    for (auto& p : state.particles) {
        p.best_position = p.position;
        p.best_value = p.value;
        if (p.value < state.best_value) {
            state.best_value = p.value;
            state.best_position = p.position;
        }
    }
    return state;
}

void step(SwarmState& state, const Objective& objective, const SearchBounds& bounds,
          const SwarmConfig& config) {
    if (state.particles.empty() || state.best_position.empty())
        throw ConfigError("swarm: step called on an uninitialized state");

    const std::size_t dim = bounds.dimension();
    const std::vector<double> global = state.best_position;

    for (std::size_t i = 0; i < state.particles.size(); ++i) {
        auto& p = state.particles[i];
        auto& rng = state.streams[i];
        for (std::size_t d = 0; d < dim; ++d) {
            const double r1 = unit_uniform(rng);
            const double r2 = unit_uniform(rng);
            const double x = p.position[d];
            double v = config.inertia_weight * p.velocity[d] +
                       config.cognitive_coeff * r1 * (p.best_position[d] - x) +
                       config.social_coeff * r2 * (global[d] - x);
            const double cap = config.velocity_cap_fraction * bounds.range(d);
            v = std::clamp(v, -cap, cap);
            double next = x + v;
            if (next < bounds.lower[d]) {
                next = bounds.lower[d];
                v = 0.0;
            } else if (next > bounds.upper[d]) {
                next = bounds.upper[d];
                v = 0.0;
            }
            p.position[d] = next;
            p.velocity[d] = v;
        }
    }

    evaluate_all(state, objective, config.workers);
    if (all_non_finite(state))
        throw NumericalError("swarm: objective is non-finite at every particle of iteration " +
                             std::to_string(state.trace.size() + 1));

    // Strict improvement only: ties keep the incumbent.
    for (auto& p : state.particles) {
        if (p.value < p.best_value) {
            p.best_value = p.value;
            p.best_position = p.position;
        }
        if (p.best_value < state.best_value) {
            state.best_value = p.best_value;
            state.best_position = p.best_position;
        }
    }
    state.trace.push_back(state.best_value);
}

OptimizationResult optimize(const Objective& objective, const SearchBounds& bounds,
                            const SwarmConfig& config) {
    SwarmState state = initialize_swarm(objective, bounds, config);
    state.trace.reserve(config.iteration_count);
    for (std::size_t t = 0; t < config.iteration_count; ++t) step(state, objective, bounds, config);

    OptimizationResult result;
    result.best_position = std::move(state.best_position);
    result.best_value = state.best_value;
    result.trace = std::move(state.trace);
    result.evaluations = state.evaluations;
    return result;
}

void write_trace_csv(std::ostream& out, const OptimizationResult& result) {
    out << "iteration,best_value\n";
    for (std::size_t i = 0; i < result.trace.size(); ++i)
        out << (i + 1) << ',' << detail::format_double(result.trace[i]) << '\n';
}

} // namespace scour
