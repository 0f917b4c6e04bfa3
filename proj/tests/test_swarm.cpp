#include "scour/error.hpp"
#include "scour/swarm.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace scour;

namespace {

double sphere(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

double rastrigin(std::span<const double> x) {
    double s = 10.0 * static_cast<double>(x.size());
    for (double v : x) s += v * v - 10.0 * std::cos(2.0 * M_PI * v);
    return s;
}

} // namespace

TEST_CASE("bounds and config validation") {
    CHECK_THROWS_AS(SearchBounds({0.0}, {0.0}).validate(), ConfigError);
    CHECK_THROWS_AS(SearchBounds({}, {}).validate(), ConfigError);
    CHECK_THROWS_AS(SearchBounds({1.0, 0.0}, {2.0}).validate(), ConfigError);
    CHECK_NOTHROW(SearchBounds::uniform(3, -1.0, 1.0).validate());

    SwarmConfig c;
    c.particle_count = 1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.iteration_count = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.velocity_cap_fraction = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.velocity_cap_fraction = 1.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.inertia_weight = -0.1;
    CHECK_THROWS_AS(c.validate(), ConfigError);

    Objective f = sphere;
    SwarmConfig ok;
    CHECK_THROWS_AS(initialize_swarm(f, SearchBounds({1.0}, {1.0}), ok), ConfigError);
}

TEST_CASE("initialization draws inside the box") {
    SUBCASE("1-D, two particles") {
        SwarmConfig c;
        c.particle_count = 2;
        auto f = [](std::span<const double> x) { return (x[0] - 3.0) * (x[0] - 3.0); };
        const auto b = SearchBounds::uniform(1, 0.0, 10.0);
        const auto s = initialize_swarm(f, b, c);
        REQUIRE(s.particles.size() == 2);
        for (const auto& p : s.particles) {
            CHECK(p.position[0] >= 0.0);
            CHECK(p.position[0] <= 10.0);
            CHECK(p.best_value == f(p.position));
            CHECK(std::abs(p.velocity[0]) <= 0.2 * 10.0);
        }
        CHECK(s.best_value == std::min(s.particles[0].value, s.particles[1].value));
        CHECK(s.evaluations == 2);
    }
    SUBCASE("5-D, fifty particles") {
        SwarmConfig c;
        const auto b = SearchBounds::uniform(5, -5.0, 5.0);
        const auto s = initialize_swarm(sphere, b, c);
        CHECK(s.particles.size() == 50);
        for (const auto& p : s.particles) CHECK(b.contains(p.position));
        CHECK(s.trace.empty());
    }
}

TEST_CASE("null update leaves positions fixed") {
    SwarmConfig c;
    c.inertia_weight = 0.0;
    c.cognitive_coeff = 0.0;
    c.social_coeff = 0.0;
    const auto b = SearchBounds::uniform(3, -5.0, 5.0);
    auto s = initialize_swarm(sphere, b, c);
    const auto before = s.particles;
    const double best = s.best_value;
    for (int t = 0; t < 5; ++t) step(s, sphere, b, c);
    for (std::size_t i = 0; i < before.size(); ++i) {
        CHECK(s.particles[i].position == before[i].position);
        for (double v : s.particles[i].velocity) CHECK(v == 0.0);
    }
    REQUIRE(s.trace.size() == 5);
    for (double v : s.trace) CHECK(v == best);
}

TEST_CASE("particle sitting on both bests keeps only inertia") {
    // One particle at the optimum: Ps = G = X, so the attraction terms vanish.
    SwarmConfig c;
    c.particle_count = 2;
    c.velocity_cap_fraction = 1.0;
    const auto b = SearchBounds::uniform(1, -10.0, 10.0);
    auto s = initialize_swarm(sphere, b, c);
    auto& p = s.particles[0];
    p.position = {0.0};
    p.best_position = {0.0};
    p.best_value = 0.0;
    p.velocity = {0.5};
    s.best_position = {0.0};
    s.best_value = 0.0;
    step(s, sphere, b, c);
    CHECK(s.particles[0].velocity[0] == doctest::Approx(c.inertia_weight * 0.5).epsilon(1e-15));
    CHECK(s.particles[0].position[0] == doctest::Approx(0.35).epsilon(1e-15));
}

TEST_CASE("velocity cap and clamp-to-bound") {
    SwarmConfig c;
    c.velocity_cap_fraction = 0.05;
    const auto b = SearchBounds::uniform(2, 0.0, 1.0);
    auto f = [](std::span<const double> x) { return -x[0] - x[1]; }; // optimum in the corner
    auto s = initialize_swarm(f, b, c);
    for (int t = 0; t < 50; ++t) {
        step(s, f, b, c);
        for (const auto& p : s.particles) {
            CHECK(b.contains(p.position));
            for (std::size_t d = 0; d < 2; ++d) {
                CHECK(std::abs(p.velocity[d]) <= 0.05 + 1e-15);
                if (p.position[d] == 1.0 || p.position[d] == 0.0) {
                    // reaching the bound exactly only happens through clamping or a zero-velocity stay
                }
            }
        }
    }
    CHECK(s.best_value == doctest::Approx(-2.0).epsilon(1e-9));
}

TEST_CASE("analytic 1-D optimum is located") {
    SwarmConfig c;
    c.particle_count = 30;
    c.iteration_count = 100;
    auto f = [](std::span<const double> x) { return (x[0] - 3.0) * (x[0] - 3.0); };
    const auto r = optimize(f, SearchBounds::uniform(1, 0.0, 10.0), c);
    CHECK(std::abs(r.best_position[0] - 3.0) < 1e-3);
}

TEST_CASE("optimize bookkeeping") {
    SwarmConfig c;
    c.iteration_count = 1;
    const auto b = SearchBounds::uniform(5, -5.0, 5.0);
    const auto init = initialize_swarm(sphere, b, c);
    const auto r = optimize(sphere, b, c);
    REQUIRE(r.trace.size() == 1);
    CHECK(r.trace[0] <= init.best_value);
    CHECK(r.best_value == r.trace.back());
    CHECK(r.evaluations == c.particle_count * (c.iteration_count + 1));

    c.iteration_count = 200;
    const auto long_run = optimize(sphere, b, c);
    CHECK(long_run.best_value < 1e-3);
    CHECK(long_run.evaluations == 50 * 201);
}

TEST_CASE("determinism across seeds and worker counts") {
    const auto b = SearchBounds::uniform(4, -5.12, 5.12);
    SwarmConfig c;
    c.iteration_count = 60;
    c.seed = 99;
    const auto a = optimize(rastrigin, b, c);
    const auto again = optimize(rastrigin, b, c);
    CHECK(a == again);
    c.workers = 4;
    CHECK(optimize(rastrigin, b, c) == a);
    c.workers = 1;
    c.seed = 100;
    CHECK_FALSE(optimize(rastrigin, b, c) == a);
}

TEST_CASE("particle streams are independent of evaluation order") {
    auto s1 = particle_stream(7, 3);
    auto s2 = particle_stream(7, 3);
    CHECK(s1() == s2());
    auto other = particle_stream(7, 4);
    CHECK_FALSE(particle_stream(7, 3)() == other());
    for (int i = 0; i < 1000; ++i) {
        const double u = unit_uniform(s1);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("non-finite objective values") {
    SwarmConfig c;
    c.iteration_count = 20;
    const auto b = SearchBounds::uniform(2, -5.0, 5.0);
    SUBCASE("partially non-finite values are never adopted") {
        auto f = [](std::span<const double> x) {
            return x[0] > 0.0 ? std::numeric_limits<double>::quiet_NaN() : x[0] * x[0] + x[1] * x[1];
        };
        const auto r = optimize(f, b, c);
        CHECK(std::isfinite(r.best_value));
        CHECK(r.best_position[0] <= 0.0);
    }
    SUBCASE("all non-finite raises") {
        auto f = [](std::span<const double>) { return std::numeric_limits<double>::infinity(); };
        CHECK_THROWS_AS(optimize(f, b, c), NumericalError);
    }
    SUBCASE("an iteration that turns entirely non-finite raises") {
        int calls = 0;
        auto f = [&calls](std::span<const double> x) {
            return ++calls > 50 ? std::numeric_limits<double>::quiet_NaN() : x[0] * x[0];
        };
        CHECK_THROWS_AS(optimize(f, b, c), NumericalError);
    }
}

TEST_CASE("swarm invariants over many random steps") {
    // Monotone trace, containment, and personal-best soundness on a multimodal surface.
    const auto b = SearchBounds({-5.12, -1.0, 0.0}, {5.12, 3.0, 0.5});
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SwarmConfig c;
        c.seed = seed;
        c.particle_count = 20;
        c.inertia_weight = 0.9;
        c.cognitive_coeff = 2.0;
        c.social_coeff = 2.0;
        auto s = initialize_swarm(rastrigin, b, c);
        std::vector<double> lowest(c.particle_count);
        for (std::size_t i = 0; i < c.particle_count; ++i) lowest[i] = s.particles[i].value;
        double prev = s.best_value;
        for (int t = 0; t < 250; ++t) {
            step(s, rastrigin, b, c);
            CHECK(s.trace.back() <= prev);
            prev = s.trace.back();
            for (std::size_t i = 0; i < c.particle_count; ++i) {
                const auto& p = s.particles[i];
                REQUIRE(b.contains(p.position));
                lowest[i] = std::min(lowest[i], p.value);
                CHECK(std::abs(rastrigin(p.best_position) - p.best_value) <= 1e-12);
                CHECK(p.best_value == lowest[i]);
            }
        }
    }
}

TEST_CASE("trace CSV") {
    OptimizationResult r;
    r.trace = {3.0, 2.5, 0.125};
    std::ostringstream out;
    write_trace_csv(out, r);
    CHECK(out.str() == "iteration,best_value\n1,3\n2,2.5\n3,0.125\n");
}
