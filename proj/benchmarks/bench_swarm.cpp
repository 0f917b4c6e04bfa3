#include "scour/power_law.hpp"
#include "scour/swarm.hpp"
#include "synthetic.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace scour;

namespace {

double sphere(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

std::vector<DimensionlessRecord> lab_records(std::size_t n) {
    const auto gen = testing::full_model(Scale::Laboratory, 1.0, {-0.1, 0.15, 0.6, 0.05, 0.1});
    return derive_features(testing::generate(gen, n, 11, testing::lab_ranges(), 0.05));
}

void BM_SphereOptimize(benchmark::State& state) {
    const auto bounds = SearchBounds::uniform(static_cast<std::size_t>(state.range(0)), -5.0, 5.0);
    SwarmConfig config;
    config.iteration_count = 200;
    for (auto _ : state) benchmark::DoNotOptimize(optimize(sphere, bounds, config).best_value);
}
BENCHMARK(BM_SphereOptimize)->Arg(2)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_RmseObjective(benchmark::State& state) {
    const auto records = lab_records(static_cast<std::size_t>(state.range(0)));
    const auto objective = rmse_objective(builtin_spec("L1"), records);
    const std::vector<double> x = {1.0, -0.1, 0.15, 0.6, 0.05, 0.1};
    for (auto _ : state) benchmark::DoNotOptimize(objective(x));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RmseObjective)->Arg(100)->Arg(1000);

void BM_FitL1(benchmark::State& state) {
    const auto records = lab_records(400);
    SwarmConfig config;
    config.workers = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(fit(builtin_spec("L1"), records, config).model.a);
}
BENCHMARK(BM_FitL1)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
