#include <benchmark/benchmark.h>

#include "ngca/model.hpp"
#include "ngca/reweighted_pca.hpp"
#include "ngca/testmat.hpp"

namespace {

using namespace ngca;

GeneratorConfig cube_config(int n, int d) {
    GeneratorConfig config;
    config.family = Family::UniformCube;
    config.ambient_dim = n;
    config.nongauss_dim = d;
    config.rotation_seed = 1;
    config.sample_seed = 2;
    return config;
}

void BM_SampleNgca(benchmark::State& state) {
    const auto config = cube_config(static_cast<int>(state.range(0)), 2);
    for (auto _ : state) {
        auto [sample, truth] = sample_ngca(config, 10000);
        benchmark::DoNotOptimize(sample);
    }
}
BENCHMARK(BM_SampleNgca)->Arg(6)->Arg(16)->Arg(32);

void BM_EstimatePhi(benchmark::State& state) {
    const auto config = cube_config(static_cast<int>(state.range(0)), 2);
    const auto [sample, truth] = sample_ngca(config, 50000);
    for (auto _ : state) {
        auto report = estimate_phi(sample, 0.2);
        benchmark::DoNotOptimize(report);
    }
}
BENCHMARK(BM_EstimatePhi)->Arg(6)->Arg(16)->Arg(32);

void BM_EstimatePsi(benchmark::State& state) {
    const auto config = cube_config(static_cast<int>(state.range(0)), 2);
    const auto [sample, truth] = sample_ngca(config, 50000);
    const auto pairs = pair_samples(sample);
    for (auto _ : state) {
        auto report = estimate_psi(pairs, 0.5);
        benchmark::DoNotOptimize(report);
    }
}
BENCHMARK(BM_EstimatePsi)->Arg(6)->Arg(16)->Arg(32);

void BM_FullRun(benchmark::State& state) {
    const auto config = cube_config(6, 2);
    const auto [sample, truth] = sample_ngca(config, 50000);
    const auto pairs = pair_samples(sample);
    RunConfig run;
    run.alpha1 = 0.2;
    run.alpha2 = 0.5;
    for (auto _ : state) {
        auto result = run_reweighted_pca(pairs, run);
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(BM_FullRun);

}  // namespace

BENCHMARK_MAIN();
