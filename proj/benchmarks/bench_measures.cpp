#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "adjrisk/adjrisk.hpp"

namespace {

std::vector<double> normal_points(std::size_t n) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> z(0.0, 0.01);
    std::vector<double> pts(n);
    for (double& x : pts) {
        x = z(rng);
    }
    return pts;
}

void BM_SampleWindow(benchmark::State& state) {
    const auto pts = normal_points(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(adjrisk::SampleWindow(pts));
    }
}
BENCHMARK(BM_SampleWindow)->Arg(60)->Arg(200)->Arg(1000);

void BM_EsHat(benchmark::State& state) {
    const adjrisk::SampleWindow w(normal_points(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) {
        benchmark::DoNotOptimize(adjrisk::es_hat(w, 0.975));
    }
}
BENCHMARK(BM_EsHat)->Arg(60)->Arg(200)->Arg(1000);

void BM_ExpectileHat(benchmark::State& state) {
    const adjrisk::SampleWindow w(normal_points(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) {
        benchmark::DoNotOptimize(adjrisk::expectile_hat(w, 0.99));
    }
}
BENCHMARK(BM_ExpectileHat)->Arg(60)->Arg(200)->Arg(1000);

void BM_ConditionalEs(benchmark::State& state) {
    const adjrisk::SampleWindow w(normal_points(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) {
        benchmark::DoNotOptimize(adjrisk::conditional_es(w.law(), 0.9));
    }
}
BENCHMARK(BM_ConditionalEs)->Arg(60)->Arg(200);

}  // namespace
