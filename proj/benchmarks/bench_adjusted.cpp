#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "adjrisk/adjrisk.hpp"

namespace {

adjrisk::SampleWindow window60() {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> z(0.0, 0.01);
    std::vector<double> pts(60);
    for (double& x : pts) {
        x = z(rng);
    }
    return adjrisk::SampleWindow(std::move(pts));
}

adjrisk::TargetRiskProfile step() {
    return adjrisk::step_profile(std::vector<double>{0.95, 0.99}, std::vector<double>{0.0, 0.01});
}

void BM_AdjustedHat(benchmark::State& state, adjrisk::RiskFamilySpec spec) {
    const auto w = window60();
    const auto g = step();
    for (auto _ : state) {
        benchmark::DoNotOptimize(adjrisk::adjusted_value_hat(spec, g, w));
    }
}
BENCHMARK_CAPTURE(BM_AdjustedHat, es, adjrisk::RiskFamilySpec::es());
BENCHMARK_CAPTURE(BM_AdjustedHat, scrm, adjrisk::RiskFamilySpec::scrm(0.95));
BENCHMARK_CAPTURE(BM_AdjustedHat, expectile, adjrisk::RiskFamilySpec::expectile());

void BM_ClosedFormStep(benchmark::State& state) {
    const auto d = window60().law();
    const auto g = step();
    for (auto _ : state) {
        benchmark::DoNotOptimize(adjrisk::closed_form_step(adjrisk::RiskFamilySpec::es(), g, d));
    }
}
BENCHMARK(BM_ClosedFormStep);

void BM_BenchmarkProfile(benchmark::State& state) {
    const auto w = window60();
    for (auto _ : state) {
        benchmark::DoNotOptimize(adjrisk::benchmark_profile(adjrisk::RiskFamilySpec::es(), w));
    }
}
BENCHMARK(BM_BenchmarkProfile);

void BM_ExpectileDual(benchmark::State& state) {
    std::vector<adjrisk::Atom> atoms;
    const auto n = static_cast<std::size_t>(state.range(0));
    for (std::size_t i = 0; i < n; ++i) {
        atoms.push_back({static_cast<double>(i * i % 7), 1.0 / static_cast<double>(n)});
    }
    const adjrisk::DiscreteDistribution d(atoms);
    for (auto _ : state) {
        benchmark::DoNotOptimize(adjrisk::expectile_dual_value(d, 0.9));
    }
}
BENCHMARK(BM_ExpectileDual)->Arg(4)->Arg(6);

}  // namespace
