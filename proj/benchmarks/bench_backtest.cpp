#include <benchmark/benchmark.h>

#include "adjrisk/adjrisk.hpp"

namespace {

void BM_Backtest(benchmark::State& state) {
    const auto returns = adjrisk::neg_log_returns(
        adjrisk::synthetic_prices(static_cast<std::size_t>(state.range(0)) + 1, 7));
    const auto g = adjrisk::step_profile(std::vector<double>{0.95, 0.99}, std::vector<double>{0.0, 0.01});
    adjrisk::BacktestConfig cfg;
    cfg.measures.push_back({"adjES", adjrisk::RiskFamilySpec::es(), g});
    cfg.measures.push_back({"SCRM", adjrisk::RiskFamilySpec::scrm(0.95), g});
    cfg.measures.push_back({"reeval", adjrisk::RiskFamilySpec::es(), adjrisk::ReevaluatedProfile{60, {}}});
    cfg.reldiffs.emplace_back("SCRM", "adjES");
    for (auto _ : state) {
        benchmark::DoNotOptimize(adjrisk::run_backtest(returns, cfg));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(returns.size()));
}
BENCHMARK(BM_Backtest)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace
