// Serial reference against the OpenMP path for the heavy kernels.
#include <benchmark/benchmark.h>

#include "cpa/config.hpp"
#include "cpa/sim.hpp"
#include "cpa/verify.hpp"

namespace {

using namespace cpa;

const InstanceConfig& duo() {
  static const InstanceConfig cfg = load_config(CPA_CONFIG_DIR "/duo.yaml");
  return cfg;
}

const InstanceConfig& b2t() {
  static const InstanceConfig cfg = load_config(CPA_CONFIG_DIR "/b2t.yaml");
  return cfg;
}

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

void BM_TableBuild(benchmark::State& state) {
  const auto inst = b2t().instance();
  for (auto _ : state) benchmark::DoNotOptimize(MechanismTables(inst, 1025, exec_of(state)));
}

void BM_Regularity(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(check_regularity(b2t().agents.front(), 128, 128, exec_of(state)));
}

void BM_Simulate(benchmark::State& state) {
  const MechanismTables tables(duo().instance());
  SimSettings s;
  s.n_runs = 20000;
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_revenue(tables, truthful_profile(tables.size()), s, exec_of(state)));
}

void BM_TypeIc(benchmark::State& state) {
  const MechanismTables tables(b2t().instance());
  ExpectationOptions o;
  o.exec = exec_of(state);
  for (auto _ : state) {
    const TypeDeviationScan scan(tables, 0, 64, 64, o);
    benchmark::DoNotOptimize(scan.certify(IncomeStrategy::truthful_projection, exec_of(state)));
  }
}

}  // namespace

BENCHMARK(BM_TableBuild)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Regularity)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Simulate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TypeIc)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
