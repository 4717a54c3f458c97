#include <benchmark/benchmark.h>

#include <vector>

#include "cosim/sweep.hpp"

namespace {

std::vector<cosim::CosimConfig> sweep_configs() {
  std::vector<cosim::CosimConfig> out;
  for (double h : {0.2, 0.1, 0.05, 0.025}) {
    cosim::CosimConfig c;
    c.model = cosim::Model::spring_mass({});
    c.macro_step = h;
    c.t_end = 5.0;
    c.ext_order = 1;
    c.smoothing = true;
    c.policy = cosim::CorrectionPolicy::Smooth2;
    out.push_back(c);
  }
  return out;
}

void BM_SweepSerial(benchmark::State& state) {
  const auto configs = sweep_configs();
  for (auto _ : state) benchmark::DoNotOptimize(cosim::run_sweep_serial(configs));
}

void BM_SweepParallel(benchmark::State& state) {
  const auto configs = sweep_configs();
  for (auto _ : state) benchmark::DoNotOptimize(cosim::run_sweep_parallel(configs));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
