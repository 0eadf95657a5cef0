#include <benchmark/benchmark.h>

#include "spinprobe/measure.hpp"
#include "spinprobe/reconstruct.hpp"
#include "spinprobe/scan.hpp"

using namespace spinprobe;

namespace {

const SpinTexture& texture() {
  static const SpinTexture tex =
      apply_pattern(build_lattice(LatticeType::square, 3.0, 5, 5), Pattern::afm_neel, Vec3::UnitZ());
  return tex;
}

ScanConfig scan_config(double step) {
  ScanConfig c;
  c.mode = InteractionMode::both;
  c.x_range = {-2, 14};
  c.y_range = {-2, 14};
  c.step = step;
  return c;
}

// Arg 0 runs the serial reference; n > 0 runs OpenMP with n threads.
Execution exec_for(const benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  return n == 0 ? Execution::serial() : Execution::parallel(n);
}

void BM_Scan(benchmark::State& state) {
  const auto cfg = scan_config(0.25);
  const auto exec = exec_for(state);
  for (auto _ : state) benchmark::DoNotOptimize(scan_constant_height(cfg, texture(), exec));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(cfg.grid().size()));
}

void BM_MeasureMap(benchmark::State& state) {
  const auto map = scan_constant_height(scan_config(1.0), texture());
  SpectrumConfig sc;
  const auto exec = exec_for(state);
  for (auto _ : state) benchmark::DoNotOptimize(measure_map(map, sc, exec));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(map.size()));
}

void BM_Forward(benchmark::State& state) {
  const auto grid = GridSpec::from_ranges({-2, 14}, {-2, 14}, 0.25);
  ForwardOptions opts;
  opts.mode = InteractionMode::both;
  const auto exec = exec_for(state);
  for (auto _ : state) benchmark::DoNotOptimize(build_forward(texture(), grid, 4.0, opts, exec));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}

}  // namespace

BENCHMARK(BM_Scan)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MeasureMap)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Forward)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
