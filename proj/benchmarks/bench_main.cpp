#include <benchmark/benchmark.h>

#include "saft/attractor.hpp"
#include "saft/beurling.hpp"
#include "saft/cantor.hpp"
#include "saft/expansion.hpp"
#include "saft/sdensity.hpp"

using namespace saft;

static void BM_ExpandBinary(benchmark::State& state) {
  const auto pair = validate_pair_1d(2.0, {0.0, 1.0});
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(expand_level(pair, k));
  state.SetItemsProcessed(state.iterations() * (int64_t{1} << k));
}
BENCHMARK(BM_ExpandBinary)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_ExpandTwinDragon(benchmark::State& state) {
  const auto pair = validate_pair({{1, -1}, {1, 1}}, {{0, 0}, {1, 0}});
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(expand_level(pair, k));
  state.SetItemsProcessed(state.iterations() * (int64_t{1} << k));
}
BENCHMARK(BM_ExpandTwinDragon)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_UpperDensity1d(benchmark::State& state) {
  const auto pts = expand_level(validate_pair_1d(1.5, {0.0, 1.0}), static_cast<int>(state.range(0)));
  const auto sched = natural_schedule(pts);
  for (auto _ : state) benchmark::DoNotOptimize(upper_density_profile(pts, sched));
  state.counters["points"] = static_cast<double>(pts.size());
}
BENCHMARK(BM_UpperDensity1d)->Arg(14)->Arg(18)->Unit(benchmark::kMillisecond);

static void BM_UpperDensity2d(benchmark::State& state) {
  const auto pts = expand_level(validate_pair({{1, -1}, {1, 1}}, {{0, 0}, {1, 0}}), static_cast<int>(state.range(0)));
  const Schedule sched({4.0, 16.0, 64.0});
  for (auto _ : state) benchmark::DoNotOptimize(upper_density_profile(pts, sched));
  state.counters["points"] = static_cast<double>(pts.size());
}
BENCHMARK(BM_UpperDensity2d)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_LowerDensity1d(benchmark::State& state) {
  const auto pair = validate_pair_1d(-2.0, {0.0, 1.0});
  const int k = static_cast<int>(state.range(0));
  const auto pts = expand_level(pair, k);
  const auto ref = expand_level(pair, k + 2);
  const auto sched = natural_schedule(pts);
  for (auto _ : state) benchmark::DoNotOptimize(lower_density_profile(pts, sched, &ref));
}
BENCHMARK(BM_LowerDensity1d)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_SDensityCantor(benchmark::State& state) {
  const CantorPair cp(3.0, 2.0);
  const auto pts = expand_level(cp.to_pair(), static_cast<int>(state.range(0)));
  const double diam = pts.coord(pts.size() - 1, 0);
  const auto sched = Schedule::geometric(diam / 512, diam, 5);
  for (auto _ : state) benchmark::DoNotOptimize(upper_s_density_profile(pts, cp.s(), sched));
}
BENCHMARK(BM_SDensityCantor)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_Sampler(benchmark::State& state) {
  const auto pair = validate_pair_1d(3.0, {0.0, 2.0});
  for (auto _ : state) benchmark::DoNotOptimize(sample_self_similar_measure(pair, 100000, 1, 64));
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_Sampler)->Unit(benchmark::kMillisecond);

static void BM_RasterInterval(benchmark::State& state) {
  const auto pair = validate_pair_1d(1.5, {0.0, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(raster_attractor(pair, static_cast<int>(state.range(0)), 200));
}
BENCHMARK(BM_RasterInterval)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

static void BM_RasterTwinDragon(benchmark::State& state) {
  const auto pair = validate_pair({{1, -1}, {1, 1}}, {{0, 0}, {1, 0}});
  for (auto _ : state) benchmark::DoNotOptimize(raster_attractor(pair, static_cast<int>(state.range(0)), 400));
}
BENCHMARK(BM_RasterTwinDragon)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
