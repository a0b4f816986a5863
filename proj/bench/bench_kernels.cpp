// Serial reference kernels against their OpenMP counterparts.
//
//   ./bench_kernels --benchmark_filter=Aggregate
//   OMP_NUM_THREADS=8 ./bench_kernels

#include <benchmark/benchmark.h>

#include <map>

#include "sgmsup/census.hpp"
#include "sgmsup/sgm.hpp"
#include "synthetic.hpp"

namespace {

using namespace sgmsup;

struct Scene {
  CensusImage left, right;
  CostVolume cost;
};

const Scene& scene(int size, int ndisp) {
  static std::map<std::pair<int, int>, Scene> cache;
  auto key = std::make_pair(size, ndisp);
  auto it = cache.find(key);
  if (it == cache.end()) {
    const auto s = testing::random_dot_stereogram(size, size, 4, {{size / 4, size / 4, size / 2, size / 2, ndisp / 2}}, 7);
    Scene sc;
    sc.left = census_transform(s.left);
    sc.right = census_transform(s.right);
    sc.cost = build_cost_volume(sc.left, sc.right, 0, ndisp - 1);
    it = cache.emplace(key, std::move(sc)).first;
  }
  return it->second;
}

void BM_CensusSerial(benchmark::State& st) {
  const auto img = testing::random_gray(static_cast<int>(st.range(0)), static_cast<int>(st.range(0)), 1);
  for (auto _ : st) benchmark::DoNotOptimize(reference::census_transform(img));
}

void BM_CensusParallel(benchmark::State& st) {
  const auto img = testing::random_gray(static_cast<int>(st.range(0)), static_cast<int>(st.range(0)), 1);
  for (auto _ : st) benchmark::DoNotOptimize(census_transform(img));
}

void BM_CostSerial(benchmark::State& st) {
  const Scene& s = scene(static_cast<int>(st.range(0)), 64);
  for (auto _ : st) benchmark::DoNotOptimize(reference::build_cost_volume(s.left, s.right, 0, 63));
}

void BM_CostParallel(benchmark::State& st) {
  const Scene& s = scene(static_cast<int>(st.range(0)), 64);
  for (auto _ : st) benchmark::DoNotOptimize(build_cost_volume(s.left, s.right, 0, 63));
}

void BM_AggregateSerial(benchmark::State& st) {
  const Scene& s = scene(static_cast<int>(st.range(0)), 64);
  const SgmParams p;
  for (auto _ : st) benchmark::DoNotOptimize(reference::aggregate(s.cost, p));
}

void BM_AggregateParallel(benchmark::State& st) {
  const Scene& s = scene(static_cast<int>(st.range(0)), 64);
  const SgmParams p;
  for (auto _ : st) benchmark::DoNotOptimize(aggregate(s.cost, p));
}

}  // namespace

BENCHMARK(BM_CensusSerial)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CensusParallel)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CostSerial)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CostParallel)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AggregateSerial)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AggregateParallel)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
