#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "poikit/cluster.hpp"
#include "poikit/config.hpp"

namespace {

std::vector<poikit::StayPoint> random_stay_points(std::size_t n) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> lat(1.2, 1.45), lon(103.6, 104.0);
  std::uniform_real_distribution<double> acc(10.0, 120.0);
  std::vector<poikit::StayPoint> out(n);
  poikit::Timestamp t = 1600000000;
  for (auto& sp : out) {
    sp.centroid_lat = lat(rng);
    sp.centroid_lon = lon(rng);
    sp.mean_accuracy = acc(rng);
    sp.t_arrive = t;
    sp.t_depart = t + 2000;
    t += 4000;
  }
  return out;
}

void BM_DbscanPoi(benchmark::State& state) {
  const auto sps = random_stay_points(static_cast<std::size_t>(state.range(0)));
  const poikit::PipelineConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(poikit::cluster::dbscan_poi(sps, cfg));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DbscanPoi)->RangeMultiplier(2)->Range(32, 2048)->Complexity();

void BM_HierarchicalPoi(benchmark::State& state) {
  const auto sps = random_stay_points(static_cast<std::size_t>(state.range(0)));
  const poikit::PipelineConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(poikit::cluster::hierarchical_poi(sps, 200.0, cfg));
}
BENCHMARK(BM_HierarchicalPoi)->RangeMultiplier(2)->Range(32, 512);

void BM_KmeansPoi(benchmark::State& state) {
  const auto sps = random_stay_points(static_cast<std::size_t>(state.range(0)));
  const poikit::PipelineConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(poikit::cluster::kmeans_poi(sps, 8, cfg));
}
BENCHMARK(BM_KmeansPoi)->RangeMultiplier(2)->Range(32, 512);

}  // namespace

BENCHMARK_MAIN();
