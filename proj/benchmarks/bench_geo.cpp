#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "poikit/geo.hpp"

namespace {

std::vector<poikit::geo::GeoPoint> random_points(std::size_t n) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lat(-85.0, 85.0), lon(-180.0, 180.0);
  std::vector<poikit::geo::GeoPoint> pts(n);
  for (auto& p : pts) p = {lat(rng), lon(rng)};
  return pts;
}

void BM_HaversineDistance(benchmark::State& state) {
  const auto pts = random_points(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& a = pts[i % pts.size()];
    const auto& b = pts[(i * 31 + 7) % pts.size()];
    benchmark::DoNotOptimize(poikit::geo::haversine_distance(a, b, 6371000.0));
    ++i;
  }
}
BENCHMARK(BM_HaversineDistance);

}  // namespace

BENCHMARK_MAIN();
