#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "poikit/config.hpp"
#include "poikit/staypoint.hpp"

namespace {

// day-scale series alternating dwells and travel, the detector's typical load
std::vector<poikit::LocationSample> synthetic_day(std::size_t n) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> jitter(0.0, 0.0001);
  std::uniform_real_distribution<double> acc(8.0, 60.0);
  std::vector<poikit::LocationSample> out;
  out.reserve(n);
  double lat = 1.35, lon = 103.82;
  poikit::Timestamp t = 1600000000;
  std::size_t i = 0;
  while (out.size() < n) {
    const bool dwell = (i++ % 2) == 0;
    const std::size_t burst = dwell ? 12 : 4;
    for (std::size_t k = 0; k < burst && out.size() < n; ++k) {
      out.push_back({"u", t, lat + (dwell ? jitter(rng) : 0.0),
                     lon + (dwell ? jitter(rng) : 0.0), acc(rng)});
      if (!dwell) {
        lat += 0.01;
        lon += 0.01;
      }
      t += 300;
    }
  }
  return out;
}

void BM_DetectVspd(benchmark::State& state) {
  const auto samples = synthetic_day(static_cast<std::size_t>(state.range(0)));
  const poikit::PipelineConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(poikit::staypoint::detect_vspd(samples, cfg));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DetectVspd)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_DetectBaseline(benchmark::State& state) {
  const auto samples = synthetic_day(static_cast<std::size_t>(state.range(0)));
  const poikit::PipelineConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(poikit::staypoint::detect_baseline(samples, cfg));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DetectBaseline)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

}  // namespace

BENCHMARK_MAIN();
