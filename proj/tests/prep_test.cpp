#include "poikit/prep.hpp"

#include <vector>

#include "doctest.h"
#include "support/testgen.hpp"

using namespace poikit;
using prep::AlignedSlot;
using prep::NoiseNormalizer;
using prep::TimeWindow;

namespace {

LocationSample loc(Timestamp t, double acc = 10.0) {
  return {"u", t, 1.3, 103.8, acc};
}

SensorSample sen(Timestamp t) {
  SensorSample s;
  s.user_id = "u";
  s.t = t;
  return s;
}

}  // namespace

TEST_CASE("denoise drops later duplicates and sorts") {
  std::vector<LocationSample> in = {loc(100, 1.0), loc(100, 2.0), loc(200, 3.0)};
  auto out = prep::denoise(in);
  REQUIRE(out.size() == 2);
  CHECK(out[0].t == 100);
  CHECK(out[0].accuracy == 1.0);  // first occurrence wins
  CHECK(out[1].t == 200);

  CHECK(prep::denoise(std::vector<LocationSample>{}).empty());

  auto sorted = prep::denoise({loc(300), loc(100), loc(200)});
  REQUIRE(sorted.size() == 3);
  CHECK(sorted[0].t == 100);
  CHECK(sorted[2].t == 300);
}

TEST_CASE("denoise is idempotent and strictly increasing") {
  testgen::Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<LocationSample> in;
    const int n = static_cast<int>(rng.uniform_int(0, 60));
    for (int i = 0; i < n; ++i) in.push_back(loc(rng.uniform_int(0, 30), rng.uniform(1, 9)));
    auto once = prep::denoise(in);
    auto twice = prep::denoise(once);
    REQUIRE(once.size() == twice.size());
    for (std::size_t i = 0; i < once.size(); ++i) {
      CHECK(once[i].t == twice[i].t);
      CHECK(once[i].accuracy == twice[i].accuracy);
      if (i > 0) CHECK(once[i].t > once[i - 1].t);
    }
  }
}

TEST_CASE("noise normalizer fit") {
  std::vector<SensorSample> samples;
  for (double v : {3.0, 7.0, 5.0}) {
    auto s = sen(100 + static_cast<Timestamp>(v));
    s.noise_raw = v;
    samples.push_back(s);
  }
  auto norm = prep::fit_noise_normalizer(samples, {0, 1000});
  CHECK(norm.s_min == 3.0);
  CHECK(norm.s_max == 7.0);

  auto single = prep::fit_noise_normalizer({samples[1]}, {0, 1000});
  CHECK(single.s_min == 7.0);
  CHECK(single.s_max == 7.0);

  std::vector<SensorSample> no_noise = {sen(10), sen(20)};
  CHECK_THROWS_AS(prep::fit_noise_normalizer(no_noise, {0, 1000}), std::invalid_argument);
  // samples outside the window do not count either
  CHECK_THROWS_AS(prep::fit_noise_normalizer(samples, {5000, 6000}), std::invalid_argument);
}

TEST_CASE("normalize_noise endpoints, midpoint, clamping") {
  NoiseNormalizer norm{2.0, 12.0, {0, 1000}};
  CHECK(prep::normalize_noise(2.0, norm) == 0.0);
  CHECK(prep::normalize_noise(12.0, norm) == 10.0);
  CHECK(prep::normalize_noise(7.0, norm) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(prep::normalize_noise(-100.0, norm) == 0.0);
  CHECK(prep::normalize_noise(1e9, norm) == 10.0);

  NoiseNormalizer flat{4.0, 4.0, {0, 1000}};
  CHECK(prep::normalize_noise(4.0, flat) == 0.0);
  CHECK(prep::normalize_noise(9.0, flat) == 0.0);
}

TEST_CASE("normalize_noise stays in range and is monotone") {
  testgen::Rng rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = rng.uniform(0.0, 100.0);
    const double b = rng.uniform(0.0, 100.0);
    NoiseNormalizer norm{std::min(a, b), std::max(a, b), {0, 1}};
    double prev = -1.0;
    for (double s = -20.0; s <= 120.0; s += 3.7) {
      const double v = prep::normalize_noise(s, norm);
      CHECK(v >= 0.0);
      CHECK(v <= 10.0);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("time_sync aggregates one slot") {
  PipelineConfig cfg;
  std::vector<LocationSample> locs = {loc(10, 20.0), loc(150, 40.0)};
  auto slots = prep::time_sync(locs, {}, cfg, {10, 151});
  REQUIRE(slots.size() == 1);
  CHECK(slots[0].slot_start == 0);
  REQUIRE(slots[0].mean_accuracy.has_value());
  CHECK(*slots[0].mean_accuracy == doctest::Approx(30.0));
  CHECK_FALSE(slots[0].mean_noise.has_value());
  CHECK_FALSE(slots[0].battery.has_value());
  CHECK_FALSE(slots[0].light_indicator.has_value());
  CHECK_FALSE(slots[0].activity.has_value());
}

TEST_CASE("time_sync sensor aggregates") {
  PipelineConfig cfg;
  std::vector<SensorSample> sens;
  auto s1 = sen(30);
  s1.noise_norm = 2.0;
  s1.battery_charging = 0;
  s1.light = 1200.0;
  s1.activity = Activity::Walking;
  auto s2 = sen(60);
  s2.noise_norm = 6.0;
  s2.battery_charging = 1;
  s2.light = 1800.0;
  s2.activity = Activity::Still;
  auto s3 = sen(90);
  s3.activity = Activity::Still;
  sens = {s1, s2, s3};

  auto slots = prep::time_sync({}, sens, cfg, {0, 300});
  REQUIRE(slots.size() == 1);
  const auto& slot = slots[0];
  CHECK_FALSE(slot.mean_accuracy.has_value());
  CHECK(*slot.mean_noise == doctest::Approx(4.0));
  CHECK(*slot.battery == 1);            // any charging sample flips the flag
  CHECK(*slot.light_indicator == 1);    // mean 1500 above the 1000 lux bar
  CHECK(*slot.activity == Activity::Still);  // 2 Still vs 1 Walking
}

TEST_CASE("time_sync activity tie breaks by enum order") {
  PipelineConfig cfg;
  auto s1 = sen(10);
  s1.activity = Activity::Walking;
  auto s2 = sen(20);
  s2.activity = Activity::Still;
  auto slots = prep::time_sync({}, {s1, s2}, cfg, {0, 300});
  REQUIRE(slots.size() == 1);
  CHECK(*slots[0].activity == Activity::Still);
}

TEST_CASE("time_sync light indicator respects the threshold") {
  PipelineConfig cfg;
  auto dim = sen(10);
  dim.light = 900.0;
  auto slots = prep::time_sync({}, {dim}, cfg, {0, 300});
  CHECK(*slots[0].light_indicator == 0);

  auto bright = sen(10);
  bright.light = 1500.0;
  slots = prep::time_sync({}, {bright}, cfg, {0, 300});
  CHECK(*slots[0].light_indicator == 1);
}

TEST_CASE("time_sync covers the range with ceil(range / slot_len) slots") {
  PipelineConfig cfg;
  testgen::Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const Timestamp begin = rng.uniform_int(0, 50) * cfg.slot_len;
    const std::int64_t span = rng.uniform_int(1, 5000);
    auto slots = prep::time_sync({}, {}, cfg, {begin, begin + span});
    const std::int64_t expected = (span + cfg.slot_len - 1) / cfg.slot_len;
    CHECK(slots.size() == static_cast<std::size_t>(expected));
    for (std::size_t i = 0; i < slots.size(); ++i) {
      CHECK(slots[i].slot_start % cfg.slot_len == 0);
      if (i > 0) CHECK(slots[i].slot_start == slots[i - 1].slot_start + cfg.slot_len);
    }
  }
}

TEST_CASE("time_sync buckets every sample exactly once") {
  PipelineConfig cfg;
  testgen::Rng rng(24);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<LocationSample> locs;
    Timestamp t = rng.uniform_int(0, 500);
    const int n = static_cast<int>(rng.uniform_int(1, 60));
    for (int i = 0; i < n; ++i) {
      locs.push_back(loc(t, rng.uniform(1.0, 99.0)));
      t += rng.uniform_int(1, 700);
    }
    auto slots = prep::time_sync(locs, {}, cfg, {locs.front().t, locs.back().t + 1});

    // reconstruct each slot's mean independently
    for (const auto& slot : slots) {
      double sum = 0.0;
      int count = 0;
      for (const auto& s : locs)
        if (s.t >= slot.slot_start && s.t < slot.slot_start + cfg.slot_len) {
          sum += s.accuracy;
          ++count;
        }
      if (count == 0) {
        CHECK_FALSE(slot.mean_accuracy.has_value());
      } else {
        REQUIRE(slot.mean_accuracy.has_value());
        CHECK(*slot.mean_accuracy == doctest::Approx(sum / count).epsilon(1e-12));
      }
    }
  }
}
