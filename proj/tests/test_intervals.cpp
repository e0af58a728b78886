#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "intervals.hpp"

using namespace dlpkit;
using namespace dlpkit::intervals;

namespace {

double measured_ratio(const std::vector<double>& samples, double lo, double hi) {
  long long inside = 0;
  for (double x : samples) inside += x >= lo && x <= hi;
  double d_in = static_cast<double>(inside) / (hi - lo);
  double d_out = static_cast<double>(samples.size() - inside) / (kDomain - (hi - lo));
  return d_in / d_out;
}

}  // namespace

TEST_CASE("gen_interval_data density and validation") {
  std::vector<double> samples = gen_interval_data({2.0, 2.0}, 2000, 3.0, 1);
  CHECK(samples.size() == 2000);
  for (double x : samples) {
    CHECK(x >= 0);
    CHECK(x <= 10);
  }
  double ratio = measured_ratio(samples, 0, 4);
  CHECK(ratio > 3.0 * 0.75);
  CHECK(ratio < 3.0 * 1.25);

  CHECK_THROWS_AS(gen_interval_data({2.0, 2.0}, 100, 1.0, 0), Error);   // no signal
  CHECK_THROWS_AS(gen_interval_data({2.0, 0.0}, 100, 3.0, 0), Error);   // empty radius
  CHECK_THROWS_AS(gen_interval_data({9.0, 2.0}, 100, 3.0, 0), Error);   // outside [0,10]
  CHECK(gen_interval_data({2, 2}, 50, 3, 7) == gen_interval_data({2, 2}, 50, 3, 7));
}

TEST_CASE("kernel_accepts reproduces the broad-kernel verdict") {
  std::vector<double> samples = gen_interval_data({2.0, 2.0}, 500, 3.0, 2);
  KernelMeasure l0{5.0, 10.0, 1.1};
  CHECK(kernel_baseline(l0, {5.0, 5.0}) == doctest::Approx(1.0));
  CHECK(kernel_accepts(l0, {5.0, 5.0}, samples) == 1);  // covers the class; cannot fail
}

TEST_CASE("a sharp kernel rejects a class far from the data mass") {
  std::vector<double> far;  // everything near 8
  for (int i = 0; i < 200; ++i) far.push_back(7.5 + 0.005 * i);
  KernelMeasure sharp{8.0, 0.5, 1.1};
  CHECK(kernel_accepts(sharp, {1.0, 1.0}, far) == 0);
  CHECK(kernel_accepts(sharp, {5.0, 5.0}, far) == 1);  // full [0,10] has mass ratio 1
}

TEST_CASE("kernel_accepts validates its inputs") {
  std::vector<double> samples{1, 2, 3};
  CHECK_THROWS_AS(kernel_accepts({5, 0.0, 1.1}, {5, 5}, samples), Error);   // sigma = 0
  CHECK_THROWS_AS(kernel_accepts({5, 1, 1.1}, {1.0, 3.0}, samples), Error);  // class sticks out
  CHECK_THROWS_AS(kernel_accepts({5, 1, 1.1}, {5.0, 0.0}, samples), Error);  // empty class
}

TEST_CASE("refine_loop kernel schedule and estimate") {
  std::vector<double> samples = gen_interval_data({2.0, 2.0}, 2000, 3.0, 3);
  RefineConfig cfg;
  RefineResult res = refine_loop(samples, cfg);
  REQUIRE(res.localized);
  REQUIRE(res.sigmas.size() >= 2);
  CHECK(res.sigmas[0] == doctest::Approx(10.0));
  CHECK(res.sigmas[1] == doctest::Approx(7.0));  // 10 * 0.7
  CHECK(res.sigmas.size() <= 20);
  for (std::size_t i = 0; i + 1 < res.sigmas.size(); ++i)
    CHECK(res.sigmas[i + 1] < res.sigmas[i]);
  CHECK(std::abs(res.estimate.c - 2.0) <= 0.2);
  CHECK(std::abs(res.estimate.r - 2.0) <= 0.2);

  ScanResult oracle = exhaustive_scan(samples, cfg.resolution);
  CHECK(std::abs(oracle.best.c - 2.0) <= 0.2);
  CHECK(std::abs(oracle.best.r - 2.0) <= 0.2);
  CHECK(res.evaluations < oracle.evaluations);
}

TEST_CASE("refine_loop is stable across seeds") {
  double c_lo = 1e9, c_hi = -1e9, r_lo = 1e9, r_hi = -1e9;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::vector<double> samples = gen_interval_data({2.0, 2.0}, 2000, 3.0, seed);
    RefineResult res = refine_loop(samples, RefineConfig{});
    REQUIRE(res.localized);
    c_lo = std::min(c_lo, res.estimate.c);
    c_hi = std::max(c_hi, res.estimate.c);
    r_lo = std::min(r_lo, res.estimate.r);
    r_hi = std::max(r_hi, res.estimate.r);
  }
  CHECK(c_hi - c_lo <= 0.2);
  CHECK(r_hi - r_lo <= 0.2);
}

TEST_CASE("refine_loop fails to localize uniform samples") {
  std::vector<double> uniform;
  for (int i = 0; i < 1000; ++i) uniform.push_back(10.0 * i / 1000.0);
  RefineResult res = refine_loop(uniform, RefineConfig{});
  CHECK(!res.localized);
  // the level-0 class is accepted vacuously; a finer level rejects everything
  REQUIRE(!res.trace.steps.empty());
  CHECK(res.trace.steps.front().verdict == 1);
  CHECK(res.trace.steps.back().verdict == 0);
}

TEST_CASE("refine_loop trace carries the matched chain with levels") {
  std::vector<double> samples = gen_interval_data({2.0, 2.0}, 1500, 3.0, 4);
  RefineResult res = refine_loop(samples, RefineConfig{});
  REQUIRE(res.localized);
  int chain_steps = 0;
  double last_level = 1e18;
  for (const auto& s : res.trace.steps) {
    if (!s.chain) continue;
    ++chain_steps;
    REQUIRE(s.level.has_value());
    CHECK(*s.level < last_level);
    last_level = *s.level;
    CHECK(s.verdict == 1);
  }
  CHECK(chain_steps == static_cast<int>(res.sigmas.size()));
}

TEST_CASE("the scan statistic peaks at the planted interval") {
  std::vector<double> samples = gen_interval_data({6.0, 1.5}, 2000, 3.0, 11);
  ScanResult scan = exhaustive_scan(samples, 0.1);
  CHECK(std::abs(scan.best.c - 6.0) <= 0.2);
  CHECK(std::abs(scan.best.r - 1.5) <= 0.2);
  CHECK(interval_gap(samples, 6.0, 1.5) > 0);
  CHECK_THROWS_AS(interval_gap(samples, 5.0, 5.0), Error);   // outside density undefined
  CHECK_THROWS_AS(interval_score(samples, 5.0, 5.0), Error);
}
