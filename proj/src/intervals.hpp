#pragma once

#include <cstdint>
#include <vector>

#include "trace.hpp"

namespace dlpkit::intervals {

constexpr double kDomain = 10.0;  // observations live on [0, 10]

struct IntervalModel {
  double c = 0, r = 0;  // center, radius; [c-r, c+r] within [0, 10]
};

struct ModelClass {
  double c = 0, r_max = 0;  // all intervals m(c, r), r <= r_max
};

struct KernelMeasure {
  double mu = 5.0;
  double sigma = 10.0;
  double threshold = 1.1;  // required gain over the uniform-baseline mass
};

std::vector<double> gen_interval_data(const IntervalModel& target, int m, double contrast,
                                      std::uint64_t seed);

// Gaussian-kernel mass of the samples inside the class support, relative to
// the total kernel mass.
double kernel_mass_ratio(const KernelMeasure& L, const ModelClass& cls,
                         const std::vector<double>& samples);

// Kernel mass of the support under a uniform distribution on [0, 10].
double kernel_baseline(const KernelMeasure& L, const ModelClass& cls);

// 1 iff the class support captures nearly the whole kernel (the measure is
// too broad to discriminate) or the sample mass exceeds threshold * baseline.
int kernel_accepts(const KernelMeasure& L, const ModelClass& cls,
                   const std::vector<double>& samples);

// Interval density gap: inside density minus outside density on [0, 10].
double interval_gap(const std::vector<double>& samples, double c, double r);

// Inside-excess significance of the interval [c-r, c+r]; the scan statistic.
double interval_score(const std::vector<double>& samples, double c, double r);

struct RefineConfig {
  double mu0 = 5.0;
  double sigma0 = 10.0;
  double shrink_rho = 0.7;
  double resolution = 0.1;
  double threshold = 1.1;        // required gain over the uniform baseline
  double vacuous_cover = 0.95;   // baseline above which a class covers the kernel
  double min_significance = 6.0;  // final-estimate acceptance, in sigma units
  int max_iterations = 64;
};

struct RefineResult {
  bool localized = false;
  IntervalModel estimate{};
  trace::Trace trace;
  long long evaluations = 0;  // kernel verdicts plus final-scan gap evaluations
  std::vector<double> sigmas;
};

// Kernel-driven localization: evaluate the kernel over the class grid,
// re-center the mean at the accepted-mass centroid, shrink sigma by rho and
// the grid around the survivors; stop when sigma reaches the resolution, then
// estimate (c, r) by a local density-gap scan around the surviving region.
RefineResult refine_loop(const std::vector<double>& samples, const RefineConfig& cfg);

// Exhaustive fine-grid scan over all (c, r); the brute-force baseline the
// refine loop is compared against.
struct ScanResult {
  IntervalModel best{};
  long long evaluations = 0;
};
ScanResult exhaustive_scan(const std::vector<double>& samples, double resolution);

}  // namespace dlpkit::intervals
