#include "intervals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "error.hpp"
#include "rng.hpp"

namespace dlpkit::intervals {

namespace {

double kernel_weight(double x, double mu, double sigma) {
  double d = (x - mu) / sigma;
  return std::exp(-0.5 * d * d);
}

// integral of the unnormalized Gaussian over [a, b]
double kernel_integral(double a, double b, double mu, double sigma) {
  double s = sigma * std::sqrt(2.0);
  return 0.5 * (std::erf((b - mu) / s) - std::erf((a - mu) / s));
}

std::string class_id(const ModelClass& cls) {
  std::ostringstream out;
  out << "class c=" << cls.c << " R=" << cls.r_max;
  return out.str();
}

}  // namespace

std::vector<double> gen_interval_data(const IntervalModel& target, int m, double contrast,
                                      std::uint64_t seed) {
  require(target.r > 0, Errc::invalid_argument, "target interval needs a positive radius");
  require(target.c - target.r >= 0 && target.c + target.r <= kDomain, Errc::invalid_argument,
          "target interval must lie inside [0, 10]");
  require(contrast > 1.0, Errc::invalid_argument, "contrast must exceed 1");
  require(m > 0, Errc::invalid_argument, "sample count must be positive");

  double len_in = 2 * target.r;
  double len_out = kDomain - len_in;
  double p_in = contrast * len_in / (contrast * len_in + len_out);

  Rng rng(seed);
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(m));
  double lo = target.c - target.r;
  for (int k = 0; k < m; ++k) {
    if (rng.uniform() < p_in) {
      samples.push_back(lo + rng.uniform() * len_in);
    } else {
      double u = rng.uniform() * len_out;
      samples.push_back(u < lo ? u : u + len_in);
    }
  }
  return samples;
}

double kernel_mass_ratio(const KernelMeasure& L, const ModelClass& cls,
                         const std::vector<double>& samples) {
  require(L.sigma > 0, Errc::invalid_argument, "kernel sigma must be positive");
  require(!samples.empty(), Errc::invalid_argument, "kernel measure needs samples");
  double lo = cls.c - cls.r_max, hi = cls.c + cls.r_max;
  double total = 0, inside = 0;
  for (double x : samples) {
    double w = kernel_weight(x, L.mu, L.sigma);
    total += w;
    if (x >= lo && x <= hi) inside += w;
  }
  return total > 0 ? inside / total : 0.0;
}

double kernel_baseline(const KernelMeasure& L, const ModelClass& cls) {
  require(L.sigma > 0, Errc::invalid_argument, "kernel sigma must be positive");
  double lo = std::max(0.0, cls.c - cls.r_max);
  double hi = std::min(kDomain, cls.c + cls.r_max);
  double whole = kernel_integral(0, kDomain, L.mu, L.sigma);
  if (whole <= 0 || hi <= lo) return 0.0;
  return kernel_integral(lo, hi, L.mu, L.sigma) / whole;
}

int kernel_accepts(const KernelMeasure& L, const ModelClass& cls,
                   const std::vector<double>& samples) {
  require(cls.r_max > 0, Errc::invalid_argument, "class radius bound must be positive");
  require(cls.c - cls.r_max >= -1e-9 && cls.c + cls.r_max <= kDomain + 1e-9,
          Errc::invalid_argument, "class must fit inside [0, 10]");
  double baseline = kernel_baseline(L, cls);
  if (baseline >= 0.95) return 1;  // the kernel covers the class; cannot fail
  return kernel_mass_ratio(L, cls, samples) > L.threshold * baseline ? 1 : 0;
}

double interval_gap(const std::vector<double>& samples, double c, double r) {
  require(r > 0 && 2 * r < kDomain, Errc::invalid_argument,
          "gap needs 0 < r < 5 so both densities exist");
  double lo = c - r, hi = c + r;
  long long cnt = 0;
  for (double x : samples) cnt += x >= lo && x <= hi;
  double inside = static_cast<double>(cnt) / (2 * r);
  double outside = static_cast<double>(samples.size() - cnt) / (kDomain - 2 * r);
  return inside - outside;
}

double interval_score(const std::vector<double>& samples, double c, double r) {
  require(r > 0 && 2 * r < kDomain, Errc::invalid_argument,
          "score needs 0 < r < 5 so both densities exist");
  // a hidden interval covers well under a third of the domain; candidates
  // leaving no substantial outside cannot be assessed
  if (3 * (2 * r) > 2 * kDomain) return 0.0;
  double lo = c - r, hi = c + r;
  long long cnt = 0;
  for (double x : samples) cnt += x >= lo && x <= hi;
  double d_out = static_cast<double>(samples.size() - cnt) / (kDomain - 2 * r);
  double expected = 2 * r * d_out;
  return (static_cast<double>(cnt) - expected) / std::sqrt(std::max(expected, 1.0));
}

RefineResult refine_loop(const std::vector<double>& samples, const RefineConfig& cfg) {
  require(cfg.shrink_rho > 0 && cfg.shrink_rho < 1, Errc::invalid_argument,
          "shrink factor must lie in (0, 1)");
  require(cfg.resolution > 0, Errc::invalid_argument, "resolution must be positive");
  require(!samples.empty(), Errc::invalid_argument, "refine loop needs samples");

  RefineResult result;
  trace::Trace& tr = result.trace;

  double mu = cfg.mu0;
  double sigma = cfg.sigma0;
  // The class bound tracks the kernel: the widest classes stay under the
  // broad starting kernels, then shrink with sigma so that a class can
  // still capture essentially the whole kernel view.
  auto class_bound = [&](double s) { return std::min(kDomain / 2, 2.6 * s); };
  double r_max = class_bound(sigma);
  double win_lo = 0, win_hi = kDomain;  // where the object may still lie
  bool seen_informative = false;
  std::int64_t prev_chain = -1;

  int iter = 0;
  while (true) {
    require(iter < cfg.max_iterations, Errc::not_found,
            "refine loop failed to converge within the iteration limit");
    KernelMeasure L{mu, sigma, cfg.threshold};
    result.sigmas.push_back(sigma);
    r_max = class_bound(sigma);
    double pitch = std::max(cfg.resolution, sigma / 3);
    double lo_c = std::max(r_max, win_lo);
    double hi_c = std::min(kDomain - r_max, win_hi);
    if (hi_c < lo_c) {
      lo_c = std::clamp((win_lo + win_hi) / 2, r_max, kDomain - r_max);
      hi_c = lo_c;
    }

    struct Eval {
      ModelClass cls;
      double ratio, baseline;
      bool accepted, informative;
      std::int64_t seq;
    };
    std::vector<Eval> evals;
    for (double c = lo_c; c <= hi_c + 1e-9; c += pitch) {
      ModelClass cls{std::min(c, kDomain - r_max), r_max};
      if (!evals.empty() && evals.back().cls.c == cls.c) continue;
      double baseline = kernel_baseline(L, cls);
      double ratio = kernel_mass_ratio(L, cls, samples);
      bool vacuous = baseline >= cfg.vacuous_cover;
      bool accepted = vacuous || ratio > cfg.threshold * baseline;
      ++result.evaluations;

      trace::Step st;
      st.id = class_id(cls);
      st.verdict = accepted ? 1 : 0;
      st.level = sigma;
      st.score = baseline > 0 ? ratio / baseline : 0.0;
      st.segment = 0;
      if (prev_chain >= 0) st.parent = prev_chain;
      std::int64_t seq = tr.add(std::move(st)).seq;
      evals.push_back({cls, ratio, baseline, accepted, !vacuous, seq});
    }

    std::vector<const Eval*> survivors;
    for (const Eval& e : evals)
      if (e.accepted) survivors.push_back(&e);
    if (survivors.empty()) {
      result.localized = false;  // all classes rejected at this level
      return result;
    }

    // Chain representative: strongest gain over baseline.
    const Eval* best = survivors.front();
    for (const Eval* e : survivors) {
      double a = e->baseline > 0 ? e->ratio / e->baseline : 0.0;
      double b = best->baseline > 0 ? best->ratio / best->baseline : 0.0;
      if (a > b || (a == b && e->cls.c < best->cls.c)) best = e;
    }
    tr.steps[static_cast<std::size_t>(best->seq)].chain = true;
    prev_chain = best->seq;

    if (sigma <= cfg.resolution) break;

    // Re-center at the accepted-mass centroid: the mean moves to the mass the
    // informative survivors accepted. Vacuous acceptances carry no location
    // information and are skipped.
    double wsum = 0, wx = 0;
    for (double x : samples) {
      bool inside_informative = false;
      for (const Eval* e : survivors)
        if (e->informative && x >= e->cls.c - e->cls.r_max && x <= e->cls.c + e->cls.r_max)
          inside_informative = true;
      if (!inside_informative) continue;
      wsum += 1;
      wx += x;
    }
    if (wsum > 0) mu = wx / wsum;

    // Vacuous acceptances carry no location information: the survivor window
    // narrows only on informative acceptances and is held otherwise. Before
    // any informative level the window spans the whole feasible range.
    // The object lies inside the union of the survivors' supports; the
    // window only ever narrows, so noisy fringe acceptances cannot drag it
    // away from the localized region.
    bool any_informative = false;
    double supp_lo = kDomain, supp_hi = 0;
    for (const Eval* e : survivors) {
      if (e->informative) any_informative = true;
      supp_lo = std::min(supp_lo, e->cls.c - e->cls.r_max);
      supp_hi = std::max(supp_hi, e->cls.c + e->cls.r_max);
    }
    if (any_informative) seen_informative = true;
    double new_lo = std::max(win_lo, supp_lo);
    double new_hi = std::min(win_hi, supp_hi);
    if (new_hi >= new_lo) {
      win_lo = new_lo;
      win_hi = new_hi;
    }

    sigma *= cfg.shrink_rho;
    ++iter;
  }

  // Localization requires that an informative level narrowed the window;
  // coasting on kernel-covered classes alone confirms nothing.
  if (!seen_informative) {
    result.localized = false;
    return result;
  }

  // Local precision scan around the surviving region, on the resolution grid.
  double span_lo = win_lo - 1.0, span_hi = win_hi + 1.0;
  double best_score = 0;
  bool have = false;
  IntervalModel best{};
  long long c_first = std::max<long long>(1, static_cast<long long>(std::ceil(span_lo / cfg.resolution)));
  long long c_last = std::min(static_cast<long long>(kDomain / cfg.resolution) - 1,
                              static_cast<long long>(std::floor(span_hi / cfg.resolution)));
  long long r_last = static_cast<long long>(kDomain / (2 * cfg.resolution)) - 1;
  for (long long ci = c_first; ci <= c_last; ++ci) {
    double c = ci * cfg.resolution;
    for (long long ri = 1; ri <= r_last; ++ri) {
      double r = ri * cfg.resolution;
      if (c - r < -1e-9 || c + r > kDomain + 1e-9) continue;
      double score = interval_score(samples, c, r);
      ++result.evaluations;
      if (!have || score > best_score) {
        have = true;
        best_score = score;
        best = {c, r};
      }
    }
  }
  // The estimate must carry real inside-excess significance.
  result.localized = have && best_score >= cfg.min_significance;
  result.estimate = best;
  return result;
}

ScanResult exhaustive_scan(const std::vector<double>& samples, double resolution) {
  require(resolution > 0, Errc::invalid_argument, "resolution must be positive");
  ScanResult out;
  double best_score = 0;
  bool have = false;
  long long c_last = static_cast<long long>(kDomain / resolution) - 1;
  long long r_last = static_cast<long long>(kDomain / (2 * resolution)) - 1;
  for (long long ci = 1; ci <= c_last; ++ci) {
    double c = ci * resolution;
    for (long long ri = 1; ri <= r_last; ++ri) {
      double r = ri * resolution;
      if (c - r < -1e-9 || c + r > kDomain + 1e-9) continue;
      double score = interval_score(samples, c, r);
      ++out.evaluations;
      if (!have || score > best_score) {
        have = true;
        best_score = score;
        out.best = {c, r};
      }
    }
  }
  return out;
}

}  // namespace dlpkit::intervals
