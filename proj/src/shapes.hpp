#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "engine.hpp"
#include "trace.hpp"

namespace dlpkit::shapes {

struct CircleParams {
  double cx = 0, cy = 0, r = 1;
};

struct LensParams {
  double xa = 0, xg = 0, yb = 0, h = 1;  // symmetric lens on the baseline y=yb
  double width() const { return xg - xa; }
};

using Shape = std::variant<CircleParams, LensParams>;

std::string shape_str(const Shape& s);
bool shape_fits(const Shape& s, int n);

struct SceneSpec {
  int n = 0;
  int m = 0;
  std::vector<Shape> shapes;
  double contrast = 3.0;
  std::uint64_t seed = 0;
};

struct PointCloud {
  std::vector<double> xs, ys;
  std::vector<std::uint8_t> provenance;  // generator-only inside tag; not serialized

  std::size_t size() const { return xs.size(); }
  std::string to_jsonl() const;
  static PointCloud from_jsonl(const std::string& text);
  void save(const std::string& path) const;
  static PointCloud load(const std::string& path);
};

struct OpCounters {
  long long membership_tests = 0;
  long long ddt_calls = 0;
  double wall_time = 0.0;
};

PointCloud gen_scene(const SceneSpec& spec);

// Base membership operations.
bool circle_contains(const CircleParams& c, double x, double y);
bool lens_contains(const LensParams& l, double x, double y,
                   std::uint64_t* quad_form_evals = nullptr);

// Area in grid-cell units: cells of [0,n)^2 whose center lies inside.
long long shape_area_cells(const Shape& s, int n);

struct DdtResult {
  int verdict = 0;
  double d_in = 0, d_out = 0;
};

// Density Difference Test: verdict 1 iff d_in - d_out > t. Counts one
// membership test per cloud point.
DdtResult ddt(const Shape& shape, const PointCloud& cloud, double t, int n,
              OpCounters& counters);

enum class ShapeKind { Circle, Lens };

struct Detection {
  Shape shape;
  double gap = 0;  // d_in - d_out under the exact test
  double z = 0;    // inside-excess significance used for ranking
};

struct DetectConfig {
  double t = -1.0;           // DDT threshold; <0 = (contrast-1)/2 * m/n^2 at contrast 3
  double min_radius = -1.0;  // detection size floor; <0 = max(2, n/15)
  double engine_threshold = 8.0;  // z acceptance for the dlp engine
  double kappa = 1.5;             // measure level per stride unit
  int max_depth = 12;
  int window = 1;                 // refinement window in parent strides
  double refine_factor = 2.0;
  dlp::Orientation orientation = dlp::Orientation::Maximize;
};

double default_ddt_threshold(int n, std::size_t m);
double default_min_radius(int n);

struct BruteResult {
  std::vector<Detection> detections;
  OpCounters counters;
};

// Full sweep: n*n centers x n radii for circles, n^4 (xa, width, yb, h)
// tuples for lenses, one DDT each, so membership_tests is exactly
// (candidate count) * m. Detections are the per-overlap-component best
// verdict-1 candidates ranked by z.
BruteResult brute_force_search(const PointCloud& cloud, int n, ShapeKind kind,
                               const DetectConfig& cfg);

struct DlpResult {
  std::vector<Detection> detections;
  OpCounters counters;
  trace::Trace trace;
};

// Coarse-to-fine search through the DDLMO engine; same detection format and
// counter units as the brute force.
DlpResult dlp_search(const PointCloud& cloud, int n, ShapeKind kind, const DetectConfig& cfg);

struct ScalingRow {
  int n = 0;
  int m = 0;
  long long predicted = 0;
  long long measured = 0;
  double wall = 0.0;
};

struct ScalingReport {
  std::vector<ScalingRow> rows;
  double slope = 0.0;
  std::string str(ShapeKind kind) const;
};

// Brute-force operation counts over the given (n, m) sizes plus a log-log
// slope fit of measured counts vs n. Caps: circle n <= 200, lens n <= 40
// unless allow_huge.
ScalingReport scaling_report(ShapeKind kind, const std::vector<std::pair<int, int>>& sizes,
                             std::uint64_t seed, bool allow_huge);

// Model spaces backing dlp_search; exposed for engine-level tests.
class CircleSpace final : public dlp::ModelSpace {
public:
  CircleSpace(const PointCloud& cloud, int n, double kappa);

  double final_stride() const override { return 1.0; }
  std::vector<dlp::GridModel> coarse_candidates() const override;
  std::vector<dlp::GridModel> refine(const dlp::GridModel& m,
                                     const dlp::EngineConfig& cfg) const override;
  dlp::Measure match(double stride) const override;
  double evaluate(const dlp::Measure& L, const dlp::GridModel& m) override;
  std::string describe(const dlp::GridModel& m) const override;
  bool covered_by(const dlp::GridModel& cell, const dlp::GridModel& accepted) const override;

  OpCounters counters;
  int coarse_stride() const { return s0_; }

private:
  const PointCloud& cloud_;
  int n_;
  double kappa_;
  int s0_;
};

class LensSpace final : public dlp::ModelSpace {
public:
  LensSpace(const PointCloud& cloud, int n, double kappa);

  double final_stride() const override { return 1.0; }
  std::vector<dlp::GridModel> coarse_candidates() const override;
  std::vector<dlp::GridModel> refine(const dlp::GridModel& m,
                                     const dlp::EngineConfig& cfg) const override;
  dlp::Measure match(double stride) const override;
  double evaluate(const dlp::Measure& L, const dlp::GridModel& m) override;
  std::string describe(const dlp::GridModel& m) const override;
  bool covered_by(const dlp::GridModel& cell, const dlp::GridModel& accepted) const override;

  OpCounters counters;
  int coarse_stride() const { return s0_; }

private:
  const PointCloud& cloud_;
  int n_;
  double kappa_;
  int s0_;
};

}  // namespace dlpkit::shapes
