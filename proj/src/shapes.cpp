#include "shapes.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "error.hpp"
#include "rng.hpp"

namespace dlpkit::shapes {

using nlohmann::json;

std::string shape_str(const Shape& s) {
  std::ostringstream out;
  if (std::holds_alternative<CircleParams>(s)) {
    const auto& c = std::get<CircleParams>(s);
    out << "circle cx=" << c.cx << " cy=" << c.cy << " r=" << c.r;
  } else {
    const auto& l = std::get<LensParams>(s);
    out << "lens xa=" << l.xa << " xg=" << l.xg << " yb=" << l.yb << " h=" << l.h;
  }
  return out.str();
}

bool shape_fits(const Shape& s, int n) {
  if (std::holds_alternative<CircleParams>(s)) {
    const auto& c = std::get<CircleParams>(s);
    return c.r >= 1.0 && c.cx - c.r >= 0 && c.cx + c.r <= n - 1 && c.cy - c.r >= 0 &&
           c.cy + c.r <= n - 1;
  }
  const auto& l = std::get<LensParams>(s);
  return l.h >= 1.0 && l.xa < l.xg && l.xa >= 0 && l.xg <= n - 1 && l.yb - l.h >= 0 &&
         l.yb + l.h <= n - 1;
}

std::string PointCloud::to_jsonl() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    json j;
    j["x"] = xs[i];
    j["y"] = ys[i];
    out << j.dump() << '\n';
  }
  return out.str();
}

PointCloud PointCloud::from_jsonl(const std::string& text) {
  PointCloud cloud;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    require(!j.is_discarded() && j.is_object() && j.contains("x") && j.contains("y"),
            Errc::parse, "point line " + std::to_string(lineno) + " must be {\"x\":..,\"y\":..}");
    cloud.xs.push_back(j["x"].get<double>());
    cloud.ys.push_back(j["y"].get<double>());
  }
  return cloud;
}

void PointCloud::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), Errc::io, "cannot open point file for writing: " + path);
  out << to_jsonl();
  require(out.good(), Errc::io, "failed writing point file: " + path);
}

PointCloud PointCloud::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Errc::io, "cannot open point file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_jsonl(buf.str());
}

bool circle_contains(const CircleParams& c, double x, double y) {
  double dx = x - c.cx, dy = y - c.cy;
  return dx * dx + dy * dy <= c.r * c.r;
}

bool lens_contains(const LensParams& l, double x, double y, std::uint64_t* quad_form_evals) {
  double w = l.xg - l.xa;
  if (w <= 0) return false;
  double u = (2 * x - (l.xa + l.xg)) / w;
  double upper = l.yb + l.h * (1 - u * u);
  double lower = l.yb - l.h * (1 - u * u);
  if (quad_form_evals) *quad_form_evals += 2;
  return y <= upper && y >= lower;
}

namespace {

bool cell_inside(const Shape& s, int i, int j) {
  double x = i + 0.5, y = j + 0.5;
  if (std::holds_alternative<CircleParams>(s))
    return circle_contains(std::get<CircleParams>(s), x, y);
  return lens_contains(std::get<LensParams>(s), x, y);
}

// Cells of row j whose centers fall in [xlo, xhi], clipped to [0, n).
long long row_cells(double xlo, double xhi, int n) {
  int lo = static_cast<int>(std::ceil(xlo - 0.5));
  int hi = static_cast<int>(std::floor(xhi - 0.5));
  lo = std::max(lo, 0);
  hi = std::min(hi, n - 1);
  return hi >= lo ? hi - lo + 1 : 0;
}

long long circle_area_cells_real(double cx, double cy, double r, int n) {
  if (r <= 0) return 0;
  long long area = 0;
  int jlo = std::max(0, static_cast<int>(std::floor(cy - r)));
  int jhi = std::min(n - 1, static_cast<int>(std::ceil(cy + r)));
  for (int j = jlo; j <= jhi; ++j) {
    double dy = j + 0.5 - cy;
    double rem = r * r - dy * dy;
    if (rem <= 0) continue;
    double w = std::sqrt(rem);
    area += row_cells(cx - w, cx + w, n);
  }
  return area;
}

long long lens_area_cells_real(const LensParams& l, int n) {
  double w = l.xg - l.xa;
  if (w <= 0 || l.h <= 0) return 0;
  long long area = 0;
  int ilo = std::max(0, static_cast<int>(std::floor(l.xa)));
  int ihi = std::min(n - 1, static_cast<int>(std::ceil(l.xg)));
  for (int i = ilo; i <= ihi; ++i) {
    double x = i + 0.5;
    double u = (2 * x - (l.xa + l.xg)) / w;
    double q = l.h * (1 - u * u);
    if (q <= 0) continue;
    int jlo = static_cast<int>(std::ceil(l.yb - q - 0.5));
    int jhi = static_cast<int>(std::floor(l.yb + q - 0.5));
    jlo = std::max(jlo, 0);
    jhi = std::min(jhi, n - 1);
    if (jhi >= jlo) area += jhi - jlo + 1;
  }
  return area;
}

// Inside-excess significance. Planted shapes cover < 1/3 of the grid, so a
// candidate region without a substantial outside cannot be assessed; such
// degenerate regions score zero.
double significance(long long cnt, long long area, std::size_t m, long long grid_cells) {
  if (area <= 0 || 3 * area > 2 * grid_cells) return 0.0;
  double d_out = static_cast<double>(m - cnt) / static_cast<double>(grid_cells - area);
  double expected = static_cast<double>(area) * d_out;
  double excess = static_cast<double>(cnt) - expected;
  return excess / std::sqrt(std::max(expected, 1.0));
}

}  // namespace

long long shape_area_cells(const Shape& s, int n) {
  if (std::holds_alternative<CircleParams>(s)) {
    const auto& c = std::get<CircleParams>(s);
    return circle_area_cells_real(c.cx, c.cy, c.r, n);
  }
  return lens_area_cells_real(std::get<LensParams>(s), n);
}

double default_ddt_threshold(int n, std::size_t m) {
  // half the density gap implied by contrast 3 over a small shape
  return static_cast<double>(m) / (static_cast<double>(n) * n);
}

double default_min_radius(int n) { return std::max(2.0, n / 15.0); }

PointCloud gen_scene(const SceneSpec& spec) {
  require(spec.n >= 4, Errc::invalid_argument, "grid size must be at least 4");
  require(spec.m >= static_cast<int>(spec.shapes.size()), Errc::invalid_argument,
          "point count must be at least the shape count");
  require(spec.contrast > 1.0, Errc::invalid_argument, "contrast must exceed 1");
  for (const Shape& s : spec.shapes)
    require(shape_fits(s, spec.n), Errc::invalid_argument,
            "shape does not fit inside the grid: " + shape_str(s));

  int n = spec.n;
  std::vector<std::pair<int, int>> inside_cells;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (const Shape& s : spec.shapes)
        if (cell_inside(s, i, j)) {
          inside_cells.emplace_back(i, j);
          break;
        }
  long long grid_cells = static_cast<long long>(n) * n;
  long long a_in = static_cast<long long>(inside_cells.size());
  require(a_in * 3 < grid_cells, Errc::invalid_argument,
          "planted shapes cover 1/3 or more of the grid");

  double p_in = spec.contrast * static_cast<double>(a_in) /
                (spec.contrast * static_cast<double>(a_in) +
                 static_cast<double>(grid_cells - a_in));

  Rng rng(spec.seed);
  PointCloud cloud;
  cloud.xs.reserve(static_cast<std::size_t>(spec.m));
  cloud.ys.reserve(static_cast<std::size_t>(spec.m));
  cloud.provenance.reserve(static_cast<std::size_t>(spec.m));
  for (int k = 0; k < spec.m; ++k) {
    bool inside = a_in > 0 && rng.uniform() < p_in;
    if (inside) {
      auto [ci, cj] = inside_cells[rng.below(inside_cells.size())];
      cloud.xs.push_back(ci + rng.uniform());
      cloud.ys.push_back(cj + rng.uniform());
      cloud.provenance.push_back(1);
    } else {
      while (true) {
        double x = rng.uniform() * n, y = rng.uniform() * n;
        bool in = false;
        for (const Shape& s : spec.shapes)
          if (cell_inside(s, static_cast<int>(x), static_cast<int>(y))) in = true;
        if (in) continue;
        cloud.xs.push_back(x);
        cloud.ys.push_back(y);
        cloud.provenance.push_back(0);
        break;
      }
    }
  }
  return cloud;
}

DdtResult ddt(const Shape& shape, const PointCloud& cloud, double t, int n,
              OpCounters& counters) {
  long long area = shape_area_cells(shape, n);
  require(area > 0, Errc::invalid_argument, "zero-area shape: " + shape_str(shape));
  long long grid_cells = static_cast<long long>(n) * n;

  long long cnt = 0;
  if (std::holds_alternative<CircleParams>(shape)) {
    const auto& c = std::get<CircleParams>(shape);
    for (std::size_t k = 0; k < cloud.size(); ++k)
      cnt += circle_contains(c, cloud.xs[k], cloud.ys[k]);
  } else {
    const auto& l = std::get<LensParams>(shape);
    for (std::size_t k = 0; k < cloud.size(); ++k)
      cnt += lens_contains(l, cloud.xs[k], cloud.ys[k]);
  }
  counters.membership_tests += static_cast<long long>(cloud.size());
  counters.ddt_calls += 1;

  DdtResult res;
  res.d_in = static_cast<double>(cnt) / static_cast<double>(area);
  res.d_out = grid_cells > area
                  ? static_cast<double>(cloud.size() - cnt) / static_cast<double>(grid_cells - area)
                  : 0.0;
  res.verdict = res.d_in - res.d_out > t ? 1 : 0;
  return res;
}

namespace {

struct Candidate {
  std::array<int, 4> p{};  // circle: cx, cy, r; lens: xa, w, yb, h
  int dims = 3;
  double gap = 0;
  double z = 0;
};

std::uint64_t encode(const std::array<int, 4>& p) {
  std::uint64_t key = 0;
  for (int v : p) key = (key << 16) | static_cast<std::uint64_t>(v & 0xFFFF);
  return key;
}

// Connected components over parameter-adjacent candidates (Chebyshev <= 1),
// best-z representative per component, then a geometric pass that keeps a
// representative only when it does not overlap a better one.
std::vector<Candidate> suppress(std::vector<Candidate> cands, ShapeKind kind) {
  std::size_t count = cands.size();
  if (count == 0) return cands;
  std::map<std::uint64_t, std::size_t> index;
  for (std::size_t i = 0; i < count; ++i) index.emplace(encode(cands[i].p), i);

  std::vector<std::size_t> parent(count);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };

  int dims = cands[0].dims;
  std::array<int, 4> off{};
  std::function<void(std::size_t, int)> visit = [&](std::size_t i, int d) {
    if (d == dims) {
      std::array<int, 4> q = cands[i].p;
      bool self = true;
      for (int k = 0; k < dims; ++k) {
        q[static_cast<std::size_t>(k)] += off[static_cast<std::size_t>(k)];
        if (off[static_cast<std::size_t>(k)] != 0) self = false;
      }
      if (self) return;
      auto it = index.find(encode(q));
      if (it != index.end()) unite(i, it->second);
      return;
    }
    for (int v : {-1, 0, 1}) {
      off[static_cast<std::size_t>(d)] = v;
      visit(i, d + 1);
    }
  };
  for (std::size_t i = 0; i < count; ++i) visit(i, 0);

  std::map<std::size_t, std::size_t> best;
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t root = find(i);
    auto it = best.find(root);
    if (it == best.end() || cands[i].z > cands[it->second].z ||
        (cands[i].z == cands[it->second].z && cands[i].p < cands[it->second].p))
      best[root] = i;
  }

  std::vector<Candidate> reps;
  for (const auto& [root, i] : best) reps.push_back(cands[i]);
  std::sort(reps.begin(), reps.end(), [](const Candidate& a, const Candidate& b) {
    if (a.z != b.z) return a.z > b.z;
    return a.p < b.p;
  });

  auto overlaps = [&](const Candidate& a, const Candidate& b) {
    if (kind == ShapeKind::Circle) {
      double dx = a.p[0] - b.p[0], dy = a.p[1] - b.p[1];
      double rr = a.p[2] + b.p[2];
      return dx * dx + dy * dy < rr * rr;
    }
    bool x_apart = a.p[0] + a.p[1] < b.p[0] || b.p[0] + b.p[1] < a.p[0];
    bool y_apart = a.p[2] + a.p[3] < b.p[2] - b.p[3] || b.p[2] + b.p[3] < a.p[2] - a.p[3];
    return !x_apart && !y_apart;
  };

  std::vector<Candidate> kept;
  for (const Candidate& c : reps) {
    bool blocked = false;
    for (const Candidate& k : kept)
      if (overlaps(c, k)) blocked = true;
    if (!blocked) kept.push_back(c);
  }
  return kept;
}

Shape candidate_shape(const Candidate& c, ShapeKind kind) {
  if (kind == ShapeKind::Circle)
    return CircleParams{static_cast<double>(c.p[0]), static_cast<double>(c.p[1]),
                        static_cast<double>(c.p[2])};
  return LensParams{static_cast<double>(c.p[0]), static_cast<double>(c.p[0] + c.p[1]),
                    static_cast<double>(c.p[2]), static_cast<double>(c.p[3])};
}

// Integer-circle row offsets: for radius r and row offset dy = t + 0.5 the
// covered cell columns relative to cx are [lo[t], hi[t]].
struct CircleRowTable {
  int r;
  std::vector<int> lo, hi;
  long long full_area = 0;

  explicit CircleRowTable(int radius) : r(radius) {
    for (int t = 0; static_cast<double>(t) + 0.5 < radius; ++t) {
      double dy = t + 0.5;
      double w = std::sqrt(static_cast<double>(radius) * radius - dy * dy);
      int l = static_cast<int>(std::ceil(-w - 0.5));
      int h = static_cast<int>(std::floor(w - 0.5));
      lo.push_back(l);
      hi.push_back(h);
      full_area += 2LL * (h - l + 1);
    }
  }

  long long area(int cx, int cy, int n) const {
    // rows come in pairs cy + t and cy - 1 - t
    int rows = static_cast<int>(lo.size());
    if (cx - r >= 0 && cx + r <= n - 1 && cy - r >= 0 && cy + r <= n - 1) return full_area;
    long long area = 0;
    for (int t = 0; t < rows; ++t) {
      for (int j : {cy + t, cy - 1 - t}) {
        if (j < 0 || j >= n) continue;
        int a = std::max(cx + lo[static_cast<std::size_t>(t)], 0);
        int b = std::min(cx + hi[static_cast<std::size_t>(t)], n - 1);
        if (b >= a) area += b - a + 1;
      }
    }
    return area;
  }
};

BruteResult brute_circles(const PointCloud& cloud, int n, const DetectConfig& cfg) {
  BruteResult out;
  std::size_t m = cloud.size();
  double t = cfg.t >= 0 ? cfg.t : default_ddt_threshold(n, m);
  double min_r = cfg.min_radius >= 0 ? cfg.min_radius : default_min_radius(n);
  long long grid_cells = static_cast<long long>(n) * n;

  std::vector<CircleRowTable> rows;
  rows.reserve(static_cast<std::size_t>(n));
  for (int r = 1; r <= n; ++r) rows.emplace_back(r);

  std::vector<double> d2(m);
  std::vector<Candidate> hits;
  for (int cx = 0; cx < n; ++cx) {
    for (int cy = 0; cy < n; ++cy) {
      for (std::size_t k = 0; k < m; ++k) {
        double dx = cloud.xs[k] - cx, dy = cloud.ys[k] - cy;
        d2[k] = dx * dx + dy * dy;
      }
      for (int r = 1; r <= n; ++r) {
        double r2 = static_cast<double>(r) * r;
        long long cnt = 0;
        for (std::size_t k = 0; k < m; ++k) cnt += d2[k] <= r2;
        if (cnt == 0) continue;
        long long area = rows[static_cast<std::size_t>(r - 1)].area(cx, cy, n);
        if (area <= 0 || 3 * area > 2 * grid_cells) continue;
        double d_in = static_cast<double>(cnt) / static_cast<double>(area);
        double d_out =
            static_cast<double>(m - cnt) / static_cast<double>(grid_cells - area);
        double gap = d_in - d_out;
        if (gap <= t) continue;
        if (r < min_r) continue;
        if (cx - r < 0 || cx + r > n - 1 || cy - r < 0 || cy + r > n - 1) continue;
        Candidate c;
        c.p = {cx, cy, r, 0};
        c.dims = 3;
        c.gap = gap;
        c.z = significance(cnt, area, m, grid_cells);
        hits.push_back(c);
      }
    }
  }
  out.counters.ddt_calls = static_cast<long long>(n) * n * n;
  out.counters.membership_tests = out.counters.ddt_calls * static_cast<long long>(m);

  for (const Candidate& c : suppress(std::move(hits), ShapeKind::Circle))
    out.detections.push_back({candidate_shape(c, ShapeKind::Circle), c.gap, c.z});
  return out;
}

BruteResult brute_lenses(const PointCloud& cloud, int n, const DetectConfig& cfg) {
  BruteResult out;
  std::size_t m = cloud.size();
  double t = cfg.t >= 0 ? cfg.t : default_ddt_threshold(n, m);
  double min_r = cfg.min_radius >= 0 ? cfg.min_radius : default_min_radius(n);
  long long grid_cells = static_cast<long long>(n) * n;

  std::vector<double> shape_t(m);
  std::vector<Candidate> hits;
  for (int xa = 0; xa < n; ++xa) {
    for (int w = 1; w <= n; ++w) {
      double xg = xa + w;
      for (std::size_t k = 0; k < m; ++k) {
        double u = (2 * cloud.xs[k] - (xa + xg)) / w;
        shape_t[k] = 1 - u * u;
      }
      for (int yb = 0; yb < n; ++yb) {
        for (int h = 1; h <= n; ++h) {
          long long cnt = 0;
          for (std::size_t k = 0; k < m; ++k) {
            double q = h * shape_t[k];
            double upper = yb + q, lower = yb - q;
            cnt += cloud.ys[k] <= upper && cloud.ys[k] >= lower;
          }
          if (cnt == 0) continue;
          LensParams lens{static_cast<double>(xa), xg, static_cast<double>(yb),
                          static_cast<double>(h)};
          long long area = lens_area_cells_real(lens, n);
          if (area <= 0 || 3 * area > 2 * grid_cells) continue;
          double d_in = static_cast<double>(cnt) / static_cast<double>(area);
          double d_out =
              static_cast<double>(m - cnt) / static_cast<double>(grid_cells - area);
          double gap = d_in - d_out;
          if (gap <= t) continue;
          if (h < min_r || w < 2 * min_r) continue;
          if (!shape_fits(lens, n)) continue;
          Candidate c;
          c.p = {xa, w, yb, h};
          c.dims = 4;
          c.gap = gap;
          c.z = significance(cnt, area, m, grid_cells);
          hits.push_back(c);
        }
      }
    }
  }
  long long n_ll = n;
  out.counters.ddt_calls = n_ll * n_ll * n_ll * n_ll;
  out.counters.membership_tests = out.counters.ddt_calls * static_cast<long long>(m);

  for (const Candidate& c : suppress(std::move(hits), ShapeKind::Lens))
    out.detections.push_back({candidate_shape(c, ShapeKind::Lens), c.gap, c.z});
  return out;
}

void check_cloud(const PointCloud& cloud, int n) {
  for (std::size_t k = 0; k < cloud.size(); ++k)
    require(cloud.xs[k] >= 0 && cloud.xs[k] < n && cloud.ys[k] >= 0 && cloud.ys[k] < n,
            Errc::invalid_argument,
            "point " + std::to_string(k) + " lies outside the grid [0," + std::to_string(n) +
                ")^2");
}

int coarse_stride_for(int n, int divisor) {
  int target = std::max(2, n / divisor);
  int s = 2;
  while (s * 2 <= target) s *= 2;
  return s;
}

}  // namespace

BruteResult brute_force_search(const PointCloud& cloud, int n, ShapeKind kind,
                               const DetectConfig& cfg) {
  require(n >= 2, Errc::invalid_argument, "grid size must be at least 2");
  check_cloud(cloud, n);
  auto start = std::chrono::steady_clock::now();
  BruteResult out = kind == ShapeKind::Circle ? brute_circles(cloud, n, cfg)
                                              : brute_lenses(cloud, n, cfg);
  out.counters.wall_time = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
  return out;
}

CircleSpace::CircleSpace(const PointCloud& cloud, int n, double kappa)
    : cloud_(cloud), n_(n), kappa_(kappa), s0_(coarse_stride_for(n, 12)) {}

std::vector<dlp::GridModel> CircleSpace::coarse_candidates() const {
  std::vector<dlp::GridModel> out;
  int r_cap = std::max(s0_, n_ / 3);
  for (int cx = 0; cx < n_; cx += s0_)
    for (int cy = 0; cy < n_; cy += s0_)
      for (int r = s0_; r <= r_cap; r += s0_)
        out.push_back({{static_cast<double>(cx), static_cast<double>(cy),
                        static_cast<double>(r)},
                       static_cast<double>(s0_),
                       0});
  return out;
}

std::vector<dlp::GridModel> CircleSpace::refine(const dlp::GridModel& m,
                                                const dlp::EngineConfig& cfg) const {
  if (m.stride <= final_stride()) return {};
  double h = std::max(1.0, m.stride / cfg.refine_factor);
  std::vector<dlp::GridModel> out;
  int span = 2 * cfg.window;
  for (int a = -span; a <= span; ++a)
    for (int b = -span; b <= span; ++b)
      for (int c = -span; c <= span; ++c) {
        double cx = std::clamp(m.params[0] + a * h, 0.0, static_cast<double>(n_ - 1));
        double cy = std::clamp(m.params[1] + b * h, 0.0, static_cast<double>(n_ - 1));
        double r = std::clamp(m.params[2] + c * h, 1.0,
                              std::max(static_cast<double>(s0_), std::floor(n_ / 3.0)));
        out.push_back({{cx, cy, r}, h, m.depth + 1});
      }
  std::sort(out.begin(), out.end(), [](const dlp::GridModel& a, const dlp::GridModel& b) {
    return a.params < b.params;
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const dlp::GridModel& a, const dlp::GridModel& b) {
                          return a.params == b.params;
                        }),
            out.end());
  return out;
}

dlp::Measure CircleSpace::match(double stride) const {
  dlp::Measure L;
  L.family = "density";
  L.level = kappa_ * (stride - 1.0);
  return L;
}

double CircleSpace::evaluate(const dlp::Measure& L, const dlp::GridModel& m) {
  require(L.family == "density", Errc::invalid_argument,
          "circle models are evaluable under the density family only");
  double pad = m.params[2] + L.level;
  double cx = m.params[0], cy = m.params[1];
  long long cnt = 0;
  double pad2 = pad * pad;
  for (std::size_t k = 0; k < cloud_.size(); ++k) {
    double dx = cloud_.xs[k] - cx, dy = cloud_.ys[k] - cy;
    cnt += dx * dx + dy * dy <= pad2;
  }
  counters.membership_tests += static_cast<long long>(cloud_.size());
  counters.ddt_calls += 1;
  long long area = circle_area_cells_real(cx, cy, pad, n_);
  return significance(cnt, area, cloud_.size(), static_cast<long long>(n_) * n_);
}

std::string CircleSpace::describe(const dlp::GridModel& m) const {
  std::ostringstream out;
  out << "circle cx=" << m.params[0] << " cy=" << m.params[1] << " r=" << m.params[2]
      << " stride=" << m.stride;
  return out.str();
}

bool CircleSpace::covered_by(const dlp::GridModel& cell,
                             const dlp::GridModel& accepted) const {
  double dx = cell.params[0] - accepted.params[0];
  double dy = cell.params[1] - accepted.params[1];
  double reach = accepted.params[2] + cell.stride;
  return dx * dx + dy * dy <= reach * reach;
}

LensSpace::LensSpace(const PointCloud& cloud, int n, double kappa)
    : cloud_(cloud), n_(n), kappa_(kappa), s0_(coarse_stride_for(n, 8)) {}

std::vector<dlp::GridModel> LensSpace::coarse_candidates() const {
  std::vector<dlp::GridModel> out;
  int h_cap = std::max(s0_, n_ / 2);
  for (int xa = 0; xa < n_; xa += s0_)
    for (int w = s0_; w <= n_; w += s0_)
      for (int yb = 0; yb < n_; yb += s0_)
        for (int h = s0_; h <= h_cap; h += s0_)
          out.push_back({{static_cast<double>(xa), static_cast<double>(w),
                          static_cast<double>(yb), static_cast<double>(h)},
                         static_cast<double>(s0_),
                         0});
  return out;
}

std::vector<dlp::GridModel> LensSpace::refine(const dlp::GridModel& m,
                                              const dlp::EngineConfig& cfg) const {
  if (m.stride <= final_stride()) return {};
  double h = std::max(1.0, m.stride / cfg.refine_factor);
  std::vector<dlp::GridModel> out;
  int span = 2 * cfg.window;
  for (int a = -span; a <= span; ++a)
    for (int b = -span; b <= span; ++b)
      for (int c = -span; c <= span; ++c)
        for (int d = -span; d <= span; ++d) {
          double xa = std::clamp(m.params[0] + a * h, 0.0, static_cast<double>(n_ - 1));
          double w = std::clamp(m.params[1] + b * h, 1.0, static_cast<double>(n_));
          double yb = std::clamp(m.params[2] + c * h, 0.0, static_cast<double>(n_ - 1));
          double hh = std::clamp(m.params[3] + d * h, 1.0, std::max(static_cast<double>(s0_), n_ / 2.0));
          out.push_back({{xa, w, yb, hh}, h, m.depth + 1});
        }
  std::sort(out.begin(), out.end(), [](const dlp::GridModel& a, const dlp::GridModel& b) {
    return a.params < b.params;
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const dlp::GridModel& a, const dlp::GridModel& b) {
                          return a.params == b.params;
                        }),
            out.end());
  return out;
}

dlp::Measure LensSpace::match(double stride) const {
  dlp::Measure L;
  L.family = "density";
  L.level = kappa_ * (stride - 1.0);
  return L;
}

double LensSpace::evaluate(const dlp::Measure& L, const dlp::GridModel& m) {
  require(L.family == "density", Errc::invalid_argument,
          "lens models are evaluable under the density family only");
  double sigma = L.level;
  LensParams pad{m.params[0] - sigma, m.params[0] + m.params[1] + sigma, m.params[2],
                 m.params[3] + sigma};
  long long cnt = 0;
  for (std::size_t k = 0; k < cloud_.size(); ++k)
    cnt += lens_contains(pad, cloud_.xs[k], cloud_.ys[k]);
  counters.membership_tests += static_cast<long long>(cloud_.size());
  counters.ddt_calls += 1;
  long long area = lens_area_cells_real(pad, n_);
  return significance(cnt, area, cloud_.size(), static_cast<long long>(n_) * n_);
}

std::string LensSpace::describe(const dlp::GridModel& m) const {
  std::ostringstream out;
  out << "lens xa=" << m.params[0] << " xg=" << m.params[0] + m.params[1]
      << " yb=" << m.params[2] << " h=" << m.params[3] << " stride=" << m.stride;
  return out.str();
}

bool LensSpace::covered_by(const dlp::GridModel& cell, const dlp::GridModel& accepted) const {
  double mid = cell.params[0] + cell.params[1] / 2;
  bool x_in = mid >= accepted.params[0] - cell.stride &&
              mid <= accepted.params[0] + accepted.params[1] + cell.stride;
  bool y_in = std::abs(cell.params[2] - accepted.params[2]) <=
              accepted.params[3] + cell.stride;
  return x_in && y_in;
}

DlpResult dlp_search(const PointCloud& cloud, int n, ShapeKind kind, const DetectConfig& cfg) {
  require(n >= 2, Errc::invalid_argument, "grid size must be at least 2");
  check_cloud(cloud, n);
  auto start = std::chrono::steady_clock::now();

  double t = cfg.t >= 0 ? cfg.t : default_ddt_threshold(n, cloud.size());
  double min_r = cfg.min_radius >= 0 ? cfg.min_radius : default_min_radius(n);

  dlp::EngineConfig ecfg;
  ecfg.threshold = cfg.engine_threshold;
  ecfg.kappa = cfg.kappa;
  ecfg.max_depth = cfg.max_depth;
  ecfg.window = cfg.window;
  ecfg.refine_factor = cfg.refine_factor;
  ecfg.orientation = cfg.orientation;
  ecfg.collect_all = true;

  DlpResult out;
  std::vector<Candidate> hits;
  auto harvest = [&](dlp::ModelSpace& space, const std::vector<dlp::Detection>& found,
                     OpCounters& counters) {
    for (const dlp::Detection& d : found) {
      Candidate c;
      c.dims = kind == ShapeKind::Circle ? 3 : 4;
      for (int i = 0; i < c.dims; ++i)
        c.p[static_cast<std::size_t>(i)] = static_cast<int>(std::lround(d.model.params[static_cast<std::size_t>(i)]));
      Shape shape = candidate_shape(c, kind);
      if (!shape_fits(shape, n)) continue;
      if (kind == ShapeKind::Circle && c.p[2] < min_r) continue;
      if (kind == ShapeKind::Lens && (c.p[3] < min_r || c.p[1] < 2 * min_r)) continue;
      DdtResult exact = ddt(shape, cloud, t, n, counters);
      if (exact.verdict == 0) continue;
      c.gap = exact.d_in - exact.d_out;
      c.z = d.score;
      hits.push_back(c);
    }
    (void)space;
  };

  if (kind == ShapeKind::Circle) {
    CircleSpace space(cloud, n, cfg.kappa);
    dlp::DdlmoResult res = dlp::run_ddlmo(space, ecfg);
    harvest(space, res.found, space.counters);
    out.trace = std::move(res.trace);
    out.counters = space.counters;
  } else {
    LensSpace space(cloud, n, cfg.kappa);
    dlp::DdlmoResult res = dlp::run_ddlmo(space, ecfg);
    harvest(space, res.found, space.counters);
    out.trace = std::move(res.trace);
    out.counters = space.counters;
  }

  for (const Candidate& c : suppress(std::move(hits), kind))
    out.detections.push_back({candidate_shape(c, kind), c.gap, c.z});
  out.counters.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

ScalingReport scaling_report(ShapeKind kind, const std::vector<std::pair<int, int>>& sizes,
                             std::uint64_t seed, bool allow_huge) {
  require(!sizes.empty(), Errc::invalid_argument, "scaling needs at least one (n, m) size");
  int cap = kind == ShapeKind::Circle ? 200 : 40;
  for (auto [n, m] : sizes) {
    require(n >= 2 && m >= 0, Errc::invalid_argument, "sizes must have n >= 2, m >= 0");
    require(allow_huge || n <= cap, Errc::invalid_argument,
            "n=" + std::to_string(n) + " exceeds the desk-scale cap " + std::to_string(cap) +
                "; pass the huge override to proceed");
  }

  ScalingReport report;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    auto [n, m] = sizes[i];
    SceneSpec spec;
    spec.n = n;
    spec.m = m;
    spec.contrast = 3.0;
    spec.seed = seed + i;
    PointCloud cloud = gen_scene(spec);
    BruteResult res = brute_force_search(cloud, n, kind, DetectConfig{});
    long long n_ll = n;
    long long predicted = kind == ShapeKind::Circle ? n_ll * n_ll * n_ll * m
                                                    : n_ll * n_ll * n_ll * n_ll * m;
    report.rows.push_back({n, m, predicted, res.counters.membership_tests,
                           res.counters.wall_time});
  }

  if (report.rows.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double cnt = 0;
    for (const ScalingRow& row : report.rows) {
      if (row.measured <= 0) continue;
      double lx = std::log(static_cast<double>(row.n));
      double ly = std::log(static_cast<double>(row.measured));
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      cnt += 1;
    }
    if (cnt >= 2) report.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  }
  return report;
}

std::string ScalingReport::str(ShapeKind kind) const {
  std::ostringstream out;
  out << "n\tm\tpredicted(" << (kind == ShapeKind::Circle ? "n^3*m" : "n^4*m")
      << ")\tmeasured\twall_s\n";
  for (const ScalingRow& row : rows) {
    std::ostringstream wall;
    wall.setf(std::ios::fixed);
    wall.precision(3);
    wall << row.wall;
    out << row.n << '\t' << row.m << '\t' << row.predicted << '\t' << row.measured << '\t'
        << wall.str() << '\n';
  }
  out.setf(std::ios::fixed);
  out.precision(2);
  out << "log-log slope of measured vs n: " << slope << '\n';
  return out.str();
}

}  // namespace dlpkit::shapes
