#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "engine.hpp"
#include "error.hpp"
#include "intervals.hpp"
#include "mbf.hpp"
#include "poly.hpp"
#include "shapes.hpp"
#include "similarity.hpp"

using namespace dlpkit;
using namespace dlpkit::dlp;

namespace {

// 1-D toy family: the hidden optimum sits at pos = 11 on [0, 16].
class ToyLineSpace final : public ModelSpace {
public:
  explicit ToyLineSpace(double s0 = 4.0, bool level_free = true)
      : s0_(s0), level_free_(level_free) {}

  double final_stride() const override { return 1.0; }
  std::vector<GridModel> coarse_candidates() const override {
    std::vector<GridModel> out;
    for (double p = 0; p <= 16.0; p += s0_) out.push_back({{p}, s0_, 0});
    return out;
  }
  std::vector<GridModel> refine(const GridModel& m, const EngineConfig& cfg) const override {
    if (m.stride <= final_stride()) return {};
    double h = m.stride / cfg.refine_factor;
    std::vector<GridModel> out;
    for (int a = -2 * cfg.window; a <= 2 * cfg.window; ++a) {
      double p = std::clamp(m.params[0] + a * h, 0.0, 16.0);
      out.push_back({{p}, h, m.depth + 1});
    }
    std::sort(out.begin(), out.end(),
              [](const GridModel& x, const GridModel& y) { return x.params < y.params; });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const GridModel& x, const GridModel& y) {
                            return x.params == y.params;
                          }),
              out.end());
    return out;
  }
  Measure match(double stride) const override {
    return Measure{"toy", level_free_ ? 0.0 : stride, Orientation::Maximize, 0, 0, 0};
  }
  double evaluate(const Measure&, const GridModel& m) override {
    ++evals;
    return 10.0 - std::abs(m.params[0] - 11.0);
  }
  std::string describe(const GridModel& m) const override {
    return "pos=" + std::to_string(m.params[0]);
  }

  long long evals = 0;

private:
  double s0_;
  bool level_free_;
};

Ordering order_none(std::size_t, std::size_t) { return Ordering::Incomparable; }

}  // namespace

TEST_CASE("select_model: unique maximum wins") {
  std::vector<double> scores{1.0, 5.0, 3.0};
  Selected s = select_model(scores, Orientation::Maximize, order_none, order_none,
                            [](std::size_t a, std::size_t b) { return a < b; });
  CHECK(s.index == 1);
  CHECK(!s.arbitrary);
  Selected mins = select_model(scores, Orientation::Minimize, order_none, order_none,
                               [](std::size_t a, std::size_t b) { return a < b; });
  CHECK(mins.index == 0);
  CHECK_THROWS_AS(select_model({}, Orientation::Maximize, order_none, order_none,
                               [](std::size_t, std::size_t) { return true; }),
                  Error);
}

TEST_CASE("select_model: score ties break toward the more uncertain model") {
  // the overfitting guard: among equal scores keep the NUC-maximal model
  std::vector<std::string> xy{"x", "y"};
  std::vector<models::PolyModel> cands{models::parse_poly("5x + by^2 = 0", xy),
                                       models::parse_poly("5x + 4y^2 = 0", xy)};
  std::vector<double> scores{1.0, 1.0};
  auto mu = [&](std::size_t a, std::size_t b) { return models::order_mu(cands[a], cands[b]); };
  auto mg = [&](std::size_t a, std::size_t b) { return models::order_mg(cands[a], cands[b]); };
  Selected s = select_model(scores, Orientation::Maximize, mu, mg,
                            [](std::size_t a, std::size_t b) { return a < b; });
  CHECK(s.index == 0);  // NUC 1 beats NUC 0
  CHECK(!s.arbitrary);
}

TEST_CASE("select_model: an all-tie antichain falls back to canonical order and is flagged") {
  std::vector<double> scores{2.0, 2.0, 2.0};
  Selected s = select_model(scores, Orientation::Maximize, order_none, order_none,
                            [](std::size_t a, std::size_t b) { return a < b; });
  CHECK(s.index == 0);
  CHECK(s.arbitrary);
}

TEST_CASE("select_model is invariant under strictly monotone rescaling") {
  std::vector<double> scores{0.25, 1.5, -3.0, 1.5, 0.5};
  auto canon = [](std::size_t a, std::size_t b) { return a < b; };
  Selected base = select_model(scores, Orientation::Maximize, order_none, order_none, canon);
  std::vector<double> affine, shrunk;
  for (double s : scores) affine.push_back(2 * s + 1);
  for (double s : scores) shrunk.push_back(s / 4 - 3);
  CHECK(select_model(affine, Orientation::Maximize, order_none, order_none, canon).index ==
        base.index);
  CHECK(select_model(shrunk, Orientation::Maximize, order_none, order_none, canon).index ==
        base.index);
}

TEST_CASE("gaussian baseline: closed form agrees with numeric quadrature") {
  intervals::KernelMeasure L{5.0, 10.0, 1.1};
  intervals::ModelClass cls{5.0, 5.0};
  CHECK(intervals::kernel_baseline(L, cls) == doctest::Approx(1.0));

  intervals::KernelMeasure sharp{3.0, 1.5, 1.1};
  intervals::ModelClass narrow{2.0, 1.0};
  auto gauss = [&](double x) {
    double d = (x - sharp.mu) / sharp.sigma;
    return std::exp(-0.5 * d * d);
  };
  auto simpson = [&](double a, double b) {
    int steps = 4000;
    double h = (b - a) / steps, sum = gauss(a) + gauss(b);
    for (int i = 1; i < steps; ++i) sum += gauss(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
  };
  double numeric = simpson(1.0, 3.0) / simpson(0.0, 10.0);
  CHECK(intervals::kernel_baseline(sharp, narrow) == doctest::Approx(numeric).epsilon(1e-8));
}

TEST_CASE("a point mass at the class center drives the kernel score to its maximum") {
  std::vector<double> mass(200, 2.0);
  intervals::ModelClass cls{2.0, 0.5};
  for (double sigma : {5.0, 1.0, 0.25, 0.05}) {
    intervals::KernelMeasure L{2.0, sigma, 1.1};
    CHECK(intervals::kernel_mass_ratio(L, cls, mass) == doctest::Approx(1.0));
  }
  intervals::KernelMeasure sharp{2.0, 0.05, 1.1};
  CHECK(intervals::kernel_accepts(sharp, cls, mass) == 1);
}

TEST_CASE("match_f maps stride to the family level and preserves the orders") {
  shapes::PointCloud empty_cloud;
  shapes::CircleSpace space(empty_cloud, 100, 1.5);
  GridModel coarse{{32, 40, 16}, 8, 0};
  Measure L = match_f(space, coarse);
  CHECK(L.family == "density");
  CHECK(L.level == doctest::Approx(1.5 * 7));
  CHECK(match_f(space, GridModel{{1, 1, 1}, 1, 3}).level == doctest::Approx(0.0));

  // homomorphism over a stride chain, via the generic checker
  std::vector<GridModel> chain{{{32, 40, 16}, 8, 0}, {{32, 40, 14}, 4, 1},
                               {{32, 40, 13}, 2, 2}, {{32, 40, 12}, 1, 3}};
  std::vector<Measure> measures;
  std::vector<std::size_t> f_map;
  for (const GridModel& m : chain) {
    f_map.push_back(measures.size());
    measures.push_back(match_f(space, m));
  }
  auto mu = [&](std::size_t a, std::size_t b) { return space.model_mu(chain[a], chain[b]); };
  auto mg = [&](std::size_t a, std::size_t b) { return space.model_mg(chain[a], chain[b]); };
  auto ms = [&](std::size_t a, std::size_t b) { return space.model_ms(chain[a], chain[b]); };
  CHECK(verify_match_mapping_generic(chain.size(), measures, f_map, mu, mg, ms).ok());
}

TEST_CASE("radius-accept family: measures accept every radius up to r + e") {
  // the identity-style match mapping on circle models M(c, r)
  auto accepts = [](const Measure& L, double radius) { return radius <= L.aux ? 1 : 0; };
  auto match_radius = [](double r) {
    return Measure{"radius-accept", r + 0.5, Orientation::Maximize, 0, 0.5, r + 0.5};
  };
  Measure L = match_radius(12.0);
  CHECK(accepts(L, 12.0) == 1);
  CHECK(accepts(L, 12.5) == 1);
  CHECK(accepts(L, 13.0) == 0);
  CHECK(order_lu(match_radius(13), match_radius(12)) == Ordering::Greater);
}

TEST_CASE("specialize_h refines a circle into the 5x5x5 block at half stride") {
  shapes::PointCloud empty_cloud;
  shapes::CircleSpace space(empty_cloud, 100, 1.5);
  EngineConfig cfg;
  GridModel m{{32, 40, 16}, 8, 0};
  CandidateSet set = specialize_h(space, m, /*score=*/cfg.threshold, cfg, nullptr);
  CHECK(!set.exhausted);
  CHECK(!set.relocated);
  CHECK(set.models.size() == 125);
  for (const GridModel& c : set.models) {
    CHECK(c.stride == doctest::Approx(4.0));
    CHECK(std::abs(c.params[0] - 32) <= 8.0);
    CHECK(std::abs(c.params[1] - 40) <= 8.0);
    CHECK(std::abs(c.params[2] - 16) <= 8.0);
  }
}

TEST_CASE("specialize_h signals exhaustion at the depth limit") {
  ToyLineSpace space;
  EngineConfig cfg;
  cfg.max_depth = 2;
  GridModel deep{{8}, 2, 2};
  CandidateSet set = specialize_h(space, deep, cfg.threshold, cfg, nullptr);
  CHECK(set.exhausted);
  GridModel final_level{{8}, 1, 3};
  cfg.max_depth = 12;
  CHECK(specialize_h(space, final_level, cfg.threshold, cfg, nullptr).exhausted);
}

TEST_CASE("specialize_h relocates to unexplored coarse cells on poor scores") {
  ToyLineSpace space;
  EngineConfig cfg;
  RelocationQueue queue;
  queue.cells = {{{12}, 4, 0}, {{8}, 4, 0}, {{0}, 4, 0}};
  queue.scores = {9.0, 7.0, -1.0};
  double poor = cfg.threshold * cfg.relocation_fraction - 1.0;

  std::set<double> roots;
  CandidateSet first = specialize_h(space, GridModel{{4}, 4, 0}, poor, cfg, &queue);
  CHECK(first.relocated);
  REQUIRE(first.relocation_root.has_value());
  roots.insert(first.relocation_root->params[0]);
  CandidateSet second = specialize_h(space, GridModel{{4}, 4, 0}, poor, cfg, &queue);
  REQUIRE(second.relocation_root.has_value());
  roots.insert(second.relocation_root->params[0]);
  CHECK(roots == std::set<double>{12.0, 8.0});  // each relocation pops a fresh cell

  queue.next = queue.cells.size();
  CHECK(specialize_h(space, GridModel{{4}, 4, 0}, poor, cfg, &queue).exhausted);
}

TEST_CASE("learn_step strictly refines and reports the matched measure") {
  ToyLineSpace space;
  EngineConfig cfg;
  GridModel from{{12}, 4, 0};
  LearnOutcome out = learn_step(space, from, cfg);
  REQUIRE(!out.exhausted);
  CHECK(out.model.stride < from.stride);
  // 10 and 12 tie at score 9; the canonical order resolves toward 10
  CHECK(out.model.params[0] == doctest::Approx(10.0));
  CHECK(out.measure.family == "toy");
  CHECK(out.score == doctest::Approx(9.0));
}

TEST_CASE("run_ddlmo localizes the toy optimum and satisfies check_w step by step") {
  ToyLineSpace space;
  EngineConfig cfg;
  cfg.threshold = 8.0;
  DdlmoResult res = run_ddlmo(space, cfg);
  REQUIRE(res.found.size() == 1);
  CHECK(res.found[0].model.params[0] == doctest::Approx(11.0));
  CHECK(res.found[0].model.stride == doctest::Approx(1.0));

  // measure level is non-increasing within each segment, and consecutive
  // chain steps satisfy the W relation
  std::vector<const trace::Step*> chain;
  for (const trace::Step& s : res.trace.steps)
    if (s.chain && s.segment == res.trace.steps.front().segment) chain.push_back(&s);
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    CHECK(*chain[i]->level >= *chain[i + 1]->level);

  // rebuild the models along the chain from the recorded descriptors
  GridModel cur{{12}, 4, 0};  // the coarse argmax: pos 12 scores 9
  for (int depth = 0; depth < 2; ++depth) {
    LearnOutcome next = learn_step(space, cur, cfg);
    CHECK(check_w(space, cur, next.model, cfg));
    CHECK(!check_w(space, cur, cur, cfg));  // no progress is never W-true
    cur = next.model;
  }
}

TEST_CASE("run_ddlmo on an empty landscape ends refuted with no model") {
  // all scores far below the threshold
  class FlatSpace final : public ModelSpace {
  public:
    double final_stride() const override { return 1.0; }
    std::vector<GridModel> coarse_candidates() const override {
      return {{{0}, 4, 0}, {{4}, 4, 0}, {{8}, 4, 0}};
    }
    std::vector<GridModel> refine(const GridModel& m, const EngineConfig& cfg) const override {
      if (m.stride <= 1.0) return {};
      return {{{m.params[0]}, m.stride / cfg.refine_factor, m.depth + 1}};
    }
    Measure match(double stride) const override {
      return Measure{"flat", stride, Orientation::Maximize, 0, 0, 0};
    }
    double evaluate(const Measure&, const GridModel&) override { return 0.0; }
    std::string describe(const GridModel& m) const override {
      return "pos=" + std::to_string(m.params[0]);
    }
  };
  FlatSpace space;
  EngineConfig cfg;
  cfg.threshold = 5.0;
  DdlmoResult res = run_ddlmo(space, cfg);
  CHECK(res.found.empty());
  REQUIRE(!res.trace.steps.empty());
  CHECK(res.trace.steps.back().verdict == 0);
  CHECK(res.trace.steps.back().note == std::optional<std::string>("exhausted"));
}

TEST_CASE("check_w clause fixtures with neutralized uncertainty order") {
  // Space where refinement does not change the uncertainty or simplicity
  // orders, isolating the generality and score clauses.
  class ClauseSpace final : public ModelSpace {
  public:
    explicit ClauseSpace(bool general) : general_(general) {}
    double final_stride() const override { return 1.0; }
    std::vector<GridModel> coarse_candidates() const override { return {{{8}, 4, 0}}; }
    std::vector<GridModel> refine(const GridModel& m, const EngineConfig& cfg) const override {
      if (m.stride <= 1.0) return {};
      return {{{m.params[0]}, m.stride / cfg.refine_factor, m.depth + 1}};
    }
    Measure match(double stride) const override {
      return Measure{"clause", stride, Orientation::Maximize, 0, 0, 0};
    }
    double evaluate(const Measure&, const GridModel& m) override {
      return 5.0 - m.depth;  // children score strictly lower
    }
    std::string describe(const GridModel& m) const override {
      return "pos=" + std::to_string(m.params[0]);
    }
    Ordering model_mu(const GridModel&, const GridModel&) const override {
      return Ordering::Equal;
    }
    Ordering model_mg(const GridModel& a, const GridModel& b) const override {
      if (!general_) return Ordering::Incomparable;
      return ModelSpace::model_mg(a, b);
    }
    Ordering model_ms(const GridModel&, const GridModel&) const override {
      return Ordering::Equal;
    }

  private:
    bool general_;
  };

  EngineConfig cfg;
  GridModel mi{{8}, 4, 0};
  {
    ClauseSpace space(true);  // generality clause alone carries W
    LearnOutcome out = learn_step(space, mi, cfg);
    REQUIRE(!out.exhausted);
    CHECK(out.score < 5.0);  // lower-scoring child
    CHECK(check_w(space, mi, out.model, cfg));
  }
  {
    ClauseSpace space(false);  // no clause left: W must fail
    LearnOutcome out = learn_step(space, mi, cfg);
    REQUIRE(!out.exhausted);
    CHECK(!check_w(space, mi, out.model, cfg));
  }
}

TEST_CASE("the single-measure case degenerates to exhaustive argmax with select_model") {
  ToyLineSpace space(1.0);  // coarse grid already at the final stride
  EngineConfig cfg;
  cfg.threshold = 0.0;
  DdlmoResult res = run_ddlmo(space, cfg);
  REQUIRE(res.found.size() == 1);

  ToyLineSpace oracle_space(1.0);
  auto cands = oracle_space.coarse_candidates();
  std::vector<double> scores;
  for (const GridModel& c : cands)
    scores.push_back(oracle_space.evaluate(oracle_space.match(1.0), c));
  Selected sel = select_model(
      scores, cfg.orientation,
      [&](std::size_t a, std::size_t b) { return oracle_space.model_mu(cands[a], cands[b]); },
      [&](std::size_t a, std::size_t b) { return oracle_space.model_mg(cands[a], cands[b]); },
      [&](std::size_t a, std::size_t b) {
        return oracle_space.canon_less(cands[a], cands[b]);
      });
  CHECK(res.found[0].model.params == cands[sel.index].params);
}

TEST_CASE("orientation minimize flips thresholds and comparisons") {
  CHECK(score_better(1.0, 2.0, Orientation::Minimize));
  CHECK(score_clears(1.0, 2.0, Orientation::Minimize));
  CHECK(!score_clears(3.0, 2.0, Orientation::Minimize));
  CHECK(score_clears(3.0, 2.0, Orientation::Maximize));
}

TEST_CASE("Boolean verdicts over a parameterized model lattice restore through mbf") {
  // Four-slot template: x^2, y, x, 1 over the base model
  // 9x^2 + 3y + 7x = 10; each subset of unknown slots is one lattice model.
  std::vector<std::string> xy{"x", "y"};
  const char* known[4] = {"9x^2", "3y", "7x", "9"};
  const char* unknown[4] = {"ax^2", "by", "cx", "d"};
  models::ParamTemplate tpl{xy, {{2, 0}, {0, 1}, {1, 0}, {0, 0}}};

  std::vector<models::PolyModel> lattice_models(16, models::parse_poly("0 = 10", xy));
  for (std::uint32_t w = 0; w < 16; ++w) {
    std::string text;
    for (int slot = 0; slot < 4; ++slot) {
      bool is_unknown = (w >> (3 - slot)) & 1;
      if (!text.empty()) text += " + ";
      text += is_unknown ? unknown[slot] : known[slot];
    }
    lattice_models[w] = models::parse_poly(text + " = 10", xy);
    CHECK(models::parameterize(lattice_models[w], tpl).word == w);
  }

  // monotone verdict: the x^2 slot must be unknown (dominance over 1000)
  mbf::Oracle oracle = mbf::callback_oracle([&](const lattice::BoolVec& v) {
    return models::measures(lattice_models[v.word]).nuc > 0 &&
                   !lattice_models[v.word].terms[1].coefficient.known
               ? 1
               : 0;
  });
  // slot x^2 is the graded-lex second term (x, x^2, ...) for full models; use
  // the parameterization bit instead: component 1 set
  mbf::Oracle dominance = mbf::callback_oracle(
      [&](const lattice::BoolVec& v) { return v.bit(1) ? 1 : 0; });
  (void)oracle;

  mbf::RestoreResult res = mbf::restore(4, dominance);
  mbf::LowerUnits units = mbf::lower_units(res.table);
  REQUIRE(units.units.size() == 1);
  CHECK(units.units[0].str() == "1000");

  // the trace's expansion bookkeeping replays exactly through mbf::expand
  mbf::AssignmentState state(4);
  std::size_t i = 0;
  while (i < res.trace.steps.size()) {
    const trace::Step& s = res.trace.steps[i];
    REQUIRE(s.source == trace::Source::Tested);
    auto forced = mbf::expand(state, lattice::BoolVec::parse(*s.vec), s.verdict);
    std::set<std::string> expected, got;
    for (const auto& f : forced) expected.insert(f.v.str() + std::to_string(f.value));
    std::size_t j = i + 1;
    for (; j < res.trace.steps.size() &&
           res.trace.steps[j].source == trace::Source::Inferred;
         ++j)
      got.insert(*res.trace.steps[j].vec + std::to_string(res.trace.steps[j].verdict));
    CHECK(got == expected);
    i = j;
  }
}
