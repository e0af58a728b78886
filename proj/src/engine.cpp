#include "engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "error.hpp"

namespace dlpkit::dlp {

bool score_better(double a, double b, Orientation orientation) {
  return orientation == Orientation::Maximize ? a > b : a < b;
}

bool score_clears(double score, double level, Orientation orientation) {
  return orientation == Orientation::Maximize ? score >= level : score <= level;
}

bool ModelSpace::canon_less(const GridModel& a, const GridModel& b) const {
  if (a.stride != b.stride) return a.stride > b.stride;
  return a.params < b.params;
}

Ordering ModelSpace::model_mu(const GridModel& a, const GridModel& b) const {
  if (a.stride > b.stride) return Ordering::Greater;
  if (a.stride < b.stride) return Ordering::Less;
  return Ordering::Equal;
}

Ordering ModelSpace::model_mg(const GridModel& a, const GridModel& b) const {
  auto contains = [](const GridModel& outer, const GridModel& inner) {
    if (outer.stride <= inner.stride) return false;
    if (outer.params.size() != inner.params.size()) return false;
    for (std::size_t i = 0; i < outer.params.size(); ++i)
      if (std::abs(outer.params[i] - inner.params[i]) > outer.stride + 1e-9) return false;
    return true;
  };
  if (a == b) return Ordering::Equal;
  if (contains(a, b)) return Ordering::Greater;
  if (contains(b, a)) return Ordering::Less;
  return Ordering::Incomparable;
}

Ordering ModelSpace::model_ms(const GridModel&, const GridModel&) const {
  return Ordering::Equal;
}

Measure match_f(const ModelSpace& space, const GridModel& m) { return space.match(m.stride); }

Selected select_model(const std::vector<double>& scores, Orientation orientation,
                      const std::function<Ordering(std::size_t, std::size_t)>& mu,
                      const std::function<Ordering(std::size_t, std::size_t)>& mg,
                      const std::function<bool(std::size_t, std::size_t)>& canon_less) {
  require(!scores.empty(), Errc::invalid_argument, "select_model needs a nonempty candidate list");

  double best = scores[0];
  for (double s : scores)
    if (score_better(s, best, orientation)) best = s;
  std::vector<std::size_t> tied;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (scores[i] == best) tied.push_back(i);

  auto keep_maximal = [&](const std::function<Ordering(std::size_t, std::size_t)>& ord) {
    std::vector<std::size_t> kept;
    for (std::size_t i : tied) {
      bool dominated = false;
      for (std::size_t j : tied)
        if (j != i && ord(j, i) == Ordering::Greater) dominated = true;
      if (!dominated) kept.push_back(i);
    }
    tied = kept;
  };

  if (tied.size() > 1) keep_maximal(mu);
  if (tied.size() > 1) keep_maximal(mg);

  Selected sel;
  sel.arbitrary = tied.size() > 1;
  sel.index = *std::min_element(tied.begin(), tied.end(),
                                [&](std::size_t a, std::size_t b) { return canon_less(a, b); });
  return sel;
}

CandidateSet specialize_h(const ModelSpace& space, const GridModel& m, double score,
                          const EngineConfig& cfg, RelocationQueue* reloc) {
  CandidateSet out;
  double reloc_level = cfg.threshold * cfg.relocation_fraction;
  bool poor = !score_clears(score, reloc_level, cfg.orientation);
  if (poor && reloc) {
    if (reloc->next >= reloc->cells.size()) {
      out.exhausted = true;
      return out;
    }
    const GridModel& cell = reloc->cells[reloc->next];
    out.relocated = true;
    out.relocation_root = cell;
    out.relocation_score = reloc->scores[reloc->next];
    ++reloc->next;
    out.level = cell.depth + 1;
    out.models = space.refine(cell, cfg);
    if (out.models.empty()) out.exhausted = true;
    return out;
  }
  if (m.depth >= cfg.max_depth) {
    out.exhausted = true;
    return out;
  }
  out.level = m.depth + 1;
  out.models = space.refine(m, cfg);
  if (out.models.empty()) out.exhausted = true;
  return out;
}

// Candidates are scored under their own matched measure: the measure
// co-refines with the models, so each H(m) generation is evaluated at the
// sharpness matched to its stride.
LearnOutcome learn_step(ModelSpace& space, const GridModel& from, const EngineConfig& cfg) {
  LearnOutcome out;
  if (from.depth >= cfg.max_depth) {
    out.exhausted = true;
    return out;
  }
  std::vector<GridModel> candidates = space.refine(from, cfg);
  if (candidates.empty()) {
    out.exhausted = true;
    return out;
  }
  Measure matched = space.match(candidates.front().stride);
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const GridModel& c : candidates) {
    scores.push_back(space.evaluate(matched, c));
    ++out.evaluations;
  }
  auto mu = [&](std::size_t a, std::size_t b) {
    return space.model_mu(candidates[a], candidates[b]);
  };
  auto mg = [&](std::size_t a, std::size_t b) {
    return space.model_mg(candidates[a], candidates[b]);
  };
  auto canon = [&](std::size_t a, std::size_t b) {
    return space.canon_less(candidates[a], candidates[b]);
  };
  Selected sel = select_model(scores, cfg.orientation, mu, mg, canon);
  out.model = candidates[sel.index];
  out.arbitrary_tie = sel.arbitrary;
  out.measure = matched;
  out.score = scores[sel.index];
  require(out.model.stride < from.stride, Errc::invalid_argument,
          "refinement did not produce a more specific model");
  return out;
}

DdlmoResult run_ddlmo(ModelSpace& space, const EngineConfig& cfg) {
  DdlmoResult result;
  trace::Trace& tr = result.trace;

  std::vector<GridModel> coarse = space.coarse_candidates();
  require(!coarse.empty(), Errc::invalid_argument, "model space has no coarse candidates");

  // Level-0 sweep: every coarse cell under its own matched (most uncertain)
  // measure.
  Measure level0 = space.match(coarse.front().stride);
  std::vector<double> coarse_scores;
  coarse_scores.reserve(coarse.size());
  for (const GridModel& c : coarse) {
    coarse_scores.push_back(space.evaluate(level0, c));
    ++tr.evaluations;
  }

  RelocationQueue queue;
  {
    std::vector<std::size_t> order(coarse.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (coarse_scores[a] != coarse_scores[b])
        return score_better(coarse_scores[a], coarse_scores[b], cfg.orientation);
      return space.canon_less(coarse[a], coarse[b]);
    });
    for (std::size_t i : order) {
      queue.cells.push_back(coarse[i]);
      queue.scores.push_back(coarse_scores[i]);
    }
  }

  double reloc_level = cfg.threshold * cfg.relocation_fraction;
  int segment = 0;

  while (queue.next < queue.cells.size()) {
    GridModel current = queue.cells[queue.next];
    double sweep_score = queue.scores[queue.next];
    ++queue.next;

    bool covered = false;
    for (const Detection& d : result.found)
      if (space.covered_by(current, d.model)) covered = true;
    if (covered) continue;

    bool promising = score_clears(sweep_score, reloc_level, cfg.orientation);
    bool at_final = current.stride <= space.final_stride();
    bool accepted = at_final ? score_clears(sweep_score, cfg.threshold, cfg.orientation)
                             : promising;
    trace::Step root;
    root.id = space.describe(current);
    root.verdict = accepted ? 1 : 0;
    root.level = level0.level;
    root.score = sweep_score;
    root.segment = segment;
    root.chain = true;
    if (!promising) root.note = "exhausted";
    std::int64_t parent_seq = tr.add(std::move(root)).seq;

    if (!promising) break;

    if (at_final) {
      if (accepted) {
        result.found.push_back({current, sweep_score});
        if (!cfg.collect_all) return result;
      }
      ++segment;
      continue;
    }

    // Descend: halve the stride until the final measure level is reached.
    while (true) {
      LearnOutcome step = learn_step(space, current, cfg);
      tr.evaluations += step.evaluations;
      if (step.exhausted) {
        ++segment;
        break;
      }
      bool final_level = step.model.stride <= space.final_stride();
      bool ok = final_level ? score_clears(step.score, cfg.threshold, cfg.orientation)
                            : score_clears(step.score, reloc_level, cfg.orientation);
      trace::Step st;
      st.id = space.describe(step.model);
      st.verdict = ok ? 1 : 0;
      st.level = step.measure.level;
      st.score = step.score;
      st.segment = segment;
      st.parent = parent_seq;
      st.chain = true;
      if (step.arbitrary_tie) st.note = "arbitrary-tie";
      parent_seq = tr.add(std::move(st)).seq;

      if (!ok) {  // dead end; relocate
        ++segment;
        break;
      }
      current = step.model;
      if (final_level) {
        result.found.push_back({current, step.score});
        ++segment;
        if (!cfg.collect_all) return result;
        break;
      }
    }
  }
  return result;
}

bool check_w(ModelSpace& space, const GridModel& mi, const GridModel& mj,
             const EngineConfig& cfg) {
  // Clause 1: mj must be what the learning operator produces from mi.
  LearnOutcome step = learn_step(space, mi, cfg);
  if (step.exhausted || !(step.model == mj)) return false;

  // Clause 2: improvement in at least one characteristic.
  if (space.model_mu(mi, mj) == Ordering::Greater) return true;
  if (space.model_mg(mi, mj) == Ordering::Greater) return true;
  if (space.model_ms(mj, mi) == Ordering::Greater) return true;
  double li = space.evaluate(space.match(mi.stride), mi);
  double lj = space.evaluate(space.match(mj.stride), mj);
  return score_better(lj, li, cfg.orientation);
}

}  // namespace dlpkit::dlp
