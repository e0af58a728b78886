#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ordering.hpp"
#include "similarity.hpp"
#include "trace.hpp"

namespace dlpkit::dlp {

struct EngineConfig {
  double threshold = 0.1;            // acceptance level T for the final measure
  int max_depth = 12;                // refinement levels below the coarse grid
  double refine_factor = 2.0;        // stride shrink per level
  int window = 1;                    // refinement window in parent-stride units
  Orientation orientation = Orientation::Maximize;
  double kappa = 1.5;                // measure level per stride unit
  double relocation_fraction = 0.5;  // relocation threshold = T * fraction
  bool collect_all = false;          // keep relocating after a success
};

// A parameterized candidate model on a grid at some stride. Smaller stride
// means a more certain, more specific model.
struct GridModel {
  std::vector<double> params;
  double stride = 1.0;
  int depth = 0;  // refinement index; 0 = coarse level

  bool operator==(const GridModel& o) const {
    return params == o.params && stride == o.stride;
  }
};

// The model family a search runs over: candidate generation (the H operator),
// the match mapping F, and measure evaluation against the family's data.
class ModelSpace {
public:
  virtual ~ModelSpace() = default;

  virtual double final_stride() const { return 1.0; }
  virtual std::vector<GridModel> coarse_candidates() const = 0;
  // Refined candidates around m at stride m.stride / refine_factor within
  // +- window * m.stride per parameter; empty when the depth limit is hit.
  virtual std::vector<GridModel> refine(const GridModel& m, const EngineConfig& cfg) const = 0;
  virtual Measure match(double stride) const = 0;
  virtual double evaluate(const Measure& L, const GridModel& m) = 0;
  virtual std::string describe(const GridModel& m) const = 0;
  virtual bool canon_less(const GridModel& a, const GridModel& b) const;

  // Partial orders used by select_model and check_w. Defaults: uncertainty by
  // stride, generality by window containment, simplicity always equal.
  virtual Ordering model_mu(const GridModel& a, const GridModel& b) const;
  virtual Ordering model_mg(const GridModel& a, const GridModel& b) const;
  virtual Ordering model_ms(const GridModel& a, const GridModel& b) const;

  // True when a coarse cell's refinement region lies inside a model already
  // accepted, so relocating there could only rediscover it.
  virtual bool covered_by(const GridModel& cell, const GridModel& accepted) const {
    (void)cell;
    (void)accepted;
    return false;
  }
};

// F as a standalone operation.
Measure match_f(const ModelSpace& space, const GridModel& m);

// Overfitting-aware argmax: restrict to the score argmax set, keep maximal
// elements under >=Mu, break remaining ties by >=Mg, then take the canonical
// minimum. `arbitrary` reports a tie that only the canonical order resolved.
struct Selected {
  std::size_t index = 0;
  bool arbitrary = false;
};

Selected select_model(const std::vector<double>& scores, Orientation orientation,
                      const std::function<Ordering(std::size_t, std::size_t)>& mu,
                      const std::function<Ordering(std::size_t, std::size_t)>& mg,
                      const std::function<bool(std::size_t, std::size_t)>& canon_less);

// Relocation bookkeeping: coarse cells ranked best-first by their level-0
// score; `next` is the first unexplored cell.
struct RelocationQueue {
  std::vector<GridModel> cells;
  std::vector<double> scores;
  std::size_t next = 0;
};

// The specialization operator H. Refines around m when its score clears the
// relocation threshold; otherwise relocates to the best unexplored coarse
// cell. `exhausted` marks the depth limit / empty-queue outcome.
struct CandidateSet {
  std::vector<GridModel> models;
  int level = 0;
  bool exhausted = false;
  bool relocated = false;
  std::optional<GridModel> relocation_root;
  double relocation_score = 0.0;
};

CandidateSet specialize_h(const ModelSpace& space, const GridModel& m, double score,
                          const EngineConfig& cfg, RelocationQueue* reloc = nullptr);

// One learning step C: selects the best of H(m) under the measure matched to
// m, then reports the winner under its own matched measure.
struct LearnOutcome {
  bool exhausted = false;
  GridModel model;
  Measure measure;
  double score = 0.0;
  bool arbitrary_tie = false;
  std::int64_t evaluations = 0;
};

LearnOutcome learn_step(ModelSpace& space, const GridModel& from, const EngineConfig& cfg);

struct Detection {
  GridModel model;
  double score = 0.0;
};

struct DdlmoResult {
  std::vector<Detection> found;  // empty when the search exhausted
  trace::Trace trace;
};

// Coarse-to-fine dual optimization: sweep the coarse grid under the initial
// measure, descend best-first halving the stride, relocate on poor scores,
// accept when the matched measure reaches the final level and the score
// clears the threshold. The trace records the matched (model, measure) chain;
// each relocation starts a new segment.
DdlmoResult run_ddlmo(ModelSpace& space, const EngineConfig& cfg);

// W relation: mj = C(mi, E) for the engine's learning operator, and mj is
// better in at least one respect (more certain, more specific, simpler, or
// higher-scoring under its own matched measure).
bool check_w(ModelSpace& space, const GridModel& mi, const GridModel& mj,
             const EngineConfig& cfg);

bool score_clears(double score, double level, Orientation orientation);
bool score_better(double a, double b, Orientation orientation);

}  // namespace dlpkit::dlp
