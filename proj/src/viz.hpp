#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lattice.hpp"
#include "trace.hpp"

namespace dlpkit::viz {

enum class BarClass {
  TestedRefuted,
  InferredRefuted,
  TestedVerified,
  InferredVerified,
  Untested,
};

const char* bar_class_name(BarClass c);

enum class Format { Svg, Text };
enum class Arrangement { Chronological, Pareto };

// Deterministic bar rendering of a restoration or search trace. Pareto
// arrangement sorts lattice vectors by weight then lexicographically; model
// traces sort by descending measure level. `highlight_weight` marks vectors
// of that weight.
std::string render_trace(const trace::Trace& trace, Format format, Arrangement arrangement,
                         std::optional<int> highlight_weight = std::nullopt);

struct ParetoBorder {
  std::vector<std::string> lower_ids;  // minimal verified elements
  std::vector<std::string> upper_ids;  // maximal refuted elements
  std::vector<lattice::BoolVec> lower, upper;  // filled for lattice traces
};

// Border between the verified and refuted regions. Lattice traces use the
// componentwise vector order; model traces use the refinement lineage.
// Rejects monotone-inconsistent traces naming the violating pair.
ParetoBorder pareto_border(const trace::Trace& trace);

}  // namespace dlpkit::viz
