#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dlpkit::trace {

enum class Source { Tested, Inferred };

// One event of a restoration or search trace. Restoration steps carry a
// lattice vector; search steps carry a model descriptor plus measure level and
// score. Inferred steps reference the tested step that forced them.
struct Step {
  std::int64_t seq = 0;
  std::string id;
  std::optional<std::string> vec;
  int verdict = 0;
  Source source = Source::Tested;
  std::optional<std::int64_t> forced_by;
  std::optional<int> chain_index;
  std::optional<double> level;
  std::optional<double> score;
  std::optional<int> segment;
  std::optional<std::int64_t> parent;
  bool chain = false;  // member of the matched (model, measure) chain
  std::optional<std::string> note;
};

struct Trace {
  std::vector<Step> steps;
  std::int64_t evaluations = 0;
  std::int64_t expansions = 0;

  Step& add(Step s);
  std::string to_jsonl() const;
  static Trace from_jsonl(const std::string& text);
  void save(const std::string& path) const;
  static Trace load(const std::string& path);
};

}  // namespace dlpkit::trace
