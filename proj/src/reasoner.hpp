#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dlpkit::reason {

// Evidence term: an atom, or a union/intersection of terms. Terms are kept
// normalized: same-operator nests are flattened, children sorted and deduped,
// single-child operators collapse to the child.
struct Evidence {
  enum class Kind { Atom, Union, Intersect };
  Kind kind = Kind::Atom;
  std::string atom;
  std::vector<Evidence> children;

  static Evidence atom_of(std::string name);
  static Evidence combine(Kind op, const Evidence& a, const Evidence& b);

  std::string key() const;  // canonical text, e.g. "(e1 u e2)"
  int depth() const;        // atoms are 0; operators add 1
  bool operator==(const Evidence& o) const { return key() == o.key(); }
  bool operator<(const Evidence& o) const { return key() < o.key(); }
};

Evidence parse_evidence(const std::string& text);

struct Fact {
  std::string from_model;
  Evidence evidence;
  std::string to_model;

  std::string str() const;  // "w(m1, (e1 u e2), m3)"
  bool operator==(const Fact& o) const { return str() == o.str(); }
  bool operator<(const Fact& o) const { return str() < o.str(); }
};

Fact parse_fact(const std::string& line);

// KB file: one `w(<from>, <evidence>, <to>)` per line; blank lines skipped.
std::vector<Fact> parse_kb(const std::string& text);
std::vector<Fact> load_kb(const std::string& path);

struct RuleSet {
  bool ca = true;   // w(i,e1,k) v w(i,e2,k) => w(i, e1 u e2, k)
  bool da = true;   // w(i,e1,k) & w(i,e2,k) => w(i, e1 n e2, k)
  bool dca = true;  // w(i,e1,k) & w(i,e2,k) => w(i, e1 u e2, k)
  bool ia = true;   // w(i, e1 n e2, k) => w(i, e1 u e2, k)
  bool ta = true;   // w(i,e,j) & w(j,e,k) => w(i,e,k)

  static RuleSet all() { return {}; }
  static RuleSet only_ta() { return {false, false, false, false, true}; }
};

// Least fixpoint of the enabled rules, with generated evidence terms limited
// to nesting depth `depth` over the KB's atoms.
std::set<Fact> closure(const std::vector<Fact>& kb, int depth, RuleSet rules = RuleSet::all());

struct Derivation {
  struct Line {
    std::string rule;  // "given", "CA", "DA", "DCA", "IA", "TA"
    std::vector<std::size_t> premises;
    Fact fact;
  };
  std::vector<Line> lines;  // premises precede uses; last line is the goal

  std::size_t rule_steps() const;  // non-given lines
  std::string str() const;
};

// Breadth-first over rule applications; Absent (nullopt) when the goal is not
// in the depth-bounded closure.
std::optional<Derivation> derive(const std::vector<Fact>& kb, const Fact& goal, int depth,
                                 RuleSet rules = RuleSet::all());

}  // namespace dlpkit::reason
