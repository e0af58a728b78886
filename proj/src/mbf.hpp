#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lattice.hpp"
#include "trace.hpp"

namespace dlpkit::mbf {

using lattice::BoolVec;
using lattice::ChainCover;

// Total truth table of f: {0,1}^n -> {0,1}, addressed by vector word.
struct FnTable {
  int n = 0;
  std::vector<std::uint8_t> values;

  explicit FnTable(int dim);
  int value(std::uint32_t word) const { return values[word]; }
  int value(const BoolVec& v) const { return values[v.word]; }
  void set(std::uint32_t word, int val) { values[word] = static_cast<std::uint8_t>(val); }
  std::uint32_t size() const { return static_cast<std::uint32_t>(values.size()); }
};

// min over algorithms of the worst-case query count: C(n,n/2) + C(n,n/2+1).
long long shannon_bound(int n);

enum class Status : std::uint8_t { Unknown, Zero, One };
enum class Origin : std::uint8_t { None, Tested, Inferred };

// Working state of the restoration. Monotone-consistent by construction:
// expand refuses any assignment that would order a One below a Zero.
struct AssignmentState {
  int n = 0;
  std::vector<Status> status;
  std::vector<Origin> origin;
  std::vector<std::uint32_t> forcer;  // tested word that forced an inferred value

  explicit AssignmentState(int dim);
  bool determined(std::uint32_t word) const { return status[word] != Status::Unknown; }
  bool complete() const;
};

struct Forced {
  BoolVec v;
  int value;
};

// Records v as tested with the given value and propagates it monotonically:
// a 0 forces the whole down-set of v to 0, a 1 forces the up-set to 1.
// Returns the newly forced assignments (v itself excluded), ascending by word.
std::vector<Forced> expand(AssignmentState& state, const BoolVec& v, int value);

// Oracle that answers f(v) for a hidden monotone function.
struct Oracle {
  std::function<int(const BoolVec&)> fn;
  std::string description;
};

Oracle table_oracle(const FnTable& table);  // validates monotonicity upfront
Oracle table_oracle_from_file(const std::string& path, int n);
Oracle expr_oracle(int n, const std::string& formula);  // AND/OR/constants, no negation
Oracle callback_oracle(std::function<int(const BoolVec&)> fn, std::string description = "callback");

struct QueryStats {
  long long queries_asked = 0;
  std::vector<long long> per_chain_queries;
  long long bound = 0;
};

struct RestoreResult {
  FnTable table;
  QueryStats stats;
  trace::Trace trace;
};

// Test-observation hook, called after every oracle answer has been expanded.
struct RestoreHooks {
  std::function<void(const AssignmentState&, const ChainCover&)> after_answer;
};

// Hansel-chain restoration: chains in canonical (shortest-first) order; on the
// current chain, binary-search the unknown segment probing its middle element
// (rounding low) and expand after every answer. If the oracle aborts, the
// partial trace is left in *partial (when given) before the abort error is
// rethrown.
RestoreResult restore(int n, const Oracle& oracle, const RestoreHooks* hooks = nullptr,
                      trace::Trace* partial = nullptr);

// Violating pair (v, w) with v <= w, f(v)=1, f(w)=0; empty when monotone.
std::optional<std::pair<BoolVec, BoolVec>> monotone_violation(const FnTable& table);
bool is_monotone(const FnTable& table);

struct LowerUnits {
  std::vector<BoolVec> units;     // all minimal vectors of f^-1(1)
  std::vector<BoolVec> smallest;  // the subset of minimum weight
};

LowerUnits lower_units(const FnTable& table);

// Disjunctive normal form over x1..xn of the given lower units.
std::string units_dnf(int n, const std::vector<BoolVec>& units);

}  // namespace dlpkit::mbf
