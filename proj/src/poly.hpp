#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lattice.hpp"
#include "ordering.hpp"
#include "rational.hpp"

namespace dlpkit::models {

// Per-variable powers, aligned with the owning model's variable list.
using Monomial = std::vector<int>;

int total_degree(const Monomial& m);
std::string monomial_str(const Monomial& m, const std::vector<std::string>& variables);

// Coefficient of one term: a known rational or a named unknown.
struct Coefficient {
  bool known = true;
  Rational value;      // when known
  std::string symbol;  // when unknown

  static Coefficient known_of(Rational r) { return {true, r, {}}; }
  static Coefficient unknown_of(std::string s) { return {false, {}, std::move(s)}; }
};

struct Term {
  Monomial monomial;
  Coefficient coefficient;
};

// Polynomial phenomena model: sum of terms = rhs. Terms are kept in graded
// lexicographic order; known-zero terms are dropped at construction.
struct PolyModel {
  std::vector<std::string> variables;
  std::vector<Term> terms;
  Rational rhs;

  std::string str() const;
  const Term* term_at(const Monomial& m) const;
  bool fully_known() const;
};

// Grammar: terms `[coeff][var[^power]...]` joined by +/-, then `= constant`.
// Single letters outside the variable list are unknown-coefficient symbols.
PolyModel parse_poly(const std::string& text, const std::vector<std::string>& variables);

struct ModelMeasures {
  int nuc = 0;                  // number of unknown coefficients
  int hp = 0;                   // highest single-variable power
  std::vector<Monomial> hpv;    // monomials realizing hp, one per variable
  int sp = 0;                   // sum of powers over all terms
};

ModelMeasures measures(const PolyModel& m);

// True iff some assignment of mj's unknowns (rationals including 0, or mi's
// unknown symbols, injectively) turns mj into exactly mi after dropping the
// zero terms. Known coefficients of mj must match mi exactly.
bool c_specializes(const PolyModel& mi, const PolyModel& mj);

Ordering order_mu(const PolyModel& mi, const PolyModel& mj);  // by NUC
Ordering order_mg(const PolyModel& mi, const PolyModel& mj);  // by C-specialization
Ordering order_ms(const PolyModel& mi, const PolyModel& mj);  // by SP, smaller = simpler

// Bit positions for Boolean parameterization, one per monomial slot.
struct ParamTemplate {
  std::vector<std::string> variables;
  std::vector<Monomial> slots;
};

// Bit i = 1 iff the coefficient at slot i is unknown; absent slots encode as 0.
lattice::BoolVec parameterize(const PolyModel& m, const ParamTemplate& tpl);

// Finite set of value tuples, one value per model variable.
struct EmpiricalSystem {
  std::string name;
  std::vector<std::vector<double>> objects;
};

// 1 iff every tuple satisfies |lhs - rhs| <= tolerance. The model must be
// fully known.
int boolean_similarity(const PolyModel& m, const EmpiricalSystem& e, double tolerance);

double eval_lhs(const PolyModel& m, const std::vector<double>& tuple);

}  // namespace dlpkit::models
