#include "poly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "error.hpp"

namespace dlpkit::models {

int total_degree(const Monomial& m) {
  int d = 0;
  for (int p : m) d += p;
  return d;
}

std::string monomial_str(const Monomial& m, const std::vector<std::string>& variables) {
  std::string out;
  for (size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    out += variables[i];
    if (m[i] > 1) out += "^" + std::to_string(m[i]);
  }
  return out.empty() ? "1" : out;
}

namespace {

// Graded lexicographic: lower total degree first, ties by higher power on the
// earlier variable.
bool monomial_less(const Monomial& a, const Monomial& b) {
  int da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] > b[i];
  return false;
}

[[noreturn]] void parse_fail(const std::string& text, size_t pos, const std::string& what) {
  fail(Errc::parse,
       "polynomial parse error at position " + std::to_string(pos) + ": " + what +
           " in \"" + text + "\"");
}

struct TermScanner {
  const std::string& text;
  const std::vector<std::string>& variables;
  size_t pos;
  size_t end;

  void skip_ws() {
    while (pos < end && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= end;
  }

  int match_variable() {  // longest prefix match; -1 when none
    int best = -1;
    size_t best_len = 0;
    for (size_t i = 0; i < variables.size(); ++i) {
      const std::string& v = variables[i];
      if (v.size() > best_len && text.compare(pos, v.size(), v) == 0) {
        best = static_cast<int>(i);
        best_len = v.size();
      }
    }
    if (best >= 0) pos += best_len;
    return best;
  }

  std::string scan_number() {
    size_t start = pos;
    while (pos < end && (std::isdigit(static_cast<unsigned char>(text[pos])) ||
                         text[pos] == '.' || text[pos] == '/'))
      ++pos;
    return text.substr(start, pos - start);
  }

  int scan_power() {  // after '^'
    skip_ws();
    size_t start = pos;
    while (pos < end && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) parse_fail(text, start, "exponent expected after '^'");
    int p = std::stoi(text.substr(start, pos - start));
    if (p < 1 || p > 20) parse_fail(text, start, "exponent must be in 1..20");
    return p;
  }
};

Term scan_term(const std::string& text, const std::vector<std::string>& variables,
               size_t from, size_t to, bool negative) {
  TermScanner sc{text, variables, from, to};
  Monomial powers(variables.size(), 0);
  std::optional<Rational> number;
  std::optional<std::string> symbol;
  bool any = false;

  while (!sc.at_end()) {
    char c = text[sc.pos];
    if (c == '*') {
      ++sc.pos;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t at = sc.pos;
      std::string lit = sc.scan_number();
      Rational r;
      try {
        r = Rational::parse(lit);
      } catch (const Error&) {
        parse_fail(text, at, "bad numeric literal '" + lit + "'");
      }
      if (!any && !number && !symbol) {
        number = r;  // leading coefficient
      } else if (r == Rational(1)) {
        // unit factor, e.g. "d*1"
      } else {
        parse_fail(text, at, "unexpected number '" + lit + "' inside a term");
      }
      any = true;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t at = sc.pos;
      int var = sc.match_variable();
      if (var >= 0) {
        int p = 1;
        sc.skip_ws();
        if (sc.pos < sc.end && text[sc.pos] == '^') {
          ++sc.pos;
          p = sc.scan_power();
        }
        powers[static_cast<size_t>(var)] += p;
        any = true;
        continue;
      }
      // single-letter unknown coefficient symbol
      if (symbol) parse_fail(text, at, "second unknown symbol in one term");
      if (number) parse_fail(text, at, "term mixes a numeric coefficient with a symbol");
      symbol = std::string(1, c);
      ++sc.pos;
      any = true;
      continue;
    }
    parse_fail(text, sc.pos, std::string("unexpected character '") + c + "'");
  }
  if (!any) parse_fail(text, from, "empty term");

  Term t;
  t.monomial = std::move(powers);
  if (symbol) {
    t.coefficient = Coefficient::unknown_of(*symbol);  // unknowns absorb the sign
  } else {
    Rational r = number.value_or(Rational(1));
    if (negative) r = -r;
    t.coefficient = Coefficient::known_of(r);
  }
  return t;
}

}  // namespace

PolyModel parse_poly(const std::string& text, const std::vector<std::string>& variables) {
  require(!variables.empty(), Errc::invalid_argument, "variable list must be nonempty");
  size_t eq = text.find('=');
  if (eq == std::string::npos) parse_fail(text, text.size(), "missing '='");
  if (text.find('=', eq + 1) != std::string::npos)
    parse_fail(text, text.find('=', eq + 1), "multiple '='");

  PolyModel model;
  model.variables = variables;

  std::string rhs_text = text.substr(eq + 1);
  {
    size_t a = rhs_text.find_first_not_of(" \t");
    size_t b = rhs_text.find_last_not_of(" \t");
    if (a == std::string::npos) parse_fail(text, eq + 1, "missing right-hand side");
    rhs_text = rhs_text.substr(a, b - a + 1);
    try {
      model.rhs = Rational::parse(rhs_text);
    } catch (const std::exception&) {
      parse_fail(text, eq + 1, "right-hand side must be a rational constant");
    }
  }

  // Split the left-hand side at top-level +/- signs.
  size_t pos = 0;
  bool negative = false;
  bool expecting_term = true;
  bool any_term = false;
  while (pos < eq) {
    while (pos < eq && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= eq) break;
    if (text[pos] == '+' || text[pos] == '-') {
      if (expecting_term && text[pos] == '-') {
        negative = !negative;
        ++pos;
        continue;
      }
      if (expecting_term) parse_fail(text, pos, "unexpected '+'");
      negative = text[pos] == '-';
      expecting_term = true;
      ++pos;
      continue;
    }
    size_t stop = pos;
    while (stop < eq && text[stop] != '+' && text[stop] != '-') ++stop;
    Term t = scan_term(text, variables, pos, stop, negative);
    if (!(t.coefficient.known && t.coefficient.value.is_zero())) model.terms.push_back(t);
    any_term = true;
    pos = stop;
    negative = false;
    expecting_term = false;
  }
  if (!any_term) parse_fail(text, 0, "missing left-hand side");

  std::sort(model.terms.begin(), model.terms.end(),
            [](const Term& a, const Term& b) { return monomial_less(a.monomial, b.monomial); });

  for (size_t i = 0; i + 1 < model.terms.size(); ++i)
    if (model.terms[i].monomial == model.terms[i + 1].monomial)
      parse_fail(text, 0,
                 "repeated monomial " + monomial_str(model.terms[i].monomial, variables));
  for (size_t i = 0; i < model.terms.size(); ++i)
    for (size_t j = i + 1; j < model.terms.size(); ++j)
      if (!model.terms[i].coefficient.known && !model.terms[j].coefficient.known &&
          model.terms[i].coefficient.symbol == model.terms[j].coefficient.symbol)
        parse_fail(text, 0, "unknown symbol '" + model.terms[i].coefficient.symbol +
                                "' used in two terms");
  return model;
}

std::string PolyModel::str() const {
  if (terms.empty()) return "0 = " + rhs.str();
  std::ostringstream out;
  for (size_t i = 0; i < terms.size(); ++i) {
    const Term& t = terms[i];
    std::string mono = monomial_str(t.monomial, variables);
    std::string coeff;
    bool neg = false;
    if (t.coefficient.known) {
      Rational v = t.coefficient.value;
      if (v < Rational(0)) {
        neg = true;
        v = -v;
      }
      if (mono == "1")
        coeff = v.str();
      else if (v == Rational(1))
        coeff = "";
      else
        coeff = v.str();
    } else {
      coeff = t.coefficient.symbol;
    }
    if (i == 0)
      out << (neg ? "-" : "");
    else
      out << (neg ? " - " : " + ");
    out << coeff;
    if (mono != "1") out << mono;
  }
  out << " = " << rhs.str();
  return out.str();
}

const Term* PolyModel::term_at(const Monomial& m) const {
  for (const Term& t : terms)
    if (t.monomial == m) return &t;
  return nullptr;
}

bool PolyModel::fully_known() const {
  for (const Term& t : terms)
    if (!t.coefficient.known) return false;
  return true;
}

ModelMeasures measures(const PolyModel& m) {
  ModelMeasures out;
  std::vector<int> var_max(m.variables.size(), 0);
  for (const Term& t : m.terms) {
    if (!t.coefficient.known) ++out.nuc;
    out.sp += total_degree(t.monomial);
    for (size_t i = 0; i < t.monomial.size(); ++i)
      var_max[i] = std::max(var_max[i], t.monomial[i]);
  }
  for (int p : var_max) out.hp = std::max(out.hp, p);
  if (out.hp > 0) {
    for (size_t i = 0; i < var_max.size(); ++i) {
      if (var_max[i] == out.hp) {
        Monomial mono(m.variables.size(), 0);
        mono[i] = out.hp;
        out.hpv.push_back(std::move(mono));
      }
    }
  }
  return out;
}

namespace {

bool c_specializes_fixed(const PolyModel& mi, const PolyModel& mj) {
  if (mi.rhs != mj.rhs) return false;

  // Every monomial of mi must be producible by mj.
  for (const Term& t : mi.terms)
    if (!mj.term_at(t.monomial)) return false;

  std::map<std::string, std::string> sym_to_sym;
  for (const Term& tj : mj.terms) {
    const Term* ti = mi.term_at(tj.monomial);
    if (tj.coefficient.known) {
      if (!ti || !ti->coefficient.known) return false;
      if (!(ti->coefficient.value == tj.coefficient.value)) return false;
      continue;
    }
    // unknown: assign to mi's value, mi's symbol, or 0 when the term vanished
    if (ti && !ti->coefficient.known) {
      auto [it, inserted] = sym_to_sym.emplace(tj.coefficient.symbol, ti->coefficient.symbol);
      if (!inserted && it->second != ti->coefficient.symbol) return false;
    }
  }
  // symbol-to-symbol assignment must be injective
  std::map<std::string, std::string> inverse;
  for (const auto& [from, to] : sym_to_sym) {
    auto [it, inserted] = inverse.emplace(to, from);
    if (!inserted) return false;
  }
  // every unknown of mi must be matched by an unknown of mj at the same slot
  for (const Term& ti : mi.terms) {
    if (ti.coefficient.known) continue;
    const Term* tj = mj.term_at(ti.monomial);
    if (!tj || tj->coefficient.known) return false;
  }
  return true;
}

}  // namespace

bool c_specializes(const PolyModel& mi, const PolyModel& mj) {
  require(mi.variables == mj.variables, Errc::invalid_argument,
          "C-specialization needs identical variable lists");
  require(mi.variables.size() <= 6, Errc::invalid_argument,
          "C-specialization supports up to 6 variables");

  // Variable interpretations are interchangeable, so mi may be matched under
  // any variable permutation (x and y may be swapped).
  std::vector<std::size_t> perm(mi.variables.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  do {
    PolyModel permuted = mi;
    for (Term& t : permuted.terms) {
      Monomial mono(t.monomial.size(), 0);
      for (std::size_t i = 0; i < perm.size(); ++i) mono[perm[i]] = t.monomial[i];
      t.monomial = std::move(mono);
    }
    if (c_specializes_fixed(permuted, mj)) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

Ordering order_mu(const PolyModel& mi, const PolyModel& mj) {
  require(mi.variables == mj.variables, Errc::invalid_argument,
          "uncertainty order needs identical variable lists");
  int a = measures(mi).nuc, b = measures(mj).nuc;
  if (a > b) return Ordering::Greater;
  if (a < b) return Ordering::Less;
  return Ordering::Equal;
}

Ordering order_mg(const PolyModel& mi, const PolyModel& mj) {
  bool j_spec_of_i = c_specializes(mj, mi);
  bool i_spec_of_j = c_specializes(mi, mj);
  if (j_spec_of_i && i_spec_of_j) return Ordering::Equal;
  if (j_spec_of_i) return Ordering::Greater;
  if (i_spec_of_j) return Ordering::Less;
  return Ordering::Incomparable;
}

Ordering order_ms(const PolyModel& mi, const PolyModel& mj) {
  require(mi.variables == mj.variables, Errc::invalid_argument,
          "simplicity order needs identical variable lists");
  int a = measures(mi).sp, b = measures(mj).sp;
  if (a < b) return Ordering::Greater;  // smaller SP = simpler
  if (a > b) return Ordering::Less;
  return Ordering::Equal;
}

lattice::BoolVec parameterize(const PolyModel& m, const ParamTemplate& tpl) {
  require(!tpl.slots.empty() && tpl.slots.size() <= lattice::kMaxDim, Errc::invalid_argument,
          "template must have 1..24 slots");
  for (size_t i = 0; i < tpl.slots.size(); ++i)
    for (size_t j = i + 1; j < tpl.slots.size(); ++j)
      require(!(tpl.slots[i] == tpl.slots[j]), Errc::invalid_argument,
              "template slots must be distinct");
  require(m.variables == tpl.variables, Errc::invalid_argument,
          "template variables differ from model variables");
  for (const Term& t : m.terms) {
    bool found = false;
    for (const Monomial& s : tpl.slots)
      if (s == t.monomial) found = true;
    require(found, Errc::invalid_argument,
            "model monomial " + monomial_str(t.monomial, m.variables) +
                " has no slot in the template");
  }
  int n = static_cast<int>(tpl.slots.size());
  std::uint32_t word = 0;
  for (int i = 0; i < n; ++i) {
    const Term* t = m.term_at(tpl.slots[static_cast<size_t>(i)]);
    bool unknown = t && !t->coefficient.known;
    if (unknown) word |= 1u << (n - 1 - i);
  }
  return lattice::BoolVec(n, word);
}

double eval_lhs(const PolyModel& m, const std::vector<double>& tuple) {
  require(tuple.size() == m.variables.size(), Errc::invalid_argument,
          "tuple arity differs from the model's variable count");
  double sum = 0.0;
  for (const Term& t : m.terms) {
    require(t.coefficient.known, Errc::invalid_argument,
            "cannot evaluate a model with unknown coefficients");
    double prod = t.coefficient.value.to_double();
    for (size_t i = 0; i < t.monomial.size(); ++i)
      for (int p = 0; p < t.monomial[i]; ++p) prod *= tuple[i];
    sum += prod;
  }
  return sum;
}

int boolean_similarity(const PolyModel& m, const EmpiricalSystem& e, double tolerance) {
  require(m.fully_known(), Errc::invalid_argument,
          "Boolean similarity is defined for fully certain models only");
  require(tolerance >= 0.0, Errc::invalid_argument, "tolerance must be nonnegative");
  double rhs = m.rhs.to_double();
  for (const auto& tuple : e.objects)
    if (std::abs(eval_lhs(m, tuple) - rhs) > tolerance) return 0;
  return 1;
}

}  // namespace dlpkit::models
