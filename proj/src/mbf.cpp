#include "mbf.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <memory>
#include <sstream>

#include "error.hpp"

namespace dlpkit::mbf {

FnTable::FnTable(int dim) : n(dim) {
  require(dim >= 1 && dim <= lattice::kMaxDim, Errc::invalid_argument,
          "function table dimension must be in 1..24");
  values.assign(1ull << dim, 0);
}

long long shannon_bound(int n) {
  require(n >= 1 && n <= lattice::kMaxDim, Errc::invalid_argument,
          "Shannon bound dimension must be in 1..24, got " + std::to_string(n));
  return lattice::binomial(n, n / 2) + lattice::binomial(n, n / 2 + 1);
}

AssignmentState::AssignmentState(int dim) : n(dim) {
  require(dim >= 1 && dim <= lattice::kMaxDim, Errc::invalid_argument,
          "assignment state dimension must be in 1..24");
  status.assign(1ull << dim, Status::Unknown);
  origin.assign(1ull << dim, Origin::None);
  forcer.assign(1ull << dim, 0);
}

bool AssignmentState::complete() const {
  for (Status s : status)
    if (s == Status::Unknown) return false;
  return true;
}

namespace {

[[noreturn]] void inconsistency(const BoolVec& one, const BoolVec& zero) {
  // one <= zero with f(one)=1, f(zero)=0
  fail(Errc::inconsistent, "oracle inconsistency: f(" + one.str() + ")=1 but f(" +
                               zero.str() + ")=0 although " + one.str() +
                               " <= " + zero.str());
}

}  // namespace

std::vector<Forced> expand(AssignmentState& state, const BoolVec& v, int value) {
  require(v.n == state.n, Errc::invalid_argument, "vector dimension mismatch with state");
  require(value == 0 || value == 1, Errc::invalid_argument, "oracle value must be 0/1");

  if (state.determined(v.word)) {
    int have = state.status[v.word] == Status::One ? 1 : 0;
    if (have != value) {
      BoolVec other(state.n, state.forcer[v.word]);
      bool was_inferred = state.origin[v.word] == Origin::Inferred;
      if (value == 0) {
        // v was One; if inferred, it came from a tested 1 below v.
        inconsistency(was_inferred ? other : v, v);
      } else {
        // v was Zero; if inferred, it came from a tested 0 above v.
        inconsistency(v, was_inferred ? other : v);
      }
    }
  }
  state.status[v.word] = value ? Status::One : Status::Zero;
  state.origin[v.word] = Origin::Tested;

  std::vector<Forced> forced;
  if (value == 0) {
    // Every w <= v becomes 0.
    std::uint32_t sub = v.word;
    while (true) {
      if (sub != v.word) {
        if (state.status[sub] == Status::One) {
          if (state.origin[sub] == Origin::Inferred)
            inconsistency(BoolVec(state.n, state.forcer[sub]), v);
          inconsistency(BoolVec(state.n, sub), v);
        }
        if (state.status[sub] == Status::Unknown) {
          state.status[sub] = Status::Zero;
          state.origin[sub] = Origin::Inferred;
          state.forcer[sub] = v.word;
          forced.push_back({BoolVec(state.n, sub), 0});
        }
      }
      if (sub == 0) break;
      sub = (sub - 1) & v.word;
    }
  } else {
    // Every w >= v becomes 1.
    std::uint32_t full = state.n == 32 ? ~0u : ((1u << state.n) - 1);
    std::uint32_t space = full & ~v.word;
    std::uint32_t sub = space;
    while (true) {
      std::uint32_t w = v.word | sub;
      if (w != v.word) {
        if (state.status[w] == Status::Zero) {
          if (state.origin[w] == Origin::Inferred)
            inconsistency(v, BoolVec(state.n, state.forcer[w]));
          inconsistency(v, BoolVec(state.n, w));
        }
        if (state.status[w] == Status::Unknown) {
          state.status[w] = Status::One;
          state.origin[w] = Origin::Inferred;
          state.forcer[w] = v.word;
          forced.push_back({BoolVec(state.n, w), 1});
        }
      }
      if (sub == 0) break;
      sub = (sub - 1) & space;
    }
  }
  std::sort(forced.begin(), forced.end(),
            [](const Forced& a, const Forced& b) { return a.v.word < b.v.word; });
  return forced;
}

std::optional<std::pair<BoolVec, BoolVec>> monotone_violation(const FnTable& table) {
  for (std::uint32_t w = 0; w < table.size(); ++w) {
    if (!table.value(w)) continue;
    // f(w)=1: every superset must be 1 as well; check immediate successors.
    for (int b = 0; b < table.n; ++b) {
      std::uint32_t up = w | (1u << b);
      if (up != w && table.value(up) == 0)
        return std::make_pair(BoolVec(table.n, w), BoolVec(table.n, up));
    }
  }
  return std::nullopt;
}

bool is_monotone(const FnTable& table) { return !monotone_violation(table).has_value(); }

LowerUnits lower_units(const FnTable& table) {
  if (auto bad = monotone_violation(table))
    fail(Errc::invalid_argument, "lower_units requires a monotone table; violated by f(" +
                                     bad->first.str() + ")=1, f(" + bad->second.str() + ")=0");
  LowerUnits out;
  int best = table.n + 1;
  for (std::uint32_t w = 0; w < table.size(); ++w) {
    if (!table.value(w)) continue;
    bool minimal = true;
    for (int b = 0; b < table.n && minimal; ++b)
      if (w & (1u << b))
        if (table.value(w & ~(1u << b))) minimal = false;
    if (!minimal) continue;
    BoolVec v(table.n, w);
    if (v.weight() < best) best = v.weight();
    out.units.push_back(v);
  }
  for (const BoolVec& v : out.units)
    if (v.weight() == best) out.smallest.push_back(v);
  return out;
}

std::string units_dnf(int n, const std::vector<BoolVec>& units) {
  if (units.empty()) return "0";
  std::ostringstream out;
  bool first_unit = true;
  for (const BoolVec& u : units) {
    if (!first_unit) out << " OR ";
    first_unit = false;
    if (u.word == 0) {
      out << "1";
      continue;
    }
    std::vector<std::string> lits;
    for (int c = 1; c <= n; ++c)
      if (u.bit(c)) lits.push_back("x" + std::to_string(c));
    if (lits.size() == 1) {
      out << lits[0];
    } else {
      out << "(";
      for (size_t i = 0; i < lits.size(); ++i) {
        if (i) out << " AND ";
        out << lits[i];
      }
      out << ")";
    }
  }
  return out.str();
}

Oracle table_oracle(const FnTable& table) {
  if (auto bad = monotone_violation(table))
    fail(Errc::inconsistent, "oracle inconsistency: f(" + bad->first.str() + ")=1 but f(" +
                                 bad->second.str() + ")=0 although " + bad->first.str() +
                                 " <= " + bad->second.str());
  auto copy = std::make_shared<FnTable>(table);
  return Oracle{[copy](const BoolVec& v) { return copy->value(v); }, "table"};
}

Oracle table_oracle_from_file(const std::string& path, int n) {
  std::ifstream in(path);
  require(in.good(), Errc::io, "cannot open oracle table file: " + path);
  FnTable table(n);
  std::vector<bool> seen(table.size(), false);
  std::string bits;
  int val;
  while (in >> bits >> val) {
    BoolVec v = BoolVec::parse(bits);
    require(v.n == n, Errc::parse, "table entry '" + bits + "' has dimension " +
                                       std::to_string(v.n) + ", expected " + std::to_string(n));
    require(val == 0 || val == 1, Errc::parse, "table value for " + bits + " must be 0/1");
    table.set(v.word, val);
    seen[v.word] = true;
  }
  for (std::uint32_t w = 0; w < table.size(); ++w)
    require(seen[w], Errc::parse,
            "oracle table is missing vector " + BoolVec(n, w).str() + " in " + path);
  return table_oracle(table);
}

namespace {

// Monotone formula over x1..xn: expr := and (OR and)*, and := atom (AND atom)*,
// atom := '(' expr ')' | 0 | 1 | xN. Negation is absent by construction.
class ExprParser {
public:
  ExprParser(int n, const std::string& text) : n_(n), text_(text) {}

  struct Node {
    enum Kind { Or, And, Var, Const } kind;
    std::vector<std::unique_ptr<Node>> kids;
    int var = 0;
    int value = 0;
  };

  std::unique_ptr<Node> parse() {
    auto node = parse_or();
    skip_ws();
    require(pos_ == text_.size(), Errc::parse,
            "unexpected trailing input at position " + std::to_string(pos_) +
                " in formula: " + text_);
    return node;
  }

private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool keyword(const char* kw) {
    skip_ws();
    size_t len = std::char_traits<char>::length(kw);
    if (pos_ + len > text_.size()) return false;
    for (size_t i = 0; i < len; ++i)
      if (std::toupper(static_cast<unsigned char>(text_[pos_ + i])) != kw[i]) return false;
    size_t end = pos_ + len;
    if (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end]))) return false;
    pos_ = end;
    return true;
  }

  std::unique_ptr<Node> parse_or() {
    auto node = std::make_unique<Node>();
    node->kind = Node::Or;
    node->kids.push_back(parse_and());
    while (keyword("OR")) node->kids.push_back(parse_and());
    if (node->kids.size() == 1) return std::move(node->kids.front());
    return node;
  }

  std::unique_ptr<Node> parse_and() {
    auto node = std::make_unique<Node>();
    node->kind = Node::And;
    node->kids.push_back(parse_atom());
    while (keyword("AND")) node->kids.push_back(parse_atom());
    if (node->kids.size() == 1) return std::move(node->kids.front());
    return node;
  }

  std::unique_ptr<Node> parse_atom() {
    skip_ws();
    require(pos_ < text_.size(), Errc::parse, "formula ended unexpectedly: " + text_);
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto node = parse_or();
      skip_ws();
      require(pos_ < text_.size() && text_[pos_] == ')', Errc::parse,
              "missing ')' at position " + std::to_string(pos_) + " in formula: " + text_);
      ++pos_;
      return node;
    }
    if (c == '0' || c == '1') {
      ++pos_;
      auto node = std::make_unique<Node>();
      node->kind = Node::Const;
      node->value = c - '0';
      return node;
    }
    if (c == 'x' || c == 'X') {
      size_t start = pos_++;
      size_t digits = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      require(pos_ > digits, Errc::parse,
              "variable needs an index at position " + std::to_string(start) +
                  " in formula: " + text_);
      int idx = std::stoi(text_.substr(digits, pos_ - digits));
      require(idx >= 1 && idx <= n_, Errc::parse,
              "variable x" + std::to_string(idx) + " outside x1..x" + std::to_string(n_));
      auto node = std::make_unique<Node>();
      node->kind = Node::Var;
      node->var = idx;
      return node;
    }
    fail(Errc::parse, std::string("unexpected character '") + c + "' at position " +
                          std::to_string(pos_) + " in formula: " + text_);
  }

  int n_;
  const std::string& text_;
  size_t pos_ = 0;
};

int eval_expr(const ExprParser::Node& node, const BoolVec& v) {
  switch (node.kind) {
    case ExprParser::Node::Const:
      return node.value;
    case ExprParser::Node::Var:
      return v.bit(node.var) ? 1 : 0;
    case ExprParser::Node::And:
      for (const auto& k : node.kids)
        if (!eval_expr(*k, v)) return 0;
      return 1;
    case ExprParser::Node::Or:
      for (const auto& k : node.kids)
        if (eval_expr(*k, v)) return 1;
      return 0;
  }
  return 0;
}

}  // namespace

Oracle expr_oracle(int n, const std::string& formula) {
  ExprParser parser(n, formula);
  std::shared_ptr<ExprParser::Node> root = parser.parse();
  return Oracle{[root](const BoolVec& v) { return eval_expr(*root, v); },
                "expr:" + formula};
}

Oracle callback_oracle(std::function<int(const BoolVec&)> fn, std::string description) {
  return Oracle{std::move(fn), std::move(description)};
}

RestoreResult restore(int n, const Oracle& oracle, const RestoreHooks* hooks,
                      trace::Trace* partial) {
  require(n >= 1 && n <= lattice::kMaxDim, Errc::invalid_argument,
          "restore dimension must be in 1..24");
  ChainCover cover = lattice::hansel_chains(n);
  AssignmentState state(n);
  RestoreResult result{FnTable(n), {}, {}};
  result.stats.bound = shannon_bound(n);
  result.stats.per_chain_queries.assign(cover.chains.size(), 0);

  auto record_tested = [&](const BoolVec& v, int value, int chain_idx) -> std::int64_t {
    trace::Step s;
    s.id = v.str();
    s.vec = v.str();
    s.verdict = value;
    s.source = trace::Source::Tested;
    s.chain_index = chain_idx;
    return result.trace.add(std::move(s)).seq;
  };
  auto record_inferred = [&](const Forced& f, std::int64_t by) {
    trace::Step s;
    s.id = f.v.str();
    s.vec = f.v.str();
    s.verdict = f.value;
    s.source = trace::Source::Inferred;
    s.forced_by = by;
    s.chain_index = cover.chain_of[f.v.word];
    result.trace.add(std::move(s));
  };

  for (size_t ci = 0; ci < cover.chains.size(); ++ci) {
    const auto& elems = cover.chains[ci].elements;
    while (true) {
      int lo = -1, hi = -1;
      for (int i = 0; i < static_cast<int>(elems.size()); ++i) {
        if (!state.determined(elems[static_cast<size_t>(i)].word)) {
          if (lo < 0) lo = i;
          hi = i;
        }
      }
      if (lo < 0) break;
      int mid = lo + (hi - lo) / 2;
      const BoolVec& probe = elems[static_cast<size_t>(mid)];
      int answer;
      try {
        answer = oracle.fn(probe);
      } catch (const Error&) {
        if (partial) *partial = result.trace;
        throw;
      }
      require(answer == 0 || answer == 1, Errc::inconsistent,
              "oracle returned a non-boolean answer for " + probe.str());
      ++result.stats.queries_asked;
      ++result.stats.per_chain_queries[ci];
      ++result.trace.evaluations;
      std::vector<Forced> forced = expand(state, probe, answer);
      result.trace.expansions += static_cast<std::int64_t>(forced.size());
      std::int64_t seq = record_tested(probe, answer, static_cast<int>(ci));
      for (const Forced& f : forced) record_inferred(f, seq);
      if (hooks && hooks->after_answer) hooks->after_answer(state, cover);
    }
  }

  for (std::uint32_t w = 0; w < result.table.size(); ++w)
    result.table.set(w, state.status[w] == Status::One ? 1 : 0);
  return result;
}

}  // namespace dlpkit::mbf
