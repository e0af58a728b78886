#include "reasoner.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "error.hpp"

namespace dlpkit::reason {

Evidence Evidence::atom_of(std::string name) {
  Evidence e;
  e.kind = Kind::Atom;
  e.atom = std::move(name);
  return e;
}

Evidence Evidence::combine(Kind op, const Evidence& a, const Evidence& b) {
  require(op != Kind::Atom, Errc::invalid_argument, "combine needs a union/intersection");
  std::vector<Evidence> kids;
  for (const Evidence* side : {&a, &b}) {
    if (side->kind == op)
      kids.insert(kids.end(), side->children.begin(), side->children.end());
    else
      kids.push_back(*side);
  }
  std::sort(kids.begin(), kids.end());
  kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
  if (kids.size() == 1) return kids.front();
  Evidence e;
  e.kind = op;
  e.children = std::move(kids);
  return e;
}

std::string Evidence::key() const {
  if (kind == Kind::Atom) return atom;
  std::string sep = kind == Kind::Union ? " u " : " n ";
  std::string out = "(";
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (i) out += sep;
    out += children[i].key();
  }
  return out + ")";
}

int Evidence::depth() const {
  if (kind == Kind::Atom) return 0;
  int d = 0;
  for (const Evidence& c : children) d = std::max(d, c.depth());
  return d + 1;
}

namespace {

struct Scanner {
  const std::string& text;
  std::size_t pos = 0;

  void ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eat(char c) {
    ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    require(eat(c), Errc::parse, std::string("expected '") + c + "' at position " +
                                     std::to_string(pos) + " in: " + text);
  }
  std::string ident() {
    ws();
    std::size_t start = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                 text[pos] == '_' || text[pos] == '\''))
      ++pos;
    require(pos > start, Errc::parse,
            "expected an identifier at position " + std::to_string(start) + " in: " + text);
    return text.substr(start, pos - start);
  }
};

Evidence parse_evidence_at(Scanner& sc) {
  sc.ws();
  if (sc.eat('(')) {
    Evidence acc = parse_evidence_at(sc);
    Evidence::Kind op = Evidence::Kind::Atom;
    while (true) {
      sc.ws();
      if (sc.eat(')')) break;
      std::size_t at = sc.pos;
      std::string tok = sc.ident();
      Evidence::Kind here;
      if (tok == "u")
        here = Evidence::Kind::Union;
      else if (tok == "n")
        here = Evidence::Kind::Intersect;
      else
        fail(Errc::parse, "expected 'u' or 'n' at position " + std::to_string(at) +
                              " in: " + sc.text);
      require(op == Evidence::Kind::Atom || op == here, Errc::parse,
              "mixed operators inside one parenthesis in: " + sc.text);
      op = here;
      Evidence rhs = parse_evidence_at(sc);
      acc = Evidence::combine(op, acc, rhs);
    }
    return acc;
  }
  return Evidence::atom_of(sc.ident());
}

}  // namespace

Evidence parse_evidence(const std::string& text) {
  Scanner sc{text};
  Evidence e = parse_evidence_at(sc);
  sc.ws();
  require(sc.pos == text.size(), Errc::parse, "trailing input in evidence term: " + text);
  return e;
}

std::string Fact::str() const {
  return "w(" + from_model + ", " + evidence.key() + ", " + to_model + ")";
}

Fact parse_fact(const std::string& line) {
  Scanner sc{line};
  std::string w = sc.ident();
  require(w == "w", Errc::parse, "fact must start with 'w': " + line);
  sc.expect('(');
  Fact f;
  f.from_model = sc.ident();
  sc.expect(',');
  f.evidence = parse_evidence_at(sc);
  sc.expect(',');
  f.to_model = sc.ident();
  sc.expect(')');
  sc.ws();
  require(sc.pos == line.size(), Errc::parse, "trailing input after fact: " + line);
  return f;
}

std::vector<Fact> parse_kb(const std::string& text) {
  std::vector<Fact> kb;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    if (line[a] == '#') continue;
    try {
      kb.push_back(parse_fact(line));
    } catch (const Error& e) {
      fail(Errc::parse, "KB line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return kb;
}

std::vector<Fact> load_kb(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Errc::io, "cannot open KB file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_kb(buf.str());
}

namespace {

constexpr std::size_t kUniverseCap = 100000;

// All normalized terms over the given atoms with nesting depth <= depth.
std::vector<Evidence> term_universe(const std::vector<std::string>& atoms, int depth) {
  std::vector<Evidence> terms;
  for (const std::string& a : atoms) terms.push_back(Evidence::atom_of(a));
  std::set<std::string> seen;
  for (const Evidence& t : terms) seen.insert(t.key());

  std::vector<Evidence> frontier = terms;
  for (int d = 1; d <= depth; ++d) {
    std::vector<Evidence> next;
    // any subset of current terms joined under one operator
    std::size_t base = terms.size();
    require(base <= 20 || depth == 0, Errc::invalid_argument,
            "evidence universe too large; lower the depth or the atom count");
    for (auto op : {Evidence::Kind::Union, Evidence::Kind::Intersect}) {
      for (std::size_t mask = 1; mask < (1ull << base); ++mask) {
        if ((mask & (mask - 1)) == 0) continue;  // need >= 2 members
        Evidence acc;
        bool first = true;
        for (std::size_t i = 0; i < base; ++i) {
          if (!(mask >> i & 1)) continue;
          if (first) {
            acc = terms[i];
            first = false;
          } else {
            acc = Evidence::combine(op, acc, terms[i]);
          }
        }
        if (acc.depth() > depth) continue;
        if (seen.insert(acc.key()).second) {
          next.push_back(acc);
          require(seen.size() <= kUniverseCap, Errc::invalid_argument,
                  "evidence universe exceeds the safety cap");
        }
      }
    }
    terms.insert(terms.end(), next.begin(), next.end());
    if (next.empty()) break;
  }
  std::sort(terms.begin(), terms.end());
  return terms;
}

std::vector<std::string> kb_atoms(const std::vector<Fact>& kb) {
  std::set<std::string> atoms;
  auto collect = [&](const Evidence& e, auto&& self) -> void {
    if (e.kind == Evidence::Kind::Atom) {
      atoms.insert(e.atom);
      return;
    }
    for (const Evidence& c : e.children) self(c, self);
  };
  for (const Fact& f : kb) collect(f.evidence, collect);
  return {atoms.begin(), atoms.end()};
}

struct FirstDerivation {
  std::string rule;
  std::vector<Fact> premises;
};

// Semi-naive round-based fixpoint: each round combines the facts discovered
// in the previous round against everything known, so a fact's first
// derivation uses only facts from strictly earlier rounds (breadth-first).
std::map<Fact, FirstDerivation> saturate(const std::vector<Fact>& kb, int depth,
                                         RuleSet rules) {
  require(depth >= 0, Errc::invalid_argument, "closure depth must be >= 0");
  std::vector<Evidence> universe = term_universe(kb_atoms(kb), depth);

  // keyed by Fact::str(), computed once per fact
  std::map<std::string, std::pair<Fact, FirstDerivation>> facts;
  std::map<std::string, std::vector<Fact>> by_pair;     // from|to
  std::map<std::string, std::vector<Fact>> by_ev_from;  // ev|from
  std::map<std::string, std::vector<Fact>> by_ev_to;    // ev|to

  auto index_fact = [&](const Fact& f) {
    std::string ev = f.evidence.key();
    by_pair[f.from_model + "|" + f.to_model].push_back(f);
    by_ev_from[ev + "|" + f.from_model].push_back(f);
    by_ev_to[ev + "|" + f.to_model].push_back(f);
  };

  std::vector<Fact> frontier;
  for (const Fact& f : kb) {
    if (facts.emplace(f.str(), std::make_pair(f, FirstDerivation{"given", {}})).second) {
      index_fact(f);
      frontier.push_back(f);
    }
  }

  while (!frontier.empty()) {
    std::vector<std::pair<Fact, FirstDerivation>> fresh;
    std::set<std::string> fresh_keys;

    // The depth bound applies to generated terms; TA only moves existing
    // terms around, so it is exempt.
    auto emit = [&](Fact f, const char* rule, std::vector<Fact> premises, bool generates) {
      if (generates && f.evidence.depth() > depth) return;
      std::string key = f.str();
      if (facts.count(key) || fresh_keys.count(key)) return;
      fresh_keys.insert(std::move(key));
      fresh.emplace_back(std::move(f), FirstDerivation{rule, std::move(premises)});
    };

    for (const Fact& f : frontier) {
      if (rules.ca) {
        // disjunctive premise: either disjunct alone suffices
        for (const Evidence& e2 : universe) {
          Evidence u = Evidence::combine(Evidence::Kind::Union, f.evidence, e2);
          if (!(u == f.evidence)) emit({f.from_model, u, f.to_model}, "CA", {f}, true);
        }
      }
      if (rules.ia && f.evidence.kind == Evidence::Kind::Intersect) {
        const auto& kids = f.evidence.children;
        std::size_t k = kids.size();
        for (std::size_t mask = 1; mask + 1 < (1ull << k); ++mask) {
          if (!(mask & 1)) continue;  // fix the first child's side: unordered split
          Evidence left, right;
          bool first_l = true, first_r = true;
          for (std::size_t i = 0; i < k; ++i) {
            Evidence& side = (mask >> i & 1) ? left : right;
            bool& first = (mask >> i & 1) ? first_l : first_r;
            if (first) {
              side = kids[i];
              first = false;
            } else {
              side = Evidence::combine(Evidence::Kind::Intersect, side, kids[i]);
            }
          }
          Evidence u = Evidence::combine(Evidence::Kind::Union, left, right);
          emit({f.from_model, u, f.to_model}, "IA", {f}, true);
        }
      }
      if (rules.ta) {
        std::string ev = f.evidence.key();
        for (const Fact& rhs : by_ev_from[ev + "|" + f.to_model])
          emit({f.from_model, f.evidence, rhs.to_model}, "TA", {f, rhs}, false);
        for (const Fact& lhs : by_ev_to[ev + "|" + f.from_model])
          emit({lhs.from_model, f.evidence, f.to_model}, "TA", {lhs, f}, false);
      }
      if (rules.da || rules.dca) {
        for (const Fact& g : by_pair[f.from_model + "|" + f.to_model]) {
          if (g.evidence == f.evidence) continue;
          if (rules.da) {
            Evidence i =
                Evidence::combine(Evidence::Kind::Intersect, f.evidence, g.evidence);
            emit({f.from_model, i, f.to_model}, "DA", {f, g}, true);
          }
          if (rules.dca) {
            Evidence u = Evidence::combine(Evidence::Kind::Union, f.evidence, g.evidence);
            emit({f.from_model, u, f.to_model}, "DCA", {f, g}, true);
          }
        }
      }
    }

    frontier.clear();
    for (auto& [f, d] : fresh) {
      facts.emplace(f.str(), std::make_pair(f, std::move(d)));
      index_fact(f);
      frontier.push_back(f);
    }
  }

  std::map<Fact, FirstDerivation> out;
  for (auto& [key, entry] : facts) out.emplace(std::move(entry.first), std::move(entry.second));
  return out;
}

}  // namespace

std::set<Fact> closure(const std::vector<Fact>& kb, int depth, RuleSet rules) {
  std::set<Fact> out;
  for (const auto& [f, d] : saturate(kb, depth, rules)) out.insert(f);
  return out;
}

std::size_t Derivation::rule_steps() const {
  std::size_t n = 0;
  for (const Line& l : lines)
    if (l.rule != "given") ++n;
  return n;
}

std::string Derivation::str() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    out << (i + 1) << ". ";
    if (lines[i].rule == "given") {
      out << "given";
    } else {
      out << lines[i].rule << " ";
      for (std::size_t j = 0; j < lines[i].premises.size(); ++j) {
        if (j) out << ",";
        out << (lines[i].premises[j] + 1);
      }
    }
    out << "  " << lines[i].fact.str() << "\n";
  }
  return out.str();
}

std::optional<Derivation> derive(const std::vector<Fact>& kb, const Fact& goal, int depth,
                                 RuleSet rules) {
  auto facts = saturate(kb, depth, rules);
  if (!facts.count(goal)) return std::nullopt;

  Derivation deriv;
  std::map<Fact, std::size_t> line_of;
  auto unfold = [&](const Fact& f, auto&& self) -> std::size_t {
    auto it = line_of.find(f);
    if (it != line_of.end()) return it->second;
    const FirstDerivation& d = facts.at(f);
    std::vector<std::size_t> premise_lines;
    for (const Fact& p : d.premises) premise_lines.push_back(self(p, self));
    deriv.lines.push_back({d.rule, premise_lines, f});
    std::size_t idx = deriv.lines.size() - 1;
    line_of.emplace(f, idx);
    return idx;
  };
  unfold(goal, unfold);
  return deriv;
}

}  // namespace dlpkit::reason
