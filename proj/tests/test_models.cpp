#include <doctest.h>

#include <set>

#include "error.hpp"
#include "poly.hpp"
#include "similarity.hpp"

using namespace dlpkit;
using namespace dlpkit::models;

namespace {

const std::vector<std::string> kXY{"x", "y"};

Monomial mono_x(int px, int py) { return Monomial{px, py}; }

std::set<std::string> hpv_names(const PolyModel& m) {
  std::set<std::string> out;
  for (const Monomial& h : measures(m).hpv) out.insert(monomial_str(h, m.variables));
  return out;
}

}  // namespace

TEST_CASE("parse_poly on the classic model family") {
  PolyModel m3 = parse_poly("5x + by^2 = 0", kXY);
  REQUIRE(m3.terms.size() == 2);
  CHECK(m3.terms[0].monomial == mono_x(1, 0));
  CHECK(m3.terms[0].coefficient.known);
  CHECK(m3.terms[0].coefficient.value == Rational(5));
  CHECK(m3.terms[1].monomial == mono_x(0, 2));
  CHECK(!m3.terms[1].coefficient.known);
  CHECK(m3.terms[1].coefficient.symbol == "b");
  CHECK(m3.rhs == Rational(0));
  CHECK(m3.str() == "5x + by^2 = 0");

  PolyModel zero = parse_poly("0 = 0", kXY);
  CHECK(zero.terms.empty());
  CHECK(zero.rhs == Rational(0));

  PolyModel m4 = parse_poly("ax + cx^2 + by^2 = 0", kXY);
  REQUIRE(m4.terms.size() == 3);
  for (const Term& t : m4.terms) CHECK(!t.coefficient.known);
  // canonical graded-lex order: x, x^2, y^2
  CHECK(m4.terms[0].monomial == mono_x(1, 0));
  CHECK(m4.terms[1].monomial == mono_x(2, 0));
  CHECK(m4.terms[2].monomial == mono_x(0, 2));

  PolyModel c = parse_poly("ax^2 + by + cx + d = 10", kXY);
  CHECK(c.terms.size() == 4);
  CHECK(c.rhs == Rational(10));

  CHECK(parse_poly("x + y = 0", kXY).terms.size() == 2);
  CHECK(parse_poly("-3x + 1/2y = -2", kXY).terms[0].coefficient.value == Rational(-3));
  CHECK(parse_poly("0.5x = 0", kXY).terms[0].coefficient.value == Rational(1, 2));
}

TEST_CASE("parse_poly error paths") {
  CHECK_THROWS_AS(parse_poly("5x + 2x = 0", kXY), Error);     // repeated monomial
  CHECK_THROWS_AS(parse_poly("ax + ay = 0", kXY), Error);     // symbol reused
  CHECK_THROWS_AS(parse_poly("5x + y", kXY), Error);          // missing '='
  CHECK_THROWS_AS(parse_poly("5x = y", kXY), Error);          // non-constant rhs
  CHECK_THROWS_AS(parse_poly("5q = 0", kXY), Error);          // q then unknown 5q mix
  CHECK_THROWS_AS(parse_poly("ab x = 0", kXY), Error);        // two symbols in a term
  CHECK_THROWS_AS(parse_poly("x^0 = 0", kXY), Error);         // exponent out of range
  CHECK_THROWS_AS(parse_poly("x^ = 0", kXY), Error);          // missing exponent
  CHECK_THROWS_AS(parse_poly("= 0", kXY), Error);             // no left side at all? empty lhs is fine: "0 = 0" has a term; "= 0" has none
}

TEST_CASE("measures of the classic model family") {
  PolyModel m3 = parse_poly("5x + by^2 = 0", kXY);
  ModelMeasures mm3 = measures(m3);
  CHECK(mm3.nuc == 1);
  CHECK(mm3.hp == 2);
  CHECK(hpv_names(m3) == std::set<std::string>{"y^2"});
  CHECK(mm3.sp == 3);

  PolyModel m4 = parse_poly("ax + cx^2 + by^2 = 0", kXY);
  ModelMeasures mm4 = measures(m4);
  CHECK(mm4.nuc == 3);
  CHECK(mm4.hp == 2);
  CHECK(hpv_names(m4) == std::set<std::string>{"x^2", "y^2"});
  CHECK(mm4.sp == 5);

  PolyModel two_hpv = parse_poly("2x^2 + 4x + 3y^2 + 5y = 0", kXY);
  CHECK(hpv_names(two_hpv) == std::set<std::string>{"x^2", "y^2"});

  PolyModel m1 = parse_poly("2x^2 + 3y = 0", kXY);
  PolyModel m2 = parse_poly("5x + 4y^2 = 0", kXY);
  CHECK(measures(m1).nuc == 0);
  CHECK(measures(m2).nuc == 0);
  CHECK(hpv_names(m1) == std::set<std::string>{"x^2"});
  CHECK(hpv_names(m2) == std::set<std::string>{"y^2"});
}

TEST_CASE("c_specializes on the paper's examples") {
  PolyModel m2 = parse_poly("5x + 4y^2 = 0", kXY);
  PolyModel m3 = parse_poly("5x + by^2 = 0", kXY);
  PolyModel m4 = parse_poly("ax + cx^2 + by^2 = 0", kXY);
  PolyModel m1 = parse_poly("2x^2 + 3y = 0", kXY);

  CHECK(c_specializes(m2, m3));   // b -> 4
  CHECK(c_specializes(m3, m4));   // a -> 5, c -> 0
  CHECK(c_specializes(m2, m4));   // transitively
  CHECK(!c_specializes(m1, m2));  // the paper: M1 is not a C-specialization of M2
  CHECK(!c_specializes(m3, m2));
  CHECK(!c_specializes(m4, m3));
}

TEST_CASE("c_specializes is reflexive and transitive; mutual implies renaming") {
  std::vector<PolyModel> fixtures = {
      parse_poly("5x + 4y^2 = 0", kXY),    parse_poly("5x + by^2 = 0", kXY),
      parse_poly("ax + cx^2 + by^2 = 0", kXY), parse_poly("2x^2 + 3y = 0", kXY),
      parse_poly("ax + 4y + 5y^2 = 0", kXY),   parse_poly("0 = 0", kXY),
  };
  for (const PolyModel& a : fixtures) CHECK(c_specializes(a, a));
  for (const PolyModel& a : fixtures)
    for (const PolyModel& b : fixtures)
      for (const PolyModel& c : fixtures)
        if (c_specializes(a, b) && c_specializes(b, c)) CHECK(c_specializes(a, c));

  PolyModel p = parse_poly("ax + by^2 = 0", kXY);
  PolyModel q = parse_poly("cx + dy^2 = 0", kXY);
  CHECK(c_specializes(p, q));
  CHECK(c_specializes(q, p));  // mutual: pure renaming

  // a model cannot reuse one unknown symbol in two terms, so symbol
  // assignments stay injective by construction
  CHECK_THROWS_AS(parse_poly("cx + cy = 0", kXY), Error);
}

TEST_CASE("order verdicts across the classic model family") {
  PolyModel m2 = parse_poly("5x + 4y^2 = 0", kXY);
  PolyModel m3 = parse_poly("5x + by^2 = 0", kXY);
  PolyModel m4 = parse_poly("ax + cx^2 + by^2 = 0", kXY);

  CHECK(order_mu(m3, m2) == Ordering::Greater);  // M3 >Mu M2
  CHECK(order_mu(m2, m3) == Ordering::Less);
  CHECK(order_mg(m4, m3) == Ordering::Greater);  // M4 more general
  CHECK(order_mg(m4, m2) == Ordering::Greater);
  CHECK(order_mg(m3, m2) == Ordering::Greater);
  CHECK(order_ms(m3, m4) == Ordering::Greater);  // SP 3 vs 5: M3 simpler
  CHECK(order_ms(m4, m3) == Ordering::Less);

  PolyModel m1 = parse_poly("2x^2 + 3y = 0", kXY);
  CHECK(order_mu(m1, m2) == Ordering::Equal);
  CHECK(order_mg(m1, m2) == Ordering::Incomparable);
}

TEST_CASE("fixture chain: NUC grows with fixed HP/HPV/SP along a C-chain") {
  std::vector<PolyModel> block = {
      parse_poly("3x + 4y + 5y^2 = 0", kXY),
      parse_poly("ax + 4y + 5y^2 = 0", kXY),
      parse_poly("ax + by + 5y^2 = 0", kXY),
  };
  for (std::size_t i = 0; i < block.size(); ++i) {
    ModelMeasures mm = measures(block[i]);
    CHECK(mm.nuc == static_cast<int>(i));
    CHECK(mm.hp == 2);
    CHECK(hpv_names(block[i]) == std::set<std::string>{"y^2"});
    CHECK(mm.sp == 4);
  }
  CHECK(c_specializes(block[0], block[1]));
  CHECK(c_specializes(block[1], block[2]));
  CHECK(order_mg(block[2], block[1]) == Ordering::Greater);
  CHECK(order_mg(block[1], block[0]) == Ordering::Greater);
}

TEST_CASE("fixture chain: NUC grows without C-generality") {
  std::vector<PolyModel> block = {
      parse_poly("3x + 4y + 5y^2 = 0", kXY),
      parse_poly("ax + 9y + 5y^2 = 0", kXY),
      parse_poly("ax + by + 7y^2 = 0", kXY),
  };
  for (std::size_t i = 0; i < block.size(); ++i) CHECK(measures(block[i]).nuc == static_cast<int>(i));
  CHECK(!c_specializes(block[0], block[1]));  // 4y vs 9y cannot match
  CHECK(!c_specializes(block[1], block[2]));  // 5y^2 vs 7y^2 cannot match
}

TEST_CASE("fixture chain: NUC and simplicity grow while HP falls") {
  std::vector<PolyModel> block = {
      parse_poly("3x + 4y + 5y^2 = 0", kXY),
      parse_poly("3x^2 + by = 0", kXY),
      parse_poly("ax + by = 0", kXY),
  };
  int expected_sp[] = {4, 3, 2};
  int expected_nuc[] = {0, 1, 2};
  int expected_hp[] = {2, 2, 1};
  for (std::size_t i = 0; i < block.size(); ++i) {
    ModelMeasures mm = measures(block[i]);
    CHECK(mm.sp == expected_sp[i]);
    CHECK(mm.nuc == expected_nuc[i]);
    CHECK(mm.hp == expected_hp[i]);
  }
  CHECK(order_ms(block[2], block[0]) == Ordering::Greater);  // smaller SP = simpler
  CHECK(!c_specializes(block[1], block[2]));  // ax does not generalize 3x^2
}

TEST_CASE("parameterize with the four-slot template") {
  ParamTemplate tpl{kXY, {mono_x(2, 0), mono_x(0, 1), mono_x(1, 0), mono_x(0, 0)}};
  CHECK(parameterize(parse_poly("ax^2 + by + cx + d = 10", kXY), tpl).str() == "1111");
  CHECK(parameterize(parse_poly("9x^2 + 3y + 7x = 10", kXY), tpl).str() == "0000");
  CHECK(parameterize(parse_poly("ax^2 + 3y + 7x = 10", kXY), tpl).str() == "1000");
  CHECK(parameterize(parse_poly("ax^2 + by + 7x = 10", kXY), tpl).str() == "1100");
  // monomial outside the template slots
  CHECK_THROWS_AS(parameterize(parse_poly("5y^2 = 0", kXY), tpl), Error);
}

TEST_CASE("parameterize vectors are isomorphic to the generality chain") {
  ParamTemplate tpl{kXY, {mono_x(2, 0), mono_x(0, 1), mono_x(1, 0), mono_x(0, 0)}};
  std::vector<PolyModel> chain = {
      parse_poly("9x^2 + 3y + 7x = 10", kXY),      // 0000
      parse_poly("ax^2 + 3y + 7x = 10", kXY),      // 1000
      parse_poly("ax^2 + by + 7x = 10", kXY),      // 1100
      parse_poly("ax^2 + by + cx = 10", kXY),      // 1110
      parse_poly("ax^2 + by + cx + d = 10", kXY),  // 1111
  };
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    CHECK(c_specializes(chain[i], chain[i + 1]));
    CHECK(lattice::vec_leq(parameterize(chain[i], tpl), parameterize(chain[i + 1], tpl)));
  }
}

TEST_CASE("boolean_similarity") {
  PolyModel line = parse_poly("x + y = 0", kXY);
  EmpiricalSystem good{"good", {{1, -1}, {2, -2}}};
  EmpiricalSystem bad{"bad", {{1, 1}}};
  CHECK(boolean_similarity(line, good, 0) == 1);
  CHECK(boolean_similarity(line, bad, 0) == 0);

  PolyModel quad = parse_poly("2x^2 + 3y = 0", kXY);
  EmpiricalSystem e{"e", {{1, -2.0 / 3.0}, {0, 0}, {3, -6}}};
  CHECK(boolean_similarity(quad, e, 1e-9) == 1);

  // conjunction over a disjoint union of tuple sets
  EmpiricalSystem both{"both", {{1, -1}, {2, -2}, {1, 1}}};
  CHECK(boolean_similarity(line, both, 0) ==
        (boolean_similarity(line, good, 0) & boolean_similarity(line, bad, 0)));

  PolyModel uncertain = parse_poly("ax = 0", kXY);
  CHECK_THROWS_AS(boolean_similarity(uncertain, good, 0), Error);
  CHECK_THROWS_AS(boolean_similarity(line, good, -1.0), Error);
}

TEST_CASE("verify_match_mapping over the uncertainty-decreasing chain") {
  std::vector<PolyModel> chain = {
      parse_poly("ax^2 + by + cx + d = 10", kXY), parse_poly("ax^2 + by + cx = 10", kXY),
      parse_poly("ax^2 + by + 7x = 10", kXY),     parse_poly("ax^2 + 3y + 7x = 10", kXY),
      parse_poly("9x^2 + 3y + 7x = 10", kXY),
  };
  std::vector<dlp::Measure> sigmas;
  for (double s : {10.0, 8.0, 6.0, 4.0, 2.0})
    sigmas.push_back(dlp::Measure{"gaussian", s, dlp::Orientation::Maximize, 5.0, 1.1, 0});

  std::vector<std::size_t> identity{0, 1, 2, 3, 4};
  dlp::MatchReport ok = dlp::verify_match_mapping(chain, sigmas, identity);
  CHECK(ok.ok());

  // single model: only reflexive pairs
  dlp::MatchReport single = dlp::verify_match_mapping({chain[0]}, {sigmas[0]}, {0});
  CHECK(single.ok());

  // swapping two measures breaks the homomorphism and names the pair
  std::vector<std::size_t> swapped{0, 2, 1, 3, 4};
  dlp::MatchReport bad = dlp::verify_match_mapping(chain, sigmas, swapped);
  CHECK(!bad.ok());
  bool found_pair = false;
  for (const dlp::MatchViolation& v : bad.violations)
    if ((v.a == 1 && v.b == 2) || (v.a == 2 && v.b == 1)) found_pair = true;
  CHECK(found_pair);
}
