#include "similarity.hpp"

#include <sstream>

#include "error.hpp"
#include "poly.hpp"

namespace dlpkit {

const char* ordering_name(Ordering o) {
  switch (o) {
    case Ordering::Less:
      return "less";
    case Ordering::Equal:
      return "equal";
    case Ordering::Greater:
      return "greater";
    case Ordering::Incomparable:
      return "incomparable";
  }
  return "?";
}

}  // namespace dlpkit

namespace dlpkit::dlp {

namespace {

Ordering by_level(const Measure& a, const Measure& b) {
  if (a.family != b.family) return Ordering::Incomparable;
  if (a.level > b.level) return Ordering::Greater;
  if (a.level < b.level) return Ordering::Less;
  return Ordering::Equal;
}

bool geq(Ordering o) { return o == Ordering::Greater || o == Ordering::Equal; }

}  // namespace

Ordering order_lu(const Measure& a, const Measure& b) { return by_level(a, b); }

Ordering order_lg(const Measure& a, const Measure& b) { return by_level(a, b); }

Ordering order_ls(const Measure& a, const Measure& b) {
  if (a.family != b.family) return Ordering::Incomparable;
  return Ordering::Equal;
}

std::string MatchReport::str() const {
  if (violations.empty()) return "match mapping holds: no violated pairs\n";
  std::ostringstream out;
  for (const MatchViolation& v : violations) {
    const char* what = v.relation == 'u'   ? "uncertainty"
                       : v.relation == 'g' ? "generality"
                                           : "simplicity";
    out << "pair (" << v.a << ", " << v.b << ") violates the " << what << " implication\n";
  }
  return out.str();
}

MatchReport verify_match_mapping_generic(
    std::size_t model_count, const std::vector<Measure>& measures,
    const std::vector<std::size_t>& f_map,
    const std::function<Ordering(std::size_t, std::size_t)>& mu,
    const std::function<Ordering(std::size_t, std::size_t)>& mg,
    const std::function<Ordering(std::size_t, std::size_t)>& ms) {
  require(f_map.size() == model_count, Errc::invalid_argument,
          "match mapping must be total on the model list");
  for (std::size_t idx : f_map)
    require(idx < measures.size(), Errc::invalid_argument, "match mapping index out of range");

  MatchReport report;
  for (std::size_t a = 0; a < model_count; ++a) {
    for (std::size_t b = 0; b < model_count; ++b) {
      if (a == b) continue;
      const Measure& la = measures[f_map[a]];
      const Measure& lb = measures[f_map[b]];
      if (geq(mu(a, b)) && !geq(order_lu(la, lb))) report.violations.push_back({a, b, 'u'});
      if (geq(mg(a, b)) && !geq(order_lg(la, lb))) report.violations.push_back({a, b, 'g'});
      if (geq(ms(a, b)) && !geq(order_ls(la, lb))) report.violations.push_back({a, b, 's'});
    }
  }
  return report;
}

MatchReport verify_match_mapping(const std::vector<models::PolyModel>& mods,
                                 const std::vector<Measure>& measures,
                                 const std::vector<std::size_t>& f_map) {
  auto mu = [&](std::size_t a, std::size_t b) { return models::order_mu(mods[a], mods[b]); };
  auto mg = [&](std::size_t a, std::size_t b) { return models::order_mg(mods[a], mods[b]); };
  auto ms = [&](std::size_t a, std::size_t b) { return models::order_ms(mods[a], mods[b]); };
  return verify_match_mapping_generic(mods.size(), measures, f_map, mu, mg, ms);
}

}  // namespace dlpkit::dlp
