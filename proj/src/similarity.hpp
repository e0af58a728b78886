#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "ordering.hpp"

namespace dlpkit::dlp {

enum class Orientation { Maximize, Minimize };

// Parameterized evaluation criterion. `level` is the uncertainty parameter:
// Gaussian sigma, or the kappa-scaled grid stride of a density measure.
struct Measure {
  std::string family;
  double level = 0.0;
  Orientation orientation = Orientation::Maximize;
  double mu = 0.0;         // gaussian: mean
  double threshold = 0.0;  // family acceptance level
  double aux = 0.0;        // family-specific extra (e.g. radius bound)
};

// Within a family, uncertainty and generality are ordered by level (larger
// level = more uncertain = more general) and all measures are equally simple.
// Measures of different families are incomparable.
Ordering order_lu(const Measure& a, const Measure& b);
Ordering order_lg(const Measure& a, const Measure& b);
Ordering order_ls(const Measure& a, const Measure& b);

struct MatchViolation {
  std::size_t a = 0;
  std::size_t b = 0;
  char relation = 'u';  // which implication failed: 'u', 'g' or 's'
};

struct MatchReport {
  std::vector<MatchViolation> violations;
  bool ok() const { return violations.empty(); }
  std::string str() const;
};

// Homomorphism check: for every ordered pair (a,b), Ma >=Mg Mb must imply
// F(Ma) >=Lg F(Mb), and likewise for the uncertainty and simplicity orders.
// Model orders are supplied as callbacks so any model family can be checked.
MatchReport verify_match_mapping_generic(
    std::size_t model_count, const std::vector<Measure>& measures,
    const std::vector<std::size_t>& f_map,
    const std::function<Ordering(std::size_t, std::size_t)>& mu,
    const std::function<Ordering(std::size_t, std::size_t)>& mg,
    const std::function<Ordering(std::size_t, std::size_t)>& ms);

}  // namespace dlpkit::dlp

namespace dlpkit::models {
struct PolyModel;
}

namespace dlpkit::dlp {

MatchReport verify_match_mapping(const std::vector<models::PolyModel>& models,
                                 const std::vector<Measure>& measures,
                                 const std::vector<std::size_t>& f_map);

}  // namespace dlpkit::dlp
