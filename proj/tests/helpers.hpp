#pragma once

#include <vector>

#include "mbf.hpp"
#include "rng.hpp"

namespace testutil {

using dlpkit::Rng;
using dlpkit::lattice::BoolVec;
using dlpkit::mbf::FnTable;

// Independent brute-force monotonicity filter (immediate successors).
inline bool brute_monotone(const FnTable& t) {
  for (std::uint32_t w = 0; w < t.size(); ++w)
    for (int b = 0; b < t.n; ++b) {
      std::uint32_t up = w | (1u << b);
      if (up != w && t.value(w) > t.value(up)) return false;
    }
  return true;
}

// All monotone functions of dimension n by filtering every truth table.
inline std::vector<FnTable> all_monotone(int n) {
  std::vector<FnTable> out;
  std::uint32_t cube = 1u << n;
  for (std::uint64_t bits = 0; bits < (1ull << cube); ++bits) {
    FnTable t(n);
    for (std::uint32_t w = 0; w < cube; ++w) t.set(w, (bits >> w) & 1);
    if (brute_monotone(t)) out.push_back(t);
  }
  return out;
}

// Random monotone function: upward closure of a random antichain.
inline FnTable random_monotone(int n, Rng& rng) {
  std::uint32_t mask = (1u << n) - 1;
  FnTable t(n);
  std::uint64_t kind = rng.below(16);
  if (kind == 0) return t;  // constant 0
  if (kind == 1) {          // constant 1
    for (std::uint32_t w = 0; w <= mask; ++w) t.set(w, 1);
    return t;
  }
  std::vector<std::uint32_t> antichain;
  std::uint64_t want = 1 + rng.below(static_cast<std::uint64_t>(n) + 2);
  for (int tries = 0; tries < 4 * static_cast<int>(want); ++tries) {
    std::uint32_t v = static_cast<std::uint32_t>(rng.next()) & mask;
    bool comparable = false;
    for (std::uint32_t a : antichain)
      if ((a & v) == a || (a & v) == v) comparable = true;
    if (!comparable) antichain.push_back(v);
    if (antichain.size() >= want) break;
  }
  for (std::uint32_t w = 0; w <= mask; ++w)
    for (std::uint32_t a : antichain)
      if ((a & w) == a) {
        t.set(w, 1);
        break;
      }
  return t;
}

}  // namespace testutil
