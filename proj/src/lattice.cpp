#include "lattice.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "error.hpp"

namespace dlpkit::lattice {

BoolVec::BoolVec(int dim, std::uint32_t w) : n(dim), word(w) {
  require(dim >= 1 && dim <= kMaxDim, Errc::invalid_argument,
          "boolean vector dimension must be in 1..24, got " + std::to_string(dim));
  require(dim == 32 || (w >> dim) == 0, Errc::invalid_argument,
          "vector word has bits beyond dimension " + std::to_string(dim));
}

BoolVec BoolVec::parse(const std::string& bits) {
  require(!bits.empty() && bits.size() <= kMaxDim, Errc::parse,
          "bit string must have 1..24 characters: '" + bits + "'");
  std::uint32_t w = 0;
  for (char c : bits) {
    require(c == '0' || c == '1', Errc::parse,
            "bit string may contain only 0/1: '" + bits + "'");
    w = (w << 1) | static_cast<std::uint32_t>(c - '0');
  }
  return BoolVec(static_cast<int>(bits.size()), w);
}

bool BoolVec::bit(int component) const {
  require(component >= 1 && component <= n, Errc::invalid_argument,
          "component index out of range");
  return (word >> (n - component)) & 1u;
}

BoolVec BoolVec::with_bit(int component, bool value) const {
  require(component >= 1 && component <= n, Errc::invalid_argument,
          "component index out of range");
  std::uint32_t mask = 1u << (n - component);
  return BoolVec(n, value ? (word | mask) : (word & ~mask));
}

int BoolVec::weight() const { return std::popcount(word); }

std::string BoolVec::str() const {
  std::string s(static_cast<size_t>(n), '0');
  for (int i = 0; i < n; ++i)
    if ((word >> (n - 1 - i)) & 1u) s[static_cast<size_t>(i)] = '1';
  return s;
}

bool vec_leq(const BoolVec& a, const BoolVec& b) {
  require(a.n == b.n, Errc::invalid_argument,
          "dimension mismatch: " + std::to_string(a.n) + " vs " + std::to_string(b.n));
  return (a.word & ~b.word) == 0;
}

KValuedVec::KValuedVec(int levels, std::vector<int> nums)
    : k(levels), numerators(std::move(nums)) {
  require(k >= 2, Errc::invalid_argument, "k-valued vector needs k >= 2");
  for (int v : numerators)
    require(v >= 0 && v <= k - 1, Errc::invalid_argument,
            "k-valued entry numerator out of 0..k-1");
}

bool kvec_leq(const KValuedVec& a, const KValuedVec& b) {
  require(a.k == b.k, Errc::invalid_argument, "k mismatch between k-valued vectors");
  require(a.n() == b.n(), Errc::invalid_argument, "dimension mismatch between k-valued vectors");
  for (int i = 0; i < a.n(); ++i)
    if (a.numerators[static_cast<size_t>(i)] > b.numerators[static_cast<size_t>(i)]) return false;
  return true;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

namespace {

// Grow-shrink recursion: a chain (v1..vk) over n-1 bits yields the grown chain
// (v1.0,..,vk.0,vk.1) and the shrunk chain (v1.1,..,v(k-1).1), where ".b"
// prepends b as the new most significant component.
std::vector<std::vector<std::uint32_t>> build_chains(int n) {
  std::vector<std::vector<std::uint32_t>> chains{{0u, 1u}};
  for (int dim = 2; dim <= n; ++dim) {
    std::uint32_t high = 1u << (dim - 1);
    std::vector<std::vector<std::uint32_t>> next;
    next.reserve(chains.size() * 2);
    for (const auto& c : chains) {
      std::vector<std::uint32_t> grown;
      grown.reserve(c.size() + 1);
      for (std::uint32_t v : c) grown.push_back(v);
      grown.push_back(c.back() | high);
      next.push_back(std::move(grown));
      if (c.size() > 1) {
        std::vector<std::uint32_t> shrunk;
        shrunk.reserve(c.size() - 1);
        for (size_t i = 0; i + 1 < c.size(); ++i) shrunk.push_back(c[i] | high);
        next.push_back(std::move(shrunk));
      }
    }
    chains = std::move(next);
  }
  return chains;
}

}  // namespace

ChainCover hansel_chains(int n) {
  require(n >= 1 && n <= kMaxDim, Errc::invalid_argument,
          "chain cover dimension must be in 1..24, got " + std::to_string(n));
  auto raw = build_chains(n);
  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.front() < b.front();
  });

  ChainCover cover;
  cover.n = n;
  cover.chains.reserve(raw.size());
  cover.chain_of.assign(1ull << n, -1);
  for (size_t ci = 0; ci < raw.size(); ++ci) {
    HanselChain chain;
    chain.elements.reserve(raw[ci].size());
    for (std::uint32_t w : raw[ci]) {
      chain.elements.emplace_back(n, w);
      cover.chain_of[w] = static_cast<int>(ci);
    }
    cover.chains.push_back(std::move(chain));
  }
  return cover;
}

std::string ChainCover::to_text() const {
  std::ostringstream out;
  for (const auto& chain : chains) {
    for (size_t i = 0; i < chain.elements.size(); ++i) {
      if (i) out << " < ";
      out << chain.elements[i].str();
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace dlpkit::lattice
