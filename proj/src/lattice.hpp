#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dlpkit::lattice {

constexpr int kMaxDim = 24;

// Point of {0,1}^n. Component 1 is the most significant bit of the canonical
// text form, so "1110" has bits 1,2,3 set and bit 4 clear.
struct BoolVec {
  int n = 0;
  std::uint32_t word = 0;  // bit (n-1-i) of word holds component i+1

  BoolVec() = default;
  BoolVec(int dim, std::uint32_t w);

  static BoolVec parse(const std::string& bits);

  bool bit(int component) const;           // 1-based component index
  BoolVec with_bit(int component, bool value) const;
  int weight() const;
  std::string str() const;

  bool operator==(const BoolVec& o) const { return n == o.n && word == o.word; }
};

// Componentwise a <= b. Dimension mismatch is rejected.
bool vec_leq(const BoolVec& a, const BoolVec& b);

// k-valued vector with entries i/(k-1); stored as numerators.
struct KValuedVec {
  int k = 2;
  std::vector<int> numerators;

  KValuedVec(int levels, std::vector<int> nums);
  int n() const { return static_cast<int>(numerators.size()); }
};

bool kvec_leq(const KValuedVec& a, const KValuedVec& b);

// Increasing chain of vectors with Hamming-1 steps.
struct HanselChain {
  std::vector<BoolVec> elements;
  int length() const { return static_cast<int>(elements.size()); }
};

// Partition of {0,1}^n into Hansel chains, sorted by ascending length then by
// the lexicographically smallest first element.
struct ChainCover {
  int n = 0;
  std::vector<HanselChain> chains;

  // Index of the chain containing each vector, addressed by vector word.
  std::vector<int> chain_of;

  std::string to_text() const;  // one chain per line, "100 < 101"
};

ChainCover hansel_chains(int n);

// C(n, k) computed exactly; 0 when k < 0 or k > n.
long long binomial(int n, int k);

}  // namespace dlpkit::lattice
