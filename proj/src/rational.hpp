#pragma once

#include <cstdint>
#include <string>

namespace dlpkit {

// Exact rational with normalized sign and gcd-reduced magnitude.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n);  // NOLINT: implicit integral conversion is intended
  Rational(long long n, long long d);

  static Rational parse(const std::string& text);  // "5", "-2/3", "0.25"

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator-() const;
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const;

  bool is_zero() const { return num == 0; }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
};

}  // namespace dlpkit
