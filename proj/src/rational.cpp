#include "rational.hpp"

#include <cstdlib>
#include <numeric>

#include "error.hpp"

namespace dlpkit {

namespace {

void normalize(long long& num, long long& den) {
  require(den != 0, Errc::invalid_argument, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

}  // namespace

Rational::Rational(long long n) : num(n), den(1) {}

Rational::Rational(long long n, long long d) : num(n), den(d) { normalize(num, den); }

Rational Rational::parse(const std::string& text) {
  require(!text.empty(), Errc::parse, "empty rational literal");
  size_t slash = text.find('/');
  if (slash != std::string::npos) {
    return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  }
  size_t dot = text.find('.');
  if (dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    long long den = 1;
    for (size_t i = dot + 1; i < text.size(); ++i) den *= 10;
    return Rational(std::stoll(digits), den);
  }
  return Rational(std::stoll(text));
}

Rational Rational::operator+(const Rational& o) const {
  return Rational(num * o.den + o.num * den, den * o.den);
}

Rational Rational::operator-(const Rational& o) const {
  return Rational(num * o.den - o.num * den, den * o.den);
}

Rational Rational::operator*(const Rational& o) const {
  return Rational(num * o.num, den * o.den);
}

Rational Rational::operator-() const {
  Rational r;
  r.num = -num;
  r.den = den;
  return r;
}

bool Rational::operator<(const Rational& o) const { return num * o.den < o.num * den; }

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

}  // namespace dlpkit
