#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace forge {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt rat_floor(const Rational& q) {
  BigInt n = numerator(q), d = denominator(q);
  BigInt t = n / d;
  if (n < 0 && t * d != n) --t;
  return t;
}

inline BigInt rat_ceil(const Rational& q) { return -rat_floor(-q); }

inline int sign(const BigInt& x) { return x.sign(); }
inline int sign(const Rational& x) { return numerator(x).sign(); }

/// Renders "p" or "p/q" in lowest terms; parse_rational inverts it.
std::string rational_str(const Rational& q);
Rational parse_rational(const std::string& s);

/// The rational with the smallest denominator (then smallest numerator in
/// absolute value) strictly inside the open interval (lo, hi).
/// Stern–Brocot descent; requires lo < hi.
Rational simplest_in_open(const Rational& lo, const Rational& hi);

}  // namespace forge
