#pragma once

#include "forge/rational.hpp"

namespace forge {

/// Exact element a + b*sqrt(2) of the quadratic field Q[sqrt(2)].
/// Interval boundaries keep b != 0 so they are irrational and can never
/// coincide with a sampled or enumerated rational.
struct Quad {
  Rational a;  // rational part
  Rational b;  // coefficient of sqrt(2)

  Quad() = default;
  Quad(Rational a_, Rational b_) : a(std::move(a_)), b(std::move(b_)) {}
  explicit Quad(const Rational& r) : a(r), b(0) {}

  bool irrational() const { return b != 0; }
  double approx() const {
    return a.convert_to<double>() + b.convert_to<double>() * 1.4142135623730951;
  }

  Quad operator+(const Quad& o) const { return {a + o.a, b + o.b}; }
  Quad operator-(const Quad& o) const { return {a - o.a, b - o.b}; }

  /// Sign of a + b*sqrt(2), exactly.
  int sgn() const {
    int sa = sign(a), sb = sign(b);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: compare a^2 with 2 b^2. Equality would force b = 0.
    Rational t = a * a - 2 * b * b;
    return sa > 0 ? sign(t) : -sign(t);
  }

  int compare(const Quad& o) const { return (*this - o).sgn(); }
  int compare(const Rational& r) const { return Quad{a - r, b}.sgn(); }

  bool operator<(const Quad& o) const { return compare(o) < 0; }
  bool operator==(const Quad& o) const { return a == o.a && b == o.b; }
};

inline bool operator<(const Rational& r, const Quad& q) { return q.compare(r) > 0; }
inline bool operator<=(const Rational& r, const Quad& q) { return q.compare(r) >= 0; }
inline bool operator<(const Quad& q, const Rational& r) { return q.compare(r) < 0; }
inline bool operator<=(const Quad& q, const Rational& r) { return q.compare(r) <= 0; }

/// A canonical irrational strictly inside the open rational interval (lo, hi):
/// midpoint plus an eighth of the width times sqrt(2).
inline Quad irrational_between(const Rational& lo, const Rational& hi) {
  if (!(lo < hi)) throw std::invalid_argument("irrational_between: empty interval");
  Rational mid = (lo + hi) / 2, delta = (hi - lo) / 8;
  return Quad{mid, delta};  // mid + delta*sqrt(2) < mid + 2*delta <= hi
}

}  // namespace forge
