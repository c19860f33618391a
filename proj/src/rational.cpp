#include "forge/rational.hpp"

namespace forge {

std::string rational_str(const Rational& q) {
  std::string s = numerator(q).str();
  if (denominator(q) != 1) s += "/" + denominator(q).str();
  return s;
}

Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt n(s.substr(0, slash)), d(s.substr(slash + 1));
    if (d == 0) throw std::invalid_argument("zero denominator");
    return Rational(n, d);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad rational literal: " + s);
  }
}

namespace {

// Integer of smallest absolute value strictly inside (lo, hi), if any.
bool integer_in_open(const Rational& lo, const Rational& hi, BigInt& out) {
  if (lo < 0 && hi > 0) {
    out = 0;
    return true;
  }
  BigInt n = rat_floor(lo) + 1;  // least integer > lo
  if (Rational(n) >= hi) return false;
  if (hi <= 0) n = rat_ceil(hi) - 1;  // greatest integer < hi, closer to zero
  out = n;
  return true;
}

}  // namespace

Rational simplest_in_open(const Rational& lo, const Rational& hi) {
  if (!(lo < hi)) throw std::invalid_argument("simplest_in_open: empty interval");
  BigInt n;
  if (integer_in_open(lo, hi, n)) return Rational(n);
  // No integer inside: both endpoints share the integer cell [n, n+1].
  n = rat_floor(lo);
  Rational flo = lo - n, fhi = hi - n;  // 0 <= flo < fhi <= 1
  if (flo == 0) {
    // (n, hi): 1/ceil-ish descent still handled by the reciprocal step below
    // using an arbitrarily large lower bound for 1/x; recurse on mirrored form.
    // x in (0, fhi)  <=>  1/x in (1/fhi, inf): smallest denominator is the
    // integer floor(1/fhi)+1.
    BigInt m = rat_floor(1 / fhi) + 1;
    if (Rational(1, m) >= fhi) ++m;  // guard the boundary 1/fhi rational
    return n + Rational(1, m);
  }
  Rational inner = simplest_in_open(1 / fhi, 1 / flo);
  return n + 1 / inner;
}

}  // namespace forge
