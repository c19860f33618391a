#include "forge/sampler.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>

namespace forge {

namespace {

using BF = boost::multiprecision::cpp_bin_float_50;

Rational quantile_rational(const MeasureSpec& m, std::uint64_t hi, std::uint64_t lo) {
  // u = (hi*2^64 + lo + 1/2) / 2^128, strictly inside (0,1)
  BF u = BF(hi);
  u *= BF("18446744073709551616");  // 2^64
  u += BF(lo);
  u += BF(0.5);
  u = ldexp(u, -128);
  BF x;
  if (m.family == MeasureSpec::Family::Cauchy) {
    x = tan(boost::math::constants::pi<BF>() * (u - BF(0.5)));
  } else {
    x = log(u / (BF(1) - u));
  }
  x = BF(m.location) + BF(m.scale) * x;
  // round to an exact rational with denominator 2^bits
  BF scaled = ldexp(x, m.bits);
  BigInt num = boost::multiprecision::floor(scaled + BF(0.5)).convert_to<BigInt>();
  return Rational(num, BigInt(1) << m.bits);
}

}  // namespace

MeasureSpec MeasureSpec::parse(const std::string& family, double location, double scale,
                               int bits) {
  MeasureSpec m;
  if (family == "cauchy")
    m.family = Family::Cauchy;
  else if (family == "logistic")
    m.family = Family::Logistic;
  else
    throw ForgeError("bad_measure", "unknown measure family: " + family +
                                        " (available: cauchy, logistic)");
  if (!(scale > 0)) throw ForgeError("bad_measure", "scale must be positive");
  if (bits < 16 || bits > 512) throw ForgeError("bad_measure", "bits out of range");
  m.location = location;
  m.scale = scale;
  m.bits = bits;
  return m;
}

std::string MeasureSpec::family_name() const {
  return family == Family::Cauchy ? "cauchy" : "logistic";
}

SampleBatch sample_points(const MeasureSpec& m, int n, Rng rng) {
  if (n < 1) throw ForgeError("bad_argument", "need at least one point");
  SampleBatch batch;
  batch.seed = rng.key;
  batch.points.reserve(n);
  std::set<Rational> seen;
  for (int i = 0; i < n; ++i) {
    Rational p;
    do {
      std::uint64_t hi = rng.next(), lo = rng.next();
      p = quantile_rational(m, hi, lo);
    } while (!seen.insert(p).second);
    batch.points.push_back(std::move(p));
  }
  return batch;
}

double cdf(const MeasureSpec& m, double x) {
  double z = (x - m.location) / m.scale;
  if (m.family == MeasureSpec::Family::Cauchy)
    return 0.5 + std::atan(z) / 3.14159265358979323846;
  return 1.0 / (1.0 + std::exp(-z));
}

double cdf_at(const MeasureSpec& m, const Quad& x) {
  long double a = x.a.convert_to<long double>();
  long double b = x.b.convert_to<long double>();
  long double v = a + b * 1.41421356237309504880168872420969808L;
  long double z = (v - static_cast<long double>(m.location)) /
                  static_cast<long double>(m.scale);
  if (m.family == MeasureSpec::Family::Cauchy)
    return static_cast<double>(0.5L + std::atan(z) / 3.14159265358979323846264338327950288L);
  return static_cast<double>(1.0L / (1.0L + std::exp(-z)));
}

FiniteStructure induce(const ConstructionTrace& trace, std::span<const Rational> points,
                       bool auto_extend) {
  for (size_t i = 0; i < points.size(); ++i)
    for (size_t j = i + 1; j < points.size(); ++j)
      if (points[i] == points[j])
        throw ForgeError("repeated_point", "induce needs pairwise distinct points");
  QfType t;
  if (auto_extend) {
    ConstructionTrace ext = trace;
    ext.extend_for_points(points);
    t = ext.type_of_tuple(points);
  } else {
    t = trace.type_of_tuple(points);
  }
  return structure_of_type(t);
}

FiniteStructure sample_from_base(const ConstructionTrace& base, const MeasureSpec& m,
                                 int n, std::uint64_t seed) {
  SampleBatch batch = sample_points(m, n, Rng(seed));
  return induce(base, batch.points, true);
}

FiniteStructure sample_structure(const TheoryRef& theory, int n, const MeasureSpec& m,
                                 std::uint64_t seed, long base_stages) {
  ConstructionTrace base = ConstructionTrace::run(theory, base_stages);
  return sample_from_base(base, m, n, seed);
}

}  // namespace forge
