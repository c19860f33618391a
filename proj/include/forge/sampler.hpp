#pragma once

#include "forge/construction.hpp"
#include "forge/rng.hpp"

namespace forge {

/// Sampling measure on the reals: full support and atomless (up to the
/// documented 2^-bits discretization of the quantile images).
struct MeasureSpec {
  enum class Family { Cauchy, Logistic } family = Family::Cauchy;
  double location = 0.0;
  double scale = 1.0;
  int bits = 96;

  static MeasureSpec parse(const std::string& family, double location = 0.0,
                           double scale = 1.0, int bits = 96);
  std::string family_name() const;
};

struct SampleBatch {
  std::uint64_t seed = 0;
  std::vector<Rational> points;
};

/// n exact rationals: 128-bit uniform draws through a high-precision
/// quantile evaluation, rounded to denominator 2^bits. Distinct by
/// construction (colliding draws are replaced from the same stream).
SampleBatch sample_points(const MeasureSpec& m, int n, Rng rng);

double cdf(const MeasureSpec& m, double x);
double cdf_at(const MeasureSpec& m, const Quad& x);

/// The finite structure a tuple of sample points induces through the trace:
/// label i carries the relations of the interval of points[i]. With
/// auto_extend the trace is refined (on a private copy) until the points are
/// interior and separated; otherwise insufficient depth is an error.
FiniteStructure induce(const ConstructionTrace& trace, std::span<const Rational> points,
                       bool auto_extend);

/// induce() against a shared frozen base trace (copied per call).
FiniteStructure sample_from_base(const ConstructionTrace& base, const MeasureSpec& m,
                                 int n, std::uint64_t seed);

/// One draw from the finite-n marginal: build the trace, sample points,
/// auto-extend, induce. Deterministic in all inputs.
FiniteStructure sample_structure(const TheoryRef& theory, int n, const MeasureSpec& m,
                                 std::uint64_t seed, long base_stages);

}  // namespace forge
