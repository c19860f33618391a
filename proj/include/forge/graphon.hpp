#pragma once

#include "forge/sampler.hpp"

#include <functional>

namespace forge {

/// Piecewise-constant symmetric function on [0,1]^2 with part masses.
/// Exports from traces are random-free (all values 0 or 1); the undecided
/// tail mass outside the trace's covered range maps to value 0 and is
/// reported, so users can deepen the trace instead of trusting tails.
struct StepGraphon {
  std::vector<double> masses;
  std::vector<std::vector<double>> values;
  bool random_free = true;
  double unresolved_mass = 0.0;

  void validate() const;
  static StepGraphon constant(double p);
};

/// Exports a trace over a one-binary-relation signature: one part per
/// interior interval (plus the two outside tails), edge values read off the
/// trace type, masses from the measure's distribution function.
StepGraphon export_step_graphon(const ConstructionTrace& trace, const MeasureSpec& m);

/// Graph on n labels: each label lands in a part by mass, each edge appears
/// independently with the part-pair probability. Symmetric, irreflexive.
FiniteStructure w_random(const StepGraphon& W, int n, Rng rng);

using GraphGen = std::function<FiniteStructure(Rng)>;

struct CompareReport {
  long draws = 0;
  double tv = 0.0;
  long kept_a = 0, kept_b = 0;  // draws surviving the generators' own filters
};

/// Empirical total-variation distance between two generators of labeled
/// n-vertex structures. Generators may throw FilteredDraw to censor a draw
/// (used to condition on all points interior).
struct FilteredDraw {};

CompareReport distribution_compare(const GraphGen& a, const GraphGen& b, long draws,
                                   Rng rng);

}  // namespace forge
