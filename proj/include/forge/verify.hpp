#pragma once

#include "forge/graphon.hpp"

namespace forge {

struct VerificationReport {
  std::string theory_name;
  std::string test_name;
  long draws = 0;
  std::string statistic;  // chi_square | rate_curve | count | tv | exact
  double value = 0.0;
  double threshold = 0.0;
  std::string verdict;  // PASS | FAIL | SKIPPED
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::string> notes;

  bool passed() const { return verdict == "PASS"; }
};

/// Upper tail of the chi-square distribution (regularized incomplete gamma).
double chi_square_p_value(double stat, int dof);

using StructureGen = std::function<FiniteStructure(std::uint64_t draw_index)>;

/// Chi-square comparison of the empirical labeled-structure distribution
/// against its symmetrization over all label permutations: within each
/// permutation orbit the counts must be uniform. PASS iff p > alpha.
VerificationReport exchangeability_test(const std::string& theory_name,
                                        const StructureGen& gen, int n, long draws,
                                        std::uint64_t seed, double alpha);

/// Convenience wrapper sampling from a frozen base trace.
VerificationReport exchangeability_test(const std::string& theory_name,
                                        const ConstructionTrace& base,
                                        const MeasureSpec& m, int n, long draws,
                                        std::uint64_t seed, double alpha);

struct RatePoint {
  int n = 0;
  long draws = 0;
  double rate = 0.0;
  double half_ci = 0.0;  // 95% Wilson half-width
};

/// Per-n fraction of draws in which the fixed tuple (0..k-1) has some label
/// witnessing the axiom matrix. Verdict: nondecreasing within confidence
/// intervals and reaching the target at some n.
VerificationReport axiom_satisfaction(const std::string& theory_name,
                                      const ConstructionTrace& base, int genuine_index,
                                      const MeasureSpec& m, std::span<const int> n_list,
                                      long draws, std::uint64_t seed, double target);

/// Counts universal-constraint violations over sampled structures; PASS iff
/// exactly zero (no tolerance).
VerificationReport forbidden_check(const std::string& theory_name,
                                   const ConstructionTrace& base, const MeasureSpec& m,
                                   int n, long draws, std::uint64_t seed);
VerificationReport forbidden_check_structures(const std::string& theory_name,
                                              const TheoryRef& theory,
                                              std::span<const FiniteStructure> samples);

/// Exact semigroup laws for the min-graph signature, checked literally on a
/// sample: totality, functionality, commutativity, associativity,
/// idempotence.
bool min_semigroup_laws_hold(const FiniteStructure& s);

}  // namespace forge
