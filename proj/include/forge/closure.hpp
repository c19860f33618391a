#pragma once

#include "forge/theory.hpp"

#include <optional>

namespace forge {

struct AutomorphismSet {
  int size = 0;
  std::vector<std::vector<int>> perms;  // full listing, identity included
};

/// Full automorphism group by partition refinement + backtracking.
/// The default bound keeps the worst case at desk scale.
AutomorphismSet automorphisms(const FiniteStructure& s, int size_bound = 10);

/// Elements fixed by every automorphism fixing the tuple pointwise.
std::set<int> dcl(const FiniteStructure& s, std::span<const int> tuple,
                  int size_bound = 10);

/// Orbit sizes under the pointwise stabilizer of the tuple. On a finite
/// structure every orbit is finite, so the operation reports sizes and the
/// derived predicate acl_t keeps orbits of size at most t (t = 1 recovers
/// the definable closure).
std::vector<int> acl_orbit_sizes(const FiniteStructure& s, std::span<const int> tuple,
                                 int size_bound = 10);
std::set<int> acl_below(const FiniteStructure& s, std::span<const int> tuple, int t,
                        int size_bound = 10);

struct Amalgam {
  FiniteStructure glued;
  std::vector<int> emb_b;  // label of B's element i inside glued
  std::vector<int> emb_c;
};

/// Strong amalgam of B and C over A along the given embeddings: a structure
/// on |B|+|C|-|A| points whose two embeddings agree on A and are disjoint
/// elsewhere, consistent with the oracle. The free amalgam (all undecided
/// cross atoms false) is tried first; returns nothing when every completion
/// of the cross atoms is rejected.
std::optional<Amalgam> strong_amalgam(const FiniteStructure& a, const FiniteStructure& b,
                                      const FiniteStructure& c,
                                      std::span<const int> emb_ab,
                                      std::span<const int> emb_ac,
                                      const AgeOracle& oracle);

struct AmalgamCase {
  FiniteStructure a, b, c;
  std::vector<int> emb_ab, emb_ac;
  bool ok = false;
};

struct AmalgamReport {
  int size_bound = 0;
  long pairs_tested = 0;
  bool all_pass = true;
  std::vector<AmalgamCase> failures;
};

/// Exhaustively tests every triple (A -> B, A -> C) from the age with
/// |B|, |C| <= size_bound, up to isomorphism of the configuration.
AmalgamReport check_strong_amalgamation(const AgeOracle& oracle, int size_bound = 4);

struct DuplicationReport {
  int width_bound = 0;
  long types_tested = 0;
  bool pass = true;
  // first failure, when present: the type and the duplicated position
  std::optional<QfType> counterexample;
  int counterexample_position = -1;
  // a found duplicating extension for spot verification
  std::optional<QfType> witness;
};

/// For every complete non-redundant type p consistent with the theory, of
/// width <= width_bound, and every position x of p, searches for a
/// non-redundant consistent q on one more variable implying both copies of
/// p. Reports the first failure, or PASS.
DuplicationReport check_duplication(const TheoryRef& theory, int width_bound = 3);

/// Blowup: every element becomes a fresh equivalence class of n points;
/// base relations lift coordinate-wise, a new eqv relation holds exactly
/// within classes.
FiniteStructure blowup(const FiniteStructure& base, int n);

}  // namespace forge
