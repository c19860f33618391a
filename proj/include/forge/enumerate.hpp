#pragma once

#include "forge/completion.hpp"

namespace forge {

/// Canonical representative of a complete type under variable permutation.
QfType canonical_type(const QfType& p);

/// Every complete non-redundant type of the given width consistent with the
/// theory's universal constraints; one representative per isomorphism class
/// when dedupe is set. Exponential in width — diagnostics scale only.
std::vector<QfType> consistent_types(const CompiledTheory& th, int width, bool dedupe);

/// Every complete consistent one-point extension of `base` (which occupies
/// variables 0..base.width-1 of each result).
std::vector<QfType> one_point_extensions(const CompiledTheory& th, const QfType& base);

/// The finite structures of size 1..max_size permitted by the universal
/// constraints, up to isomorphism (the age, under the documented assumption
/// that the universal part axiomatizes it).
std::vector<FiniteStructure> enumerate_age(const CompiledTheory& th, int max_size);

}  // namespace forge
