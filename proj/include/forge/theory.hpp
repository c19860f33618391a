#pragma once

#include "forge/formula.hpp"
#include "forge/logic.hpp"

#include <array>
#include <memory>

namespace forge {

/// A finitely presented theory as written in the DSL: universal constraints,
/// extension axioms (for-all/exists blocks), and forbidden-pattern sugar.
struct SpecAxiom {
  std::vector<std::string> univ_vars;
  std::vector<std::string> exist_vars;
  Formula matrix;  // quantifier-free, may contain terms before relationalization
  std::string id;
  bool universal() const { return exist_vars.empty(); }
};

struct TheorySpec {
  std::string name;
  Signature sig;
  std::vector<SpecAxiom> axioms;
  std::vector<FiniteStructure> forbidden;  // sugar; compiled by expansion

  void validate(bool allow_functions) const;
};

/// One-point extension axiom (forall x0..x_{k-1} exists y) matrix(x,y):
/// matrix width is premise_width+1 and the witness is the last variable.
/// Universal constraints are mirrored as dummy axioms whose matrix ignores
/// the witness; the construction engine skips those during enlargement.
struct OnePointAxiom {
  int premise_width = 0;
  QfFormula matrix;
  std::string source;
  bool dummy = false;
};

/// Falsification trigger: setting an atom of relation `rel` to value
/// (false_value ? False : True) can break universal `universal_index`
/// through its literal `literal_index` (within disjunct_index).
struct UniversalTrigger {
  int universal_index;
  int disjunct_index;
  int literal_index;
};

struct CompiledTheory {
  std::string name;
  Signature sig;
  std::vector<QfFormula> universals;
  std::vector<OnePointAxiom> axioms;
  std::vector<int> genuine;  // indices of non-dummy axioms
  bool contradictory = false;  // some universal normalized to constant false

  // triggers[rel][value] lists universal literals falsified by giving an atom
  // of rel that truth value
  std::vector<std::array<std::vector<UniversalTrigger>, 2>> triggers;

  void finalize();  // builds genuine + triggers
};

using TheoryRef = std::shared_ptr<const CompiledTheory>;

/// Membership oracle for the class of finite structures permitted by the
/// universal constraints; the documented assumption is that for every
/// catalog entry this axiomatizes the age exactly.
struct AgeOracle {
  TheoryRef theory;

  explicit AgeOracle(TheoryRef t) : theory(std::move(t)) {}

  /// True iff no universal constraint is definitely violated; undecided
  /// atoms count as unconstrained, so this answers "consistent so far".
  bool consistent(const QfType& p) const;
};

bool consistent_with(const QfType& p, const AgeOracle& oracle);

TheorySpec parse_theory(const std::string& text);

/// Replaces every function and constant symbol by its graph relation,
/// adds the totality/uniqueness sentence schemas, and rewrites all axiom
/// matrices through the term translation. Identity on relational input.
TheorySpec relationalize(const TheorySpec& spec);

/// Compiles a relational TheorySpec into one-point form: multi-witness
/// extension axioms are chained through auxiliary relations, universal
/// axioms are kept and mirrored as dummy one-point axioms, forbidden
/// patterns become negative universal constraints.
CompiledTheory expand_to_one_point(const TheorySpec& spec);

TheoryRef compile(const TheorySpec& spec);

/// Built-in theory catalog; names as documented in the CLI.
TheorySpec catalog(const std::string& name);
std::vector<std::string> catalog_names();

/// The catalog entries whose compiled theories admit a sampler (the ones
/// passing the duplication check); order is stable.
std::vector<std::string> sampleable_catalog_names();

// -------- shared universal-constraint checking over type-like tables --------

template <class T>
concept TypeLike = requires(const T& t, int rel, std::span<const int> args, int i, int j) {
  { t.get(rel, args) } -> std::convertible_to<Tri>;
  { t.same_class(i, j) } -> std::convertible_to<bool>;
};

namespace detail {

template <TypeLike T>
bool universal_holds_everywhere(const CompiledTheory& th, int uidx, const T& type,
                                int width) {
  const QfFormula& u = th.universals[uidx];
  if (u.width == 0) return true;
  std::vector<int> asg(u.width, 0);
  while (true) {
    if (u.eval_on(type, asg) == Tri::False) return false;
    int k = u.width - 1;
    while (k >= 0 && ++asg[k] == width) asg[k--] = 0;
    if (k < 0) break;
  }
  return true;
}

}  // namespace detail

template <TypeLike T>
bool universals_ok_full(const CompiledTheory& th, const T& type, int width) {
  for (size_t u = 0; u < th.universals.size(); ++u)
    if (!detail::universal_holds_everywhere(th, static_cast<int>(u), type, width))
      return false;
  return true;
}

/// Incremental re-check after the atom (rel, args) was set to `value`:
/// only universal instantiations whose matrix references that very atom with
/// the falsified polarity can have newly become violated.
template <TypeLike T>
bool universals_ok_after_set(const CompiledTheory& th, const T& type, int width,
                             int rel, std::span<const int> args, Tri value) {
  if (value == Tri::Unknown) return true;
  const auto& trigs = th.triggers[rel][value == Tri::False ? 0 : 1];
  std::vector<int> asg;
  for (const auto& tr : trigs) {
    const QfFormula& u = th.universals[tr.universal_index];
    const Literal& lit = u.disjuncts[tr.disjunct_index][tr.literal_index];
    // unify the literal's variable pattern with the concrete argument tuple
    asg.assign(u.width, -1);
    bool ok = true;
    for (size_t k = 0; k < lit.vars.size(); ++k) {
      int v = lit.vars[k];
      if (asg[v] >= 0 && asg[v] != args[k]) { ok = false; break; }
      asg[v] = args[k];
    }
    if (!ok) continue;
    // enumerate the unconstrained variables
    std::vector<int> free_vars;
    for (int v = 0; v < u.width; ++v)
      if (asg[v] < 0) free_vars.push_back(v);
    std::vector<int> vals(free_vars.size(), 0);
    while (true) {
      for (size_t i = 0; i < free_vars.size(); ++i) asg[free_vars[i]] = vals[i];
      if (u.eval_on(type, asg) == Tri::False) return false;
      size_t k = free_vars.size();
      while (k > 0 && ++vals[k - 1] == width) vals[--k] = 0;
      if (k == 0) break;
    }
  }
  return true;
}

}  // namespace forge
