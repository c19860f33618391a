#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace forge {

/// Domain error with a machine-readable code, surfaced by the CLI as JSON.
struct ForgeError : std::runtime_error {
  std::string code;
  ForgeError(std::string code_, const std::string& msg)
      : std::runtime_error(msg), code(std::move(code_)) {}
};

struct RelSym {
  std::string name;
  int arity = 0;
  bool operator==(const RelSym&) const = default;
};

struct FuncSym {
  std::string name;
  int arity = 0;  // 0 = constant symbol
  bool operator==(const FuncSym&) const = default;
};

struct Signature {
  std::vector<RelSym> relations;
  std::vector<FuncSym> functions;  // retained only before relationalization

  bool relational() const { return functions.empty(); }
  int rel_index(const std::string& name) const {
    for (size_t i = 0; i < relations.size(); ++i)
      if (relations[i].name == name) return static_cast<int>(i);
    return -1;
  }
  int func_index(const std::string& name) const {
    for (size_t i = 0; i < functions.size(); ++i)
      if (functions[i].name == name) return static_cast<int>(i);
    return -1;
  }
  void validate() const;
  bool operator==(const Signature&) const = default;
};

/// A finite labeled structure on elements 0..size-1. Relations are explicit
/// tuple sets; no symmetry or reflexivity is assumed by storage — such
/// properties are theory constraints.
struct FiniteStructure {
  Signature sig;
  int size = 0;
  std::vector<std::set<std::vector<int>>> tuples;  // one set per relation

  FiniteStructure() = default;
  FiniteStructure(Signature s, int n)
      : sig(std::move(s)), size(n), tuples(sig.relations.size()) {}

  bool holds(int rel, std::span<const int> t) const {
    return tuples[rel].count(std::vector<int>(t.begin(), t.end())) > 0;
  }
  void set(int rel, std::vector<int> t, bool value);
  void check_tuple(int rel, std::span<const int> t) const;

  /// Relabels elements by the permutation perm (element i becomes perm[i]).
  FiniteStructure relabeled(std::span<const int> perm) const;

  /// Deterministic serialization key; equal iff structures are identical.
  std::string key() const;
  /// Minimal key over all relabelings: equal iff isomorphic. Exponential in
  /// size; intended for the small structures of the diagnostics.
  std::string canonical_key() const;
};

enum class Tri : std::uint8_t { False = 0, True = 1, Unknown = 2 };

inline Tri tri_not(Tri t) {
  if (t == Tri::Unknown) return t;
  return t == Tri::True ? Tri::False : Tri::True;
}

/// The atomic diagram of a tuple of width variables: for every relation
/// symbol and every argument tuple, a three-valued entry, plus a partition of
/// the variables recording equalities. Partial types appear during witness
/// search; "complete" is a predicate, not a separate representation.
struct QfType {
  Signature sig;
  int width = 0;
  std::vector<std::vector<Tri>> atoms;  // per relation, flat table of size width^arity
  std::vector<int> eq_class;            // eq_class[i] = least equivalent index

  QfType() = default;
  QfType(Signature s, int w);

  size_t flat_index(int rel, std::span<const int> args) const;
  Tri get(int rel, std::span<const int> args) const {
    return atoms[rel][flat_index(rel, args)];
  }
  void set(int rel, std::span<const int> args, Tri v) {
    atoms[rel][flat_index(rel, args)] = v;
  }

  bool same_class(int i, int j) const { return eq_class[i] == eq_class[j]; }
  bool non_redundant() const;
  bool complete() const;

  /// Rebuilds the type as seen through an injection of positions:
  /// variable i of the result is variable positions[i] of this type.
  QfType restrict_to(std::span<const int> positions) const;

  std::string key() const;
};

/// diagram_of: the complete quantifier-free type realized by a tuple of
/// (possibly repeating) elements of a finite structure.
QfType diagram_of(const FiniteStructure& s, std::span<const int> tuple);

FiniteStructure induced_substructure(const FiniteStructure& s,
                                     std::span<const int> tuple);

/// Converts a complete non-redundant type into the structure it describes.
FiniteStructure structure_of_type(const QfType& p);

bool type_extends(const QfType& q, const QfType& p, std::span<const int> positions);

/// One literal of a quantifier-free formula in DNF: a relation atom over
/// variable indices, or an equality (rel < 0), possibly negated.
struct Literal {
  int rel = -1;  // -1 means equality vars[0] = vars[1]
  std::vector<int> vars;
  bool positive = true;
  auto operator<=>(const Literal&) const = default;
};

/// Quantifier-free formula over variables 0..width-1, stored canonically as a
/// disjunction of conjunctions of literals. Parser-produced boolean trees are
/// normalized on construction; an empty disjunct list is the constant false,
/// a disjunct with no literals is the constant true.
struct QfFormula {
  int width = 0;
  std::vector<std::string> var_names;             // optional, for parser output
  std::vector<std::vector<Literal>> disjuncts;

  void normalize();
  bool eval(const FiniteStructure& s, std::span<const int> assignment) const;

  /// Three-valued evaluation on a (possibly partial) type: the formula's
  /// variable i is instantiated at type position positions[i].
  template <class TypeLike>
  Tri eval_on(const TypeLike& t, std::span<const int> positions) const;

  QfFormula substituted(std::span<const int> map, int new_width) const;
  std::string key() const;
};

/// Map-based evaluation entry point with the named-variable contract.
bool eval_qf(const QfFormula& f, const FiniteStructure& s,
             const std::map<std::string, int>& assignment);

// ---- implementation of the template ----

template <class TypeLike>
Tri QfFormula::eval_on(const TypeLike& t, std::span<const int> positions) const {
  bool any_unknown = false;
  int buf[16];
  for (const auto& disj : disjuncts) {
    bool dis_false = false, dis_unknown = false;
    for (const Literal& lit : disj) {
      Tri v;
      if (lit.rel < 0) {
        v = t.same_class(positions[lit.vars[0]], positions[lit.vars[1]])
                ? Tri::True
                : Tri::False;
      } else if (lit.vars.size() <= 16) {
        for (size_t k = 0; k < lit.vars.size(); ++k) buf[k] = positions[lit.vars[k]];
        v = t.get(lit.rel, std::span<const int>(buf, lit.vars.size()));
      } else {
        std::vector<int> args(lit.vars.size());
        for (size_t k = 0; k < lit.vars.size(); ++k) args[k] = positions[lit.vars[k]];
        v = t.get(lit.rel, args);
      }
      if (!lit.positive) v = tri_not(v);
      if (v == Tri::False) { dis_false = true; break; }
      if (v == Tri::Unknown) dis_unknown = true;
    }
    if (!dis_false) {
      if (!dis_unknown) return Tri::True;
      any_unknown = true;
    }
  }
  return any_unknown ? Tri::Unknown : Tri::False;
}

}  // namespace forge
