#pragma once

#include "forge/logic.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace forge {

/// First-order term: a variable or a function application (constants are
/// 0-ary functions). Indices refer to a Signature.
struct Term {
  std::string var;        // nonempty for variables
  int func = -1;          // function index otherwise
  std::vector<Term> args;

  bool is_var() const { return !var.empty(); }
  static Term v(std::string name) { Term t; t.var = std::move(name); return t; }
  static Term f(int idx, std::vector<Term> a = {}) {
    Term t; t.func = idx; t.args = std::move(a); return t;
  }
};

/// Formula over named variables. The DSL parser produces quantifier-free
/// trees; the function-to-relation translation introduces bounded
/// existentials, so the evaluator handles quantifiers over finite domains.
struct Formula {
  enum class Kind { Rel, Eq, Not, And, Or, Exists, Forall };
  Kind kind = Kind::Rel;
  int rel = -1;                 // Kind::Rel
  std::vector<Term> args;       // Rel arguments, or the two sides of Eq
  std::vector<Formula> sub;
  std::vector<std::string> bound;  // quantified variable names

  static Formula atom(int rel, std::vector<Term> a);
  static Formula eq(Term l, Term r);
  static Formula neg(Formula f);
  static Formula conj(std::vector<Formula> fs);
  static Formula disj(std::vector<Formula> fs);
  static Formula exists(std::vector<std::string> vars, Formula f);

  void collect_free(std::set<std::string>& out) const;
};

/// A finite structure interpreting relation and function symbols; the
/// pre-translation side of the function-to-relation correspondence.
struct FuncStructure {
  Signature sig;
  int size = 0;
  std::vector<std::set<std::vector<int>>> rel_tuples;
  std::vector<std::vector<int>> func_tables;  // flat tables, size^arity entries

  FuncStructure() = default;
  FuncStructure(Signature s, int n);
  int& func_entry(int func, std::span<const int> args);
  int func_value(int func, std::span<const int> args) const;
  int eval_term(const Term& t, const std::map<std::string, int>& env) const;
};

bool eval_formula(const Formula& f, const FuncStructure& s,
                  std::map<std::string, int>& env);
bool eval_formula(const Formula& f, const FiniteStructure& s,
                  std::map<std::string, int>& env);

/// Relational signature with one graph relation per function or constant:
/// f of arity n becomes f* of arity n+1, c becomes unary c*.
Signature star_signature(const Signature& sig);

/// Graph encoding of a functional structure over the star signature.
FiniteStructure star_encode(const FuncStructure& s);

/// The formula translation: terms are flattened through their graph
/// relations, negation is pushed to atoms first so the result stays
/// positive-existential around each atom.
Formula star_translate(const Formula& f, const Signature& sig);

/// Flattens a quantifier-free formula with terms into (fresh existential
/// witness names, quantifier-free term-free formula over the star signature).
std::pair<std::vector<std::string>, Formula> star_flatten_matrix(
    const Formula& matrix, const Signature& sig, int& fresh_counter);

/// Converts a term-free quantifier-free Formula to canonical DNF over the
/// given variable ordering.
QfFormula to_qf(const Formula& f, const std::vector<std::string>& var_order,
                const Signature& relational_sig);

}  // namespace forge
