#include "forge/formula.hpp"

#include <algorithm>

namespace forge {

Formula Formula::atom(int rel, std::vector<Term> a) {
  Formula f; f.kind = Kind::Rel; f.rel = rel; f.args = std::move(a); return f;
}
Formula Formula::eq(Term l, Term r) {
  Formula f; f.kind = Kind::Eq; f.args = {std::move(l), std::move(r)}; return f;
}
Formula Formula::neg(Formula g) {
  Formula f; f.kind = Kind::Not; f.sub = {std::move(g)}; return f;
}
Formula Formula::conj(std::vector<Formula> fs) {
  Formula f; f.kind = Kind::And; f.sub = std::move(fs); return f;
}
Formula Formula::disj(std::vector<Formula> fs) {
  Formula f; f.kind = Kind::Or; f.sub = std::move(fs); return f;
}
Formula Formula::exists(std::vector<std::string> vars, Formula g) {
  Formula f; f.kind = Kind::Exists; f.bound = std::move(vars); f.sub = {std::move(g)};
  return f;
}

namespace {
void collect_term_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) out.insert(t.var);
  for (const auto& a : t.args) collect_term_vars(a, out);
}
}  // namespace

void Formula::collect_free(std::set<std::string>& out) const {
  switch (kind) {
    case Kind::Rel:
    case Kind::Eq:
      for (const auto& t : args) collect_term_vars(t, out);
      return;
    case Kind::Not:
    case Kind::And:
    case Kind::Or:
      for (const auto& s : sub) s.collect_free(out);
      return;
    case Kind::Exists:
    case Kind::Forall: {
      std::set<std::string> inner;
      sub[0].collect_free(inner);
      for (const auto& v : bound) inner.erase(v);
      out.insert(inner.begin(), inner.end());
      return;
    }
  }
}

FuncStructure::FuncStructure(Signature s, int n)
    : sig(std::move(s)), size(n), rel_tuples(sig.relations.size()) {
  func_tables.resize(sig.functions.size());
  for (size_t f = 0; f < func_tables.size(); ++f) {
    size_t cells = 1;
    for (int k = 0; k < sig.functions[f].arity; ++k) cells *= static_cast<size_t>(size);
    func_tables[f].assign(cells, 0);
  }
}

int& FuncStructure::func_entry(int func, std::span<const int> args) {
  size_t idx = 0;
  for (int a : args) idx = idx * static_cast<size_t>(size) + static_cast<size_t>(a);
  return func_tables[func][idx];
}

int FuncStructure::func_value(int func, std::span<const int> args) const {
  size_t idx = 0;
  for (int a : args) idx = idx * static_cast<size_t>(size) + static_cast<size_t>(a);
  return func_tables[func][idx];
}

int FuncStructure::eval_term(const Term& t, const std::map<std::string, int>& env) const {
  if (t.is_var()) {
    auto it = env.find(t.var);
    if (it == env.end()) throw ForgeError("unbound_variable", "unbound variable: " + t.var);
    return it->second;
  }
  std::vector<int> vals(t.args.size());
  for (size_t i = 0; i < t.args.size(); ++i) vals[i] = eval_term(t.args[i], env);
  return func_value(t.func, vals);
}

namespace {

template <class Struct, class AtomEval>
bool eval_generic(const Formula& f, const Struct& s, std::map<std::string, int>& env,
                  AtomEval&& atom_eval) {
  switch (f.kind) {
    case Formula::Kind::Rel:
    case Formula::Kind::Eq:
      return atom_eval(f);
    case Formula::Kind::Not:
      return !eval_generic(f.sub[0], s, env, atom_eval);
    case Formula::Kind::And:
      for (const auto& g : f.sub)
        if (!eval_generic(g, s, env, atom_eval)) return false;
      return true;
    case Formula::Kind::Or:
      for (const auto& g : f.sub)
        if (eval_generic(g, s, env, atom_eval)) return true;
      return false;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      bool want = f.kind == Formula::Kind::Exists;
      // bounded quantification over the finite domain
      std::vector<std::string> vars = f.bound;
      std::vector<int> vals(vars.size(), 0);
      while (true) {
        for (size_t i = 0; i < vars.size(); ++i) env[vars[i]] = vals[i];
        bool inner = eval_generic(f.sub[0], s, env, atom_eval);
        if (inner == want) {
          for (const auto& v : vars) env.erase(v);
          return want;
        }
        size_t k = vars.size();
        while (k > 0 && ++vals[k - 1] == s.size) vals[--k] = 0;
        if (k == 0) break;
      }
      for (const auto& v : vars) env.erase(v);
      return !want;
    }
  }
  return false;
}

}  // namespace

bool eval_formula(const Formula& f, const FuncStructure& s,
                  std::map<std::string, int>& env) {
  return eval_generic(f, s, env, [&](const Formula& a) {
    if (a.kind == Formula::Kind::Eq)
      return s.eval_term(a.args[0], env) == s.eval_term(a.args[1], env);
    std::vector<int> vals(a.args.size());
    for (size_t i = 0; i < a.args.size(); ++i) vals[i] = s.eval_term(a.args[i], env);
    return s.rel_tuples[a.rel].count(vals) > 0;
  });
}

bool eval_formula(const Formula& f, const FiniteStructure& s,
                  std::map<std::string, int>& env) {
  return eval_generic(f, s, env, [&](const Formula& a) {
    auto var_of = [&](const Term& t) {
      if (!t.is_var()) throw ForgeError("malformed_atom", "term in relational formula");
      auto it = env.find(t.var);
      if (it == env.end()) throw ForgeError("unbound_variable", "unbound variable: " + t.var);
      return it->second;
    };
    if (a.kind == Formula::Kind::Eq) return var_of(a.args[0]) == var_of(a.args[1]);
    std::vector<int> vals(a.args.size());
    for (size_t i = 0; i < a.args.size(); ++i) vals[i] = var_of(a.args[i]);
    return s.holds(a.rel, vals);
  });
}

Signature star_signature(const Signature& sig) {
  Signature out;
  out.relations = sig.relations;
  for (const auto& f : sig.functions)
    out.relations.push_back({f.name + "*", f.arity + 1});
  out.validate();
  return out;
}

FiniteStructure star_encode(const FuncStructure& s) {
  FiniteStructure out(star_signature(s.sig), s.size);
  for (size_t r = 0; r < s.rel_tuples.size(); ++r) out.tuples[r] = s.rel_tuples[r];
  for (size_t f = 0; f < s.sig.functions.size(); ++f) {
    int rel = static_cast<int>(s.rel_tuples.size() + f);
    int ar = s.sig.functions[f].arity;
    std::vector<int> t(ar, 0);
    while (true) {
      std::vector<int> g(t.begin(), t.end());
      g.push_back(s.func_value(static_cast<int>(f), t));
      out.tuples[rel].insert(std::move(g));
      int k = ar - 1;
      while (k >= 0 && ++t[k] == s.size) t[k--] = 0;
      if (k < 0) break;
    }
  }
  return out;
}

namespace {

/// Rewrites term t into (graph conjuncts, result variable term), introducing
/// fresh existential variables for every function application.
Term flatten_term(const Term& t, const Signature& sig, int n_base_rels,
                  std::vector<Formula>& conjuncts,
                  std::vector<std::string>& fresh, int& counter) {
  if (t.is_var()) return t;
  std::vector<Term> flat_args;
  for (const auto& a : t.args)
    flat_args.push_back(flatten_term(a, sig, n_base_rels, conjuncts, fresh, counter));
  std::string z = "_w" + std::to_string(counter++);
  fresh.push_back(z);
  flat_args.push_back(Term::v(z));
  conjuncts.push_back(Formula::atom(n_base_rels + t.func, std::move(flat_args)));
  return Term::v(z);
}

Formula star_tr(const Formula& f, const Signature& sig, int n_base_rels, bool positive,
                int& counter) {
  switch (f.kind) {
    case Formula::Kind::Rel:
    case Formula::Kind::Eq: {
      std::vector<Formula> conj;
      std::vector<std::string> fresh;
      std::vector<Term> args;
      for (const auto& t : f.args)
        args.push_back(flatten_term(t, sig, n_base_rels, conj, fresh, counter));
      if (f.kind == Formula::Kind::Rel)
        conj.push_back(Formula::atom(f.rel, args));
      else
        conj.push_back(Formula::eq(args[0], args[1]));
      if (!positive) {
        // under totality and functionality of the graphs, the negation may be
        // pushed onto the head atom while the graph conjuncts stay positive
        Formula head = std::move(conj.back());
        conj.pop_back();
        conj.push_back(Formula::neg(std::move(head)));
      }
      Formula body = conj.size() == 1 ? std::move(conj[0]) : Formula::conj(std::move(conj));
      if (fresh.empty()) return body;
      return Formula::exists(std::move(fresh), std::move(body));
    }
    case Formula::Kind::Not:
      return star_tr(f.sub[0], sig, n_base_rels, !positive, counter);
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      Formula out;
      bool is_and = (f.kind == Formula::Kind::And) == positive;
      out.kind = is_and ? Formula::Kind::And : Formula::Kind::Or;
      for (const auto& g : f.sub) out.sub.push_back(star_tr(g, sig, n_base_rels, positive, counter));
      return out;
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      Formula out;
      bool is_exists = (f.kind == Formula::Kind::Exists) == positive;
      out.kind = is_exists ? Formula::Kind::Exists : Formula::Kind::Forall;
      out.bound = f.bound;
      out.sub.push_back(star_tr(f.sub[0], sig, n_base_rels, positive, counter));
      return out;
    }
  }
  return f;
}

void hoist_exists(const Formula& f, std::vector<std::string>& fresh, Formula& out);

Formula hoisted(const Formula& f, std::vector<std::string>& fresh) {
  Formula out;
  hoist_exists(f, fresh, out);
  return out;
}

/// Pulls fresh-witness existentials introduced by flattening out of and/or
/// nodes (the names are unique, so scope extrusion is sound).
void hoist_exists(const Formula& f, std::vector<std::string>& fresh, Formula& out) {
  switch (f.kind) {
    case Formula::Kind::Exists:
      for (const auto& v : f.bound) fresh.push_back(v);
      out = hoisted(f.sub[0], fresh);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      out.kind = f.kind;
      for (const auto& g : f.sub) out.sub.push_back(hoisted(g, fresh));
      return;
    }
    case Formula::Kind::Not:
      out.kind = Formula::Kind::Not;
      out.sub.push_back(hoisted(f.sub[0], fresh));
      return;
    default:
      out = f;
      return;
  }
}

}  // namespace

Formula star_translate(const Formula& f, const Signature& sig) {
  int counter = 0;
  return star_tr(f, sig, static_cast<int>(sig.relations.size()), true, counter);
}

std::pair<std::vector<std::string>, Formula> star_flatten_matrix(
    const Formula& matrix, const Signature& sig, int& fresh_counter) {
  Formula translated = star_tr(matrix, sig, static_cast<int>(sig.relations.size()), true,
                               fresh_counter);
  std::vector<std::string> fresh;
  Formula flat = hoisted(translated, fresh);
  return {std::move(fresh), std::move(flat)};
}

namespace {

void to_dnf(const Formula& f, bool positive,
            const std::map<std::string, int>& var_index,
            std::vector<std::vector<Literal>>& out) {
  switch (f.kind) {
    case Formula::Kind::Rel:
    case Formula::Kind::Eq: {
      Literal lit;
      lit.positive = positive;
      lit.rel = f.kind == Formula::Kind::Rel ? f.rel : -1;
      for (const auto& t : f.args) {
        if (!t.is_var()) throw ForgeError("malformed_atom", "term survives in matrix");
        auto it = var_index.find(t.var);
        if (it == var_index.end())
          throw ForgeError("unbound_variable", "variable not in prefix: " + t.var);
        lit.vars.push_back(it->second);
      }
      out.push_back({std::move(lit)});
      return;
    }
    case Formula::Kind::Not:
      to_dnf(f.sub[0], !positive, var_index, out);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      bool distribute = (f.kind == Formula::Kind::And) == positive;
      if (!distribute) {
        for (const auto& g : f.sub) to_dnf(g, positive, var_index, out);
        return;
      }
      std::vector<std::vector<Literal>> acc = {{}};
      for (const auto& g : f.sub) {
        std::vector<std::vector<Literal>> part;
        to_dnf(g, positive, var_index, part);
        std::vector<std::vector<Literal>> next;
        for (const auto& a : acc)
          for (const auto& p : part) {
            auto d = a;
            d.insert(d.end(), p.begin(), p.end());
            next.push_back(std::move(d));
          }
        acc = std::move(next);
      }
      for (auto& d : acc) out.push_back(std::move(d));
      return;
    }
    default:
      throw ForgeError("malformed_axiom", "quantifier inside a matrix");
  }
}

}  // namespace

QfFormula to_qf(const Formula& f, const std::vector<std::string>& var_order,
                const Signature& relational_sig) {
  std::map<std::string, int> idx;
  for (size_t i = 0; i < var_order.size(); ++i) idx[var_order[i]] = static_cast<int>(i);
  QfFormula out;
  out.width = static_cast<int>(var_order.size());
  out.var_names = var_order;
  to_dnf(f, true, idx, out.disjuncts);
  // drop disjuncts with internally contradictory literals
  std::vector<std::vector<Literal>> kept;
  for (auto& d : out.disjuncts) {
    bool contradictory = false;
    for (size_t i = 0; i < d.size() && !contradictory; ++i)
      for (size_t j = i + 1; j < d.size(); ++j)
        if (d[i].rel == d[j].rel && d[i].vars == d[j].vars &&
            d[i].positive != d[j].positive) {
          contradictory = true;
          break;
        }
    for (const auto& l : d)
      if (l.rel < 0 && !l.positive && l.vars[0] == l.vars[1]) contradictory = true;
    if (!contradictory) kept.push_back(std::move(d));
  }
  out.disjuncts = std::move(kept);
  // arity sanity
  for (const auto& d : out.disjuncts)
    for (const auto& l : d) {
      if (l.rel < 0) continue;
      if (static_cast<int>(l.vars.size()) != relational_sig.relations[l.rel].arity)
        throw ForgeError("malformed_atom",
                         "arity mismatch for " + relational_sig.relations[l.rel].name);
    }
  out.normalize();
  return out;
}

}  // namespace forge
