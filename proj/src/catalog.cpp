#include "forge/enumerate.hpp"
#include "forge/theory.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace forge {

namespace {

Term V(const std::string& n) { return Term::v(n); }

std::string var_name(int i) { return "x" + std::to_string(i); }

/// The literal conjunction describing a complete non-redundant type, as a
/// term-level formula over variables x0..x_{w-1} (and y for the last one
/// when `witness_last` is set).
Formula diagram_formula(const QfType& p, bool witness_last) {
  auto name_of = [&](int v) {
    if (witness_last && v == p.width - 1) return std::string("y");
    return var_name(v);
  };
  std::vector<Formula> lits;
  for (size_t r = 0; r < p.sig.relations.size(); ++r) {
    int ar = p.sig.relations[r].arity;
    std::vector<int> t(ar, 0);
    while (true) {
      std::vector<Term> args;
      for (int k : t) args.push_back(V(name_of(k)));
      Formula a = Formula::atom(static_cast<int>(r), std::move(args));
      lits.push_back(p.get(static_cast<int>(r), t) == Tri::True ? a
                                                                : Formula::neg(a));
      int k = ar - 1;
      while (k >= 0 && ++t[k] == p.width) t[k--] = 0;
      if (k < 0) break;
    }
  }
  for (int i = 0; i < p.width; ++i)
    for (int j = i + 1; j < p.width; ++j)
      lits.push_back(Formula::neg(Formula::eq(V(name_of(i)), V(name_of(j)))));
  return Formula::conj(std::move(lits));
}

/// Escape disjuncts: the tuple fails the premise type or repeats a variable,
/// so any witness (in particular an internal one) satisfies the axiom.
std::vector<Formula> premise_escapes(const QfType& rho) {
  std::vector<Formula> out;
  for (size_t r = 0; r < rho.sig.relations.size(); ++r) {
    int ar = rho.sig.relations[r].arity;
    std::vector<int> t(ar, 0);
    if (rho.width == 0) break;
    while (true) {
      std::vector<Term> args;
      for (int k : t) args.push_back(V(var_name(k)));
      Formula a = Formula::atom(static_cast<int>(r), std::move(args));
      out.push_back(rho.get(static_cast<int>(r), t) == Tri::True ? Formula::neg(a) : a);
      int k = ar - 1;
      while (k >= 0 && ++t[k] == rho.width) t[k--] = 0;
      if (k < 0) break;
    }
  }
  for (int i = 0; i < rho.width; ++i)
    for (int j = i + 1; j < rho.width; ++j)
      out.push_back(Formula::eq(V(var_name(i)), V(var_name(j))));
  return out;
}

/// One-point extension axioms up to premise width k_max: for every
/// consistent complete non-redundant premise type rho and every consistent
/// one-point extension tau of it, the axiom
///   forall x (exists y)  [diagram of tau] or [rho fails on x].
void generate_extension_axioms(TheorySpec& spec, const CompiledTheory& universals_only,
                               int k_max) {
  int counter = 0;
  for (int k = 1; k <= k_max; ++k) {
    for (const QfType& rho : consistent_types(universals_only, k, true)) {
      // canonical dedupe of extensions under premise symmetries
      std::set<std::string> seen;
      for (const QfType& tau : one_point_extensions(universals_only, rho)) {
        std::vector<int> perm(k);
        std::iota(perm.begin(), perm.end(), 0);
        std::string best;
        do {
          if (rho.restrict_to(perm).key() != rho.key()) continue;  // premise automorphisms only
          std::vector<int> ext(perm.begin(), perm.end());
          ext.push_back(k);
          std::string key = tau.restrict_to(ext).key();
          if (best.empty() || key < best) best = key;
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (!seen.insert(best).second) continue;

        SpecAxiom ax;
        for (int i = 0; i < k; ++i) ax.univ_vars.push_back(var_name(i));
        ax.exist_vars = {"y"};
        std::vector<Formula> disjuncts;
        disjuncts.push_back(diagram_formula(tau, true));
        for (auto& e : premise_escapes(rho)) disjuncts.push_back(std::move(e));
        ax.matrix = Formula::disj(std::move(disjuncts));
        ax.id = "ext" + std::to_string(counter++);
        spec.axioms.push_back(std::move(ax));
      }
    }
  }
}

SpecAxiom universal(std::string id, std::vector<std::string> vars, Formula matrix) {
  SpecAxiom ax;
  ax.univ_vars = std::move(vars);
  ax.matrix = std::move(matrix);
  ax.id = std::move(id);
  return ax;
}

void add_extensions(TheorySpec& spec, int k_max) {
  TheorySpec universals_part = spec;
  CompiledTheory th = expand_to_one_point(universals_part);
  generate_extension_axioms(spec, th, k_max);
}

TheorySpec graph_base(const std::string& name) {
  TheorySpec t;
  t.name = name;
  t.sig.relations = {{"E", 2}};
  t.axioms.push_back(universal("irreflexive", {"x"},
                               Formula::neg(Formula::atom(0, {V("x"), V("x")}))));
  t.axioms.push_back(universal(
      "symmetric", {"x", "y"},
      Formula::disj({Formula::neg(Formula::atom(0, {V("x"), V("y")})),
                     Formula::atom(0, {V("y"), V("x")})})));
  return t;
}

FiniteStructure clique_pattern(int n) {
  FiniteStructure k(Signature{{{"E", 2}}, {}}, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) k.tuples[0].insert({i, j});
  return k;
}

TheorySpec rado_spec() {
  TheorySpec t = graph_base("rado");
  add_extensions(t, 2);
  return t;
}

TheorySpec henson_spec(int n) {
  TheorySpec t = graph_base(n == 3 ? "henson3" : "henson_k(" + std::to_string(n) + ")");
  t.forbidden.push_back(clique_pattern(n));
  add_extensions(t, 2);
  return t;
}

TheorySpec order_base(const std::string& name, bool total) {
  TheorySpec t;
  t.name = name;
  t.sig.relations = {{"lt", 2}};
  t.axioms.push_back(universal("irreflexive", {"x"},
                               Formula::neg(Formula::atom(0, {V("x"), V("x")}))));
  t.axioms.push_back(universal(
      "transitive", {"x", "y", "z"},
      Formula::disj({Formula::neg(Formula::atom(0, {V("x"), V("y")})),
                     Formula::neg(Formula::atom(0, {V("y"), V("z")})),
                     Formula::atom(0, {V("x"), V("z")})})));
  if (total)
    t.axioms.push_back(universal(
        "total", {"x", "y"},
        Formula::disj({Formula::eq(V("x"), V("y")), Formula::atom(0, {V("x"), V("y")}),
                       Formula::atom(0, {V("y"), V("x")})})));
  return t;
}

TheorySpec dlo_spec() {
  TheorySpec t = order_base("dlo", true);
  add_extensions(t, 2);
  return t;
}

TheorySpec poset_spec() {
  TheorySpec t = order_base("universal_poset", false);
  add_extensions(t, 2);
  return t;
}

TheorySpec tournament_spec() {
  TheorySpec t;
  t.name = "universal_tournament";
  t.sig.relations = {{"arc", 2}};
  t.axioms.push_back(universal("irreflexive", {"x"},
                               Formula::neg(Formula::atom(0, {V("x"), V("x")}))));
  t.axioms.push_back(universal(
      "antisymmetric", {"x", "y"},
      Formula::disj({Formula::neg(Formula::atom(0, {V("x"), V("y")})),
                     Formula::neg(Formula::atom(0, {V("y"), V("x")}))})));
  t.axioms.push_back(universal(
      "total", {"x", "y"},
      Formula::disj({Formula::eq(V("x"), V("y")), Formula::atom(0, {V("x"), V("y")}),
                     Formula::atom(0, {V("y"), V("x")})})));
  add_extensions(t, 2);
  return t;
}

void add_equivalence_axioms(TheorySpec& t, int rel) {
  t.axioms.push_back(universal("reflexive", {"x"}, Formula::atom(rel, {V("x"), V("x")})));
  t.axioms.push_back(universal(
      "symmetric", {"x", "y"},
      Formula::disj({Formula::neg(Formula::atom(rel, {V("x"), V("y")})),
                     Formula::atom(rel, {V("y"), V("x")})})));
  t.axioms.push_back(universal(
      "transitive", {"x", "y", "z"},
      Formula::disj({Formula::neg(Formula::atom(rel, {V("x"), V("y")})),
                     Formula::neg(Formula::atom(rel, {V("y"), V("z")})),
                     Formula::atom(rel, {V("x"), V("z")})})));
}

Formula class_size_cap(int rel, int n) {
  // no n+1 pairwise-equivalent pairwise-distinct elements
  std::vector<Formula> esc;
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      esc.push_back(Formula::neg(Formula::atom(rel, {V(var_name(i)), V(var_name(j))})));
      esc.push_back(Formula::eq(V(var_name(i)), V(var_name(j))));
    }
  return Formula::disj(std::move(esc));
}

TheorySpec equiv_inf_spec() {
  TheorySpec t;
  t.name = "equiv_inf_classes";
  t.sig.relations = {{"eqv", 2}};
  add_equivalence_axioms(t, 0);
  add_extensions(t, 2);
  return t;
}

TheorySpec equiv_classes_of_spec(int n) {
  TheorySpec t;
  t.name = "equiv_classes_of(" + std::to_string(n) + ")";
  t.sig.relations = {{"eqv", 2}};
  add_equivalence_axioms(t, 0);
  std::vector<std::string> vars;
  for (int i = 0; i <= n; ++i) vars.push_back(var_name(i));
  t.axioms.push_back(universal("class_size_cap", vars, class_size_cap(0, n)));
  add_extensions(t, std::max(2, n - 1));
  return t;
}

TheorySpec q_min_spec() {
  TheorySpec t;
  t.name = "q_min_semigroup";
  t.sig.relations = {{"min*", 3}};
  int m = 0;
  auto A = [&](Term a, Term b, Term c) { return Formula::atom(m, {a, b, c}); };
  t.axioms.push_back(universal("idempotent", {"x"}, A(V("x"), V("x"), V("x"))));
  t.axioms.push_back(universal(
      "selector", {"x", "y", "z"},
      Formula::disj({Formula::neg(A(V("x"), V("y"), V("z"))), Formula::eq(V("z"), V("x")),
                     Formula::eq(V("z"), V("y"))})));
  t.axioms.push_back(universal(
      "commutative", {"x", "y", "z"},
      Formula::disj({Formula::neg(A(V("x"), V("y"), V("z"))), A(V("y"), V("x"), V("z"))})));
  t.axioms.push_back(universal(
      "functional", {"x", "y", "z", "w"},
      Formula::disj({Formula::neg(A(V("x"), V("y"), V("z"))),
                     Formula::neg(A(V("x"), V("y"), V("w"))), Formula::eq(V("z"), V("w"))})));
  t.axioms.push_back(universal(
      "total_pairs", {"x", "y"},
      Formula::disj({A(V("x"), V("y"), V("x")), A(V("x"), V("y"), V("y"))})));
  t.axioms.push_back(universal(
      "order_transitive", {"x", "y", "z"},
      Formula::disj({Formula::neg(A(V("x"), V("y"), V("x"))),
                     Formula::neg(A(V("y"), V("z"), V("y"))), A(V("x"), V("z"), V("x"))})));
  // existence of min is always internally witnessed; stated for completeness
  SpecAxiom exist;
  exist.univ_vars = {"x", "y"};
  exist.exist_vars = {"z"};
  exist.matrix = A(V("x"), V("y"), V("z"));
  exist.id = "min_exists";
  t.axioms.push_back(std::move(exist));
  add_extensions(t, 2);
  return t;
}

/// Blowup of a base theory: every element becomes an eqv-class of exactly n
/// elements, and the base relations cannot distinguish equivalent elements.
/// Base universal matrices are rewritten for the quotient reading: equality
/// literals become eqv atoms and repeated variables in an atom are split.
Formula lift_matrix(const Formula& f, int eqv_rel, int& fresh, std::vector<Formula>& side) {
  switch (f.kind) {
    case Formula::Kind::Eq:
      return Formula::atom(eqv_rel, f.args);
    case Formula::Kind::Rel: {
      std::set<std::string> seen;
      std::vector<Term> args;
      std::vector<Formula> glue;
      for (const auto& a : f.args) {
        if (!seen.insert(a.var).second) {
          std::string nv = "_b" + std::to_string(fresh++);
          glue.push_back(Formula::atom(eqv_rel, {V(nv), a}));
          side.push_back(Formula::atom(eqv_rel, {V(nv), a}));
          args.push_back(V(nv));
        } else {
          args.push_back(a);
        }
      }
      (void)glue;
      return Formula::atom(f.rel, std::move(args));
    }
    case Formula::Kind::Not:
      return Formula::neg(lift_matrix(f.sub[0], eqv_rel, fresh, side));
    case Formula::Kind::And: {
      std::vector<Formula> subs;
      for (const auto& g : f.sub) subs.push_back(lift_matrix(g, eqv_rel, fresh, side));
      return Formula::conj(std::move(subs));
    }
    case Formula::Kind::Or: {
      std::vector<Formula> subs;
      for (const auto& g : f.sub) subs.push_back(lift_matrix(g, eqv_rel, fresh, side));
      return Formula::disj(std::move(subs));
    }
    default:
      throw ForgeError("malformed_axiom", "quantifier in universal matrix");
  }
}

TheorySpec blowup_spec(const std::string& base_name, int n) {
  if (n < 2) throw ForgeError("bad_argument", "blowup class size must be >= 2");
  TheorySpec base = catalog(base_name);
  if (!base.sig.relational())
    throw ForgeError("bad_argument", "blowup base must be relational");
  TheorySpec t;
  t.name = "blowup(" + base_name + "," + std::to_string(n) + ")";
  t.sig.relations = base.sig.relations;
  int eqv = static_cast<int>(t.sig.relations.size());
  t.sig.relations.push_back({"eqv", 2});
  add_equivalence_axioms(t, eqv);
  std::vector<std::string> cap_vars;
  for (int i = 0; i <= n; ++i) cap_vars.push_back(var_name(i));
  t.axioms.push_back(universal("class_size_cap", cap_vars, class_size_cap(eqv, n)));
  // base relations respect eqv
  for (size_t r = 0; r < base.sig.relations.size(); ++r) {
    int ar = base.sig.relations[r].arity;
    std::vector<std::string> vars;
    std::vector<Formula> lits;
    std::vector<Term> orig, repl;
    for (int k = 0; k < ar; ++k) {
      vars.push_back("u" + std::to_string(k));
      vars.push_back("v" + std::to_string(k));
      orig.push_back(V("u" + std::to_string(k)));
      repl.push_back(V("v" + std::to_string(k)));
      lits.push_back(Formula::neg(
          Formula::atom(eqv, {V("u" + std::to_string(k)), V("v" + std::to_string(k))})));
    }
    lits.push_back(Formula::neg(Formula::atom(static_cast<int>(r), orig)));
    lits.push_back(Formula::atom(static_cast<int>(r), repl));
    t.axioms.push_back(universal(base.sig.relations[r].name + "_respects_eqv", vars,
                                 Formula::disj(std::move(lits))));
  }
  // lifted base universal constraints (quotient reading)
  for (const auto& ax : base.axioms) {
    if (!ax.universal()) continue;
    int fresh = 0;
    std::vector<Formula> side;
    Formula lifted = lift_matrix(ax.matrix, eqv, fresh, side);
    SpecAxiom lx;
    lx.univ_vars = ax.univ_vars;
    for (int i = 0; i < fresh; ++i) lx.univ_vars.push_back("_b" + std::to_string(i));
    if (side.empty()) {
      lx.matrix = std::move(lifted);
    } else {
      // side conditions guard the fresh representatives: eqv premises fail
      // or the lifted matrix holds
      std::vector<Formula> disj;
      for (auto& s : side) disj.push_back(Formula::neg(std::move(s)));
      disj.push_back(std::move(lifted));
      lx.matrix = Formula::disj(std::move(disj));
    }
    lx.id = "lift:" + ax.id;
    t.axioms.push_back(std::move(lx));
  }
  add_extensions(t, std::max(2, n - 1));
  return t;
}

int parse_int_arg(const std::string& name, size_t open, size_t close) {
  return std::stoi(name.substr(open + 1, close - open - 1));
}

}  // namespace

TheorySpec catalog(const std::string& name) {
  if (name == "rado") return rado_spec();
  if (name == "henson3") return henson_spec(3);
  if (name == "dlo") return dlo_spec();
  if (name == "universal_poset") return poset_spec();
  if (name == "universal_tournament") return tournament_spec();
  if (name == "equiv_inf_classes") return equiv_inf_spec();
  if (name == "q_min_semigroup") return q_min_spec();
  if (name.rfind("henson_k(", 0) == 0 && name.back() == ')') {
    int n = parse_int_arg(name, name.find('('), name.size() - 1);
    if (n < 3) throw ForgeError("bad_argument", "henson_k needs n >= 3");
    return henson_spec(n);
  }
  if (name.rfind("equiv_classes_of(", 0) == 0 && name.back() == ')') {
    int n = parse_int_arg(name, name.find('('), name.size() - 1);
    if (n < 1) throw ForgeError("bad_argument", "class size must be >= 1");
    return equiv_classes_of_spec(n);
  }
  if (name.rfind("blowup(", 0) == 0 && name.back() == ')') {
    auto comma = name.rfind(',');
    if (comma == std::string::npos)
      throw ForgeError("bad_argument", "blowup needs (base,n)");
    std::string base = name.substr(7, comma - 7);
    int n = std::stoi(name.substr(comma + 1, name.size() - comma - 2));
    return blowup_spec(base, n);
  }
  std::ostringstream os;
  os << "unknown catalog entry '" << name << "'; available:";
  for (const auto& n : catalog_names()) os << " " << n;
  throw ForgeError("unknown_catalog", os.str());
}

std::vector<std::string> catalog_names() {
  return {"rado",
          "henson3",
          "henson_k(4)",
          "dlo",
          "universal_poset",
          "universal_tournament",
          "equiv_inf_classes",
          "equiv_classes_of(2)",
          "equiv_classes_of(3)",
          "blowup(rado,2)",
          "q_min_semigroup"};
}

std::vector<std::string> sampleable_catalog_names() {
  return {"rado",
          "henson3",
          "henson_k(4)",
          "dlo",
          "universal_poset",
          "universal_tournament",
          "equiv_inf_classes",
          "q_min_semigroup"};
}

}  // namespace forge
