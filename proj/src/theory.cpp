#include "forge/theory.hpp"

#include <algorithm>
#include <set>

namespace forge {

void TheorySpec::validate(bool allow_functions) const {
  sig.validate();
  if (!allow_functions && !sig.functions.empty()) {
    for (const auto& f : sig.functions)
      if (f.arity == 0)
        throw ForgeError("constant_symbol",
                         "constant symbol '" + f.name +
                             "' declared: structures naming a constant admit no "
                             "exchangeable sampler; enable relationalization (every "
                             "function must act as a choice function / selector)");
    throw ForgeError("function_symbol",
                     "function symbols present; enable relationalization");
  }
  for (const auto& ax : axioms) {
    std::set<std::string> declared(ax.univ_vars.begin(), ax.univ_vars.end());
    for (const auto& v : ax.exist_vars) declared.insert(v);
    if (declared.size() != ax.univ_vars.size() + ax.exist_vars.size())
      throw ForgeError("malformed_axiom", "repeated variable in quantifier prefix: " + ax.id);
    std::set<std::string> free;
    ax.matrix.collect_free(free);
    for (const auto& v : free)
      if (!declared.count(v))
        throw ForgeError("unbound_variable", "variable " + v + " not quantified in " + ax.id);
  }
  for (const auto& p : forbidden)
    if (!(p.sig == Signature{sig.relations, {}}))
      throw ForgeError("bad_signature", "forbidden pattern over a different signature");
}

void CompiledTheory::finalize() {
  contradictory = false;
  for (const auto& u : universals)
    if (u.disjuncts.empty()) contradictory = true;
  genuine.clear();
  for (size_t i = 0; i < axioms.size(); ++i)
    if (!axioms[i].dummy) genuine.push_back(static_cast<int>(i));
  triggers.assign(sig.relations.size(), {});
  for (size_t u = 0; u < universals.size(); ++u)
    for (size_t d = 0; d < universals[u].disjuncts.size(); ++d) {
      const auto& disj = universals[u].disjuncts[d];
      for (size_t l = 0; l < disj.size(); ++l) {
        const Literal& lit = disj[l];
        if (lit.rel < 0) continue;
        // a positive literal is falsified by a False atom and vice versa
        int slot = lit.positive ? 0 : 1;
        triggers[lit.rel][slot].push_back(
            {static_cast<int>(u), static_cast<int>(d), static_cast<int>(l)});
      }
    }
}

bool AgeOracle::consistent(const QfType& p) const {
  if (!(p.sig == theory->sig))
    throw ForgeError("bad_signature", "type signature differs from theory signature");
  if (theory->contradictory) return false;
  return universals_ok_full(*theory, p, p.width);
}

bool consistent_with(const QfType& p, const AgeOracle& oracle) {
  return oracle.consistent(p);
}

TheorySpec relationalize(const TheorySpec& spec) {
  if (spec.sig.relational()) return spec;
  TheorySpec out;
  out.name = spec.name;
  out.sig = star_signature(spec.sig);
  out.forbidden = spec.forbidden;  // patterns are relational already
  int n_base = static_cast<int>(spec.sig.relations.size());

  // graph sentence schemas: totality as extension axioms, uniqueness as
  // universal axioms
  for (size_t f = 0; f < spec.sig.functions.size(); ++f) {
    const FuncSym& fn = spec.sig.functions[f];
    int rel = n_base + static_cast<int>(f);
    std::vector<std::string> xs;
    std::vector<Term> args;
    for (int k = 0; k < fn.arity; ++k) {
      xs.push_back("x" + std::to_string(k));
      args.push_back(Term::v(xs.back()));
    }
    SpecAxiom total;
    total.univ_vars = xs;
    total.exist_vars = {"y"};
    auto args_y = args;
    args_y.push_back(Term::v("y"));
    total.matrix = Formula::atom(rel, args_y);
    total.id = fn.name + ":total";
    out.axioms.push_back(std::move(total));

    SpecAxiom unique;
    unique.univ_vars = xs;
    unique.univ_vars.push_back("y");
    unique.univ_vars.push_back("y'");
    auto a1 = args, a2 = args;
    a1.push_back(Term::v("y"));
    a2.push_back(Term::v("y'"));
    unique.matrix = Formula::disj({Formula::neg(Formula::atom(rel, a1)),
                                   Formula::neg(Formula::atom(rel, a2)),
                                   Formula::eq(Term::v("y"), Term::v("y'"))});
    unique.id = fn.name + ":unique";
    out.axioms.push_back(std::move(unique));
  }

  int fresh_counter = 0;
  for (const auto& ax : spec.axioms) {
    SpecAxiom tr;
    tr.id = ax.id;
    tr.univ_vars = ax.univ_vars;
    tr.exist_vars = ax.exist_vars;
    auto [fresh, flat] = star_flatten_matrix(ax.matrix, spec.sig, fresh_counter);
    for (auto& w : fresh) tr.exist_vars.push_back(std::move(w));
    tr.matrix = std::move(flat);
    out.axioms.push_back(std::move(tr));
  }
  out.validate(false);
  return out;
}

namespace {

QfFormula forbidden_to_universal(const FiniteStructure& pattern) {
  // negation of the pattern's positive diagram together with distinctness:
  // DNF of negated positive atoms and equalities between pattern elements
  QfFormula u;
  u.width = pattern.size;
  for (int i = 0; i < pattern.size; ++i) u.var_names.push_back("x" + std::to_string(i));
  for (size_t r = 0; r < pattern.tuples.size(); ++r)
    for (const auto& t : pattern.tuples[r]) {
      Literal lit;
      lit.rel = static_cast<int>(r);
      lit.vars = t;
      lit.positive = false;
      u.disjuncts.push_back({lit});
    }
  for (int i = 0; i < pattern.size; ++i)
    for (int j = i + 1; j < pattern.size; ++j) {
      Literal lit;
      lit.rel = -1;
      lit.vars = {i, j};
      lit.positive = true;
      u.disjuncts.push_back({lit});
    }
  u.normalize();
  return u;
}

std::vector<std::string> prefix_names(const std::vector<std::string>& a,
                                      const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

CompiledTheory expand_to_one_point(const TheorySpec& spec) {
  spec.validate(false);
  CompiledTheory th;
  th.name = spec.name;
  th.sig = spec.sig;

  struct Pending {  // relational matrices awaiting the chain construction
    std::vector<std::string> xs, ys;
    Formula matrix;
    std::string id;
  };
  std::vector<Pending> extension;

  for (const auto& ax : spec.axioms) {
    if (ax.universal()) {
      QfFormula m = to_qf(ax.matrix, ax.univ_vars, spec.sig);
      th.universals.push_back(m);
      // dummy one-point mirror (forall x)(exists y)(chi(x) and y = y)
      OnePointAxiom mirror;
      mirror.premise_width = static_cast<int>(ax.univ_vars.size());
      auto names = ax.univ_vars;
      names.push_back("_y");
      QfFormula mm = to_qf(ax.matrix, names, spec.sig);
      Literal self;
      self.rel = -1;
      self.vars = {mirror.premise_width, mirror.premise_width};
      self.positive = true;
      for (auto& d : mm.disjuncts) d.push_back(self);
      mm.normalize();
      mirror.matrix = std::move(mm);
      mirror.source = ax.id;
      mirror.dummy = true;
      th.axioms.push_back(std::move(mirror));
    } else {
      extension.push_back({ax.univ_vars, ax.exist_vars, ax.matrix, ax.id});
    }
  }

  for (const auto& p : spec.forbidden) {
    th.universals.push_back(forbidden_to_universal(p));
    // forbidden sugar needs no dummy mirror: it constrains, never extends
  }

  for (const auto& ext : extension) {
    int n = static_cast<int>(ext.ys.size());
    if (n == 1) {
      OnePointAxiom ax;
      ax.premise_width = static_cast<int>(ext.xs.size());
      ax.matrix = to_qf(ext.matrix, prefix_names(ext.xs, ext.ys), spec.sig);
      ax.source = ext.id;
      th.axioms.push_back(std::move(ax));
      continue;
    }
    // chain through auxiliary relations aux_k of arity |xs|+k, 0 <= k < n
    int base_width = static_cast<int>(ext.xs.size());
    if (base_width == 0)
      throw ForgeError("malformed_axiom",
                       "parameterless multi-witness axiom is not supported: " + ext.id);
    std::vector<int> aux_rel(n);
    for (int k = 0; k < n; ++k) {
      aux_rel[k] = static_cast<int>(th.sig.relations.size());
      th.sig.relations.push_back(
          {"_stage" + std::to_string(k) + "[" + ext.id + "]", base_width + k});
    }
    // trigger: forall xs aux_0(xs)
    {
      QfFormula trig;
      trig.width = base_width;
      Literal lit;
      lit.rel = aux_rel[0];
      for (int v = 0; v < base_width; ++v) lit.vars.push_back(v);
      trig.disjuncts.push_back({lit});
      th.universals.push_back(trig);
    }
    for (int k = 0; k < n; ++k) {
      int prem = base_width + k;
      Literal guard;
      guard.rel = aux_rel[k];
      for (int v = 0; v < prem; ++v) guard.vars.push_back(v);
      guard.positive = false;

      // forward link: forall (xs, y1..yk) exists y: !aux_k(..) or next(.., y)
      OnePointAxiom fwd;
      fwd.premise_width = prem;
      QfFormula m;
      m.width = prem + 1;
      m.disjuncts.push_back({guard});
      QfFormula back;  // the matching backward universal
      if (k + 1 < n) {
        Literal nxt;
        nxt.rel = aux_rel[k + 1];
        for (int v = 0; v < prem + 1; ++v) nxt.vars.push_back(v);
        m.disjuncts.push_back({nxt});
        // backward: next(xs,y1..y_{k+1}) -> aux_k(xs,y1..yk)
        back.width = prem + 1;
        Literal neg_next = nxt;
        neg_next.positive = false;
        back.disjuncts.push_back({neg_next});
      } else {
        // last link: !aux_{n-1} or psi(xs, y1..yn)
        QfFormula psi = to_qf(ext.matrix, prefix_names(ext.xs, ext.ys), spec.sig);
        for (auto& d : psi.disjuncts) m.disjuncts.push_back(d);
        // backward: psi -> aux_{n-1}
        back.width = base_width + n;
        back.disjuncts =
            to_qf(Formula::neg(ext.matrix), prefix_names(ext.xs, ext.ys), spec.sig)
                .disjuncts;
      }
      m.normalize();
      fwd.matrix = std::move(m);
      fwd.source = ext.id + ":step" + std::to_string(k);
      th.axioms.push_back(std::move(fwd));

      Literal pos_prev = guard;
      pos_prev.positive = true;
      back.disjuncts.push_back({pos_prev});
      back.normalize();
      th.universals.push_back(std::move(back));
    }
  }

  th.finalize();
  return th;
}

TheoryRef compile(const TheorySpec& spec) {
  TheorySpec rel = spec.sig.relational() ? spec : relationalize(spec);
  auto th = std::make_shared<CompiledTheory>(expand_to_one_point(rel));
  return th;
}

}  // namespace forge
