#include "forge/logic.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace forge {

void Signature::validate() const {
  std::set<std::string> seen;
  for (const auto& r : relations) {
    if (r.arity < 1) throw ForgeError("bad_signature", "relation arity must be >= 1: " + r.name);
    if (!seen.insert(r.name).second)
      throw ForgeError("bad_signature", "duplicate symbol: " + r.name);
  }
  for (const auto& f : functions) {
    if (f.arity < 0) throw ForgeError("bad_signature", "negative function arity: " + f.name);
    if (!seen.insert(f.name).second)
      throw ForgeError("bad_signature", "duplicate symbol: " + f.name);
  }
}

void FiniteStructure::check_tuple(int rel, std::span<const int> t) const {
  if (rel < 0 || rel >= static_cast<int>(sig.relations.size()))
    throw ForgeError("malformed_atom", "unknown relation index");
  if (static_cast<int>(t.size()) != sig.relations[rel].arity)
    throw ForgeError("malformed_atom",
                     "arity mismatch for " + sig.relations[rel].name);
  for (int x : t)
    if (x < 0 || x >= size)
      throw ForgeError("out_of_range", "label out of range in tuple");
}

void FiniteStructure::set(int rel, std::vector<int> t, bool value) {
  check_tuple(rel, t);
  if (value)
    tuples[rel].insert(std::move(t));
  else
    tuples[rel].erase(t);
}

FiniteStructure FiniteStructure::relabeled(std::span<const int> perm) const {
  FiniteStructure out(sig, size);
  for (size_t r = 0; r < tuples.size(); ++r)
    for (const auto& t : tuples[r]) {
      std::vector<int> u(t.size());
      for (size_t k = 0; k < t.size(); ++k) u[k] = perm[t[k]];
      out.tuples[r].insert(std::move(u));
    }
  return out;
}

std::string FiniteStructure::key() const {
  std::ostringstream os;
  os << size;
  for (size_t r = 0; r < tuples.size(); ++r) {
    os << '|' << sig.relations[r].name << ':';
    for (const auto& t : tuples[r]) {
      os << '(';
      for (size_t k = 0; k < t.size(); ++k) os << (k ? "," : "") << t[k];
      os << ')';
    }
  }
  return os.str();
}

std::string FiniteStructure::canonical_key() const {
  std::vector<int> perm(size);
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  do {
    std::string k = relabeled(perm).key();
    if (best.empty() || k < best) best = k;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best.empty() ? key() : best;
}

QfType::QfType(Signature s, int w) : sig(std::move(s)), width(w) {
  atoms.resize(sig.relations.size());
  for (size_t r = 0; r < atoms.size(); ++r) {
    size_t n = 1;
    for (int k = 0; k < sig.relations[r].arity; ++k) n *= static_cast<size_t>(width);
    atoms[r].assign(n, Tri::Unknown);
  }
  eq_class.resize(width);
  std::iota(eq_class.begin(), eq_class.end(), 0);
}

size_t QfType::flat_index(int rel, std::span<const int> args) const {
  if (static_cast<int>(args.size()) != sig.relations[rel].arity)
    throw ForgeError("malformed_atom", "arity mismatch for " + sig.relations[rel].name);
  size_t idx = 0;
  for (int a : args) {
    if (a < 0 || a >= width) throw ForgeError("out_of_range", "variable index out of range");
    idx = idx * static_cast<size_t>(width) + static_cast<size_t>(a);
  }
  return idx;
}

bool QfType::non_redundant() const {
  for (int i = 0; i < width; ++i)
    if (eq_class[i] != i) return false;
  return true;
}

bool QfType::complete() const {
  for (const auto& table : atoms)
    for (Tri v : table)
      if (v == Tri::Unknown) return false;
  // atoms must respect the equality partition
  for (size_t r = 0; r < atoms.size(); ++r) {
    int ar = sig.relations[r].arity;
    std::vector<int> t(ar, 0), u(ar);
    while (true) {
      for (int k = 0; k < ar; ++k) u[k] = eq_class[t[k]];
      if (get(static_cast<int>(r), t) != get(static_cast<int>(r), u)) return false;
      int k = ar - 1;
      while (k >= 0 && ++t[k] == width) t[k--] = 0;
      if (k < 0) break;
    }
  }
  return true;
}

QfType QfType::restrict_to(std::span<const int> positions) const {
  QfType out(sig, static_cast<int>(positions.size()));
  for (size_t i = 0; i < positions.size(); ++i)
    for (size_t j = 0; j < i; ++j)
      if (same_class(positions[i], positions[j])) {
        out.eq_class[i] = out.eq_class[j];
        break;
      }
  for (size_t r = 0; r < atoms.size(); ++r) {
    int ar = sig.relations[r].arity;
    std::vector<int> t(ar, 0), u(ar);
    while (true) {
      for (int k = 0; k < ar; ++k) u[k] = positions[t[k]];
      out.set(static_cast<int>(r), t, get(static_cast<int>(r), u));
      int k = ar - 1;
      while (k >= 0 && ++t[k] == out.width) t[k--] = 0;
      if (k < 0) break;
    }
  }
  return out;
}

std::string QfType::key() const {
  std::ostringstream os;
  os << width << '#';
  for (int c : eq_class) os << c << ',';
  for (const auto& table : atoms) {
    os << '|';
    for (Tri v : table) os << static_cast<int>(v);
  }
  return os.str();
}

QfType diagram_of(const FiniteStructure& s, std::span<const int> tuple) {
  for (int x : tuple)
    if (x < 0 || x >= s.size) throw ForgeError("out_of_range", "tuple label out of range");
  QfType p(s.sig, static_cast<int>(tuple.size()));
  for (size_t i = 0; i < tuple.size(); ++i)
    for (size_t j = 0; j < i; ++j)
      if (tuple[i] == tuple[j]) {
        p.eq_class[i] = p.eq_class[j];
        break;
      }
  for (size_t r = 0; r < s.sig.relations.size(); ++r) {
    int ar = s.sig.relations[r].arity;
    if (p.width == 0) continue;
    std::vector<int> t(ar, 0), u(ar);
    while (true) {
      for (int k = 0; k < ar; ++k) u[k] = tuple[t[k]];
      p.set(static_cast<int>(r), t, s.holds(static_cast<int>(r), u) ? Tri::True : Tri::False);
      int k = ar - 1;
      while (k >= 0 && ++t[k] == p.width) t[k--] = 0;
      if (k < 0) break;
    }
  }
  return p;
}

FiniteStructure induced_substructure(const FiniteStructure& s,
                                     std::span<const int> tuple) {
  std::set<int> seen;
  for (int x : tuple) {
    if (x < 0 || x >= s.size) throw ForgeError("out_of_range", "label out of range");
    if (!seen.insert(x).second)
      throw ForgeError("repeated_label", "induced_substructure requires distinct labels");
  }
  FiniteStructure out(s.sig, static_cast<int>(tuple.size()));
  for (size_t r = 0; r < s.sig.relations.size(); ++r) {
    int ar = s.sig.relations[r].arity;
    if (out.size == 0) continue;
    std::vector<int> t(ar, 0), u(ar);
    while (true) {
      for (int k = 0; k < ar; ++k) u[k] = tuple[t[k]];
      if (s.holds(static_cast<int>(r), u))
        out.tuples[r].insert(t);
      int k = ar - 1;
      while (k >= 0 && ++t[k] == out.size) t[k--] = 0;
      if (k < 0) break;
    }
  }
  return out;
}

FiniteStructure structure_of_type(const QfType& p) {
  if (!p.complete() || !p.non_redundant())
    throw ForgeError("incomplete_type", "structure_of_type needs a complete non-redundant type");
  FiniteStructure s(p.sig, p.width);
  for (size_t r = 0; r < p.sig.relations.size(); ++r) {
    int ar = p.sig.relations[r].arity;
    std::vector<int> t(ar, 0);
    if (p.width == 0) continue;
    while (true) {
      if (p.get(static_cast<int>(r), t) == Tri::True) s.tuples[r].insert(t);
      int k = ar - 1;
      while (k >= 0 && ++t[k] == p.width) t[k--] = 0;
      if (k < 0) break;
    }
  }
  return s;
}

bool type_extends(const QfType& q, const QfType& p, std::span<const int> positions) {
  if (static_cast<int>(positions.size()) != p.width)
    throw ForgeError("bad_positions", "position map must cover p's variables");
  std::set<int> seen;
  for (int x : positions) {
    if (x < 0 || x >= q.width) throw ForgeError("bad_positions", "position out of range");
    if (!seen.insert(x).second) throw ForgeError("bad_positions", "position map must be injective");
  }
  for (int i = 0; i < p.width; ++i)
    for (int j = 0; j < p.width; ++j)
      if (p.same_class(i, j) != q.same_class(positions[i], positions[j])) return false;
  for (size_t r = 0; r < p.atoms.size(); ++r) {
    int ar = p.sig.relations[r].arity;
    if (p.width == 0) continue;
    std::vector<int> t(ar, 0), u(ar);
    while (true) {
      Tri v = p.get(static_cast<int>(r), t);
      if (v != Tri::Unknown) {
        for (int k = 0; k < ar; ++k) u[k] = positions[t[k]];
        if (q.get(static_cast<int>(r), u) != v) return false;
      }
      int k = ar - 1;
      while (k >= 0 && ++t[k] == p.width) t[k--] = 0;
      if (k < 0) break;
    }
  }
  return true;
}

void QfFormula::normalize() {
  for (auto& d : disjuncts) {
    std::sort(d.begin(), d.end(), [](const Literal& x, const Literal& y) {
      return std::tie(x.rel, x.vars, x.positive) < std::tie(y.rel, y.vars, y.positive);
    });
    d.erase(std::unique(d.begin(), d.end()), d.end());
  }
  std::sort(disjuncts.begin(), disjuncts.end());
  disjuncts.erase(std::unique(disjuncts.begin(), disjuncts.end()), disjuncts.end());
}

bool QfFormula::eval(const FiniteStructure& s, std::span<const int> assignment) const {
  if (static_cast<int>(assignment.size()) < width)
    throw ForgeError("unbound_variable", "assignment does not cover all free variables");
  for (const auto& disj : disjuncts) {
    bool ok = true;
    for (const Literal& lit : disj) {
      bool v;
      if (lit.rel < 0) {
        v = assignment[lit.vars[0]] == assignment[lit.vars[1]];
      } else {
        std::vector<int> args(lit.vars.size());
        for (size_t k = 0; k < lit.vars.size(); ++k) args[k] = assignment[lit.vars[k]];
        s.check_tuple(lit.rel, args);
        v = s.holds(lit.rel, args);
      }
      if (v != lit.positive) { ok = false; break; }
    }
    if (ok) return true;
  }
  return false;
}

QfFormula QfFormula::substituted(std::span<const int> map, int new_width) const {
  QfFormula out;
  out.width = new_width;
  out.disjuncts = disjuncts;
  for (auto& d : out.disjuncts)
    for (auto& lit : d)
      for (auto& v : lit.vars) v = map[v];
  out.normalize();
  return out;
}

std::string QfFormula::key() const {
  std::ostringstream os;
  for (const auto& d : disjuncts) {
    os << '[';
    for (const auto& l : d) {
      os << (l.positive ? "" : "!") << l.rel << '(';
      for (size_t k = 0; k < l.vars.size(); ++k) os << (k ? "," : "") << l.vars[k];
      os << ')';
    }
    os << ']';
  }
  return os.str();
}

bool eval_qf(const QfFormula& f, const FiniteStructure& s,
             const std::map<std::string, int>& assignment) {
  if (static_cast<int>(f.var_names.size()) < f.width)
    throw ForgeError("unbound_variable", "formula lacks variable names for map evaluation");
  std::vector<int> a(f.width);
  for (int i = 0; i < f.width; ++i) {
    auto it = assignment.find(f.var_names[i]);
    if (it == assignment.end())
      throw ForgeError("unbound_variable", "unbound variable: " + f.var_names[i]);
    if (it->second < 0 || it->second >= s.size)
      throw ForgeError("out_of_range", "assignment label out of range");
    a[i] = it->second;
  }
  return f.eval(s, a);
}

}  // namespace forge
