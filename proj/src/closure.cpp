#include "forge/closure.hpp"

#include "forge/completion.hpp"
#include "forge/enumerate.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace forge {

namespace {

/// Refinement coloring: iterate hashing each element's relation profile
/// against current colors until stable.
std::vector<int> stable_coloring(const FiniteStructure& s) {
  std::vector<int> color(s.size, 0);
  for (int round = 0; round < s.size; ++round) {
    // each element's profile: the multiset of colored tuples it appears in
    std::vector<std::vector<std::string>> parts(s.size);
    for (size_t r = 0; r < s.tuples.size(); ++r)
      for (const auto& t : s.tuples[r])
        for (size_t k = 0; k < t.size(); ++k) {
          std::string part = std::to_string(r) + ":" + std::to_string(k) + "[";
          for (int x : t) part += std::to_string(color[x]) + ",";
          parts[t[k]].push_back(part + "]");
        }
    std::vector<std::string> sigs(s.size);
    for (int i = 0; i < s.size; ++i) {
      std::sort(parts[i].begin(), parts[i].end());
      sigs[i] = std::to_string(color[i]) + "|";
      for (const auto& p : parts[i]) sigs[i] += p;
    }
    std::map<std::string, int> index;
    std::vector<int> next(s.size);
    for (int i = 0; i < s.size; ++i) {
      auto [it, _] = index.emplace(sigs[i], static_cast<int>(index.size()));
      next[i] = it->second;
    }
    if (next == color) break;
    color = std::move(next);
  }
  return color;
}

bool perm_preserves(const FiniteStructure& s, const std::vector<int>& perm) {
  for (size_t r = 0; r < s.tuples.size(); ++r)
    for (const auto& t : s.tuples[r]) {
      std::vector<int> u(t.size());
      for (size_t k = 0; k < t.size(); ++k) u[k] = perm[t[k]];
      if (!s.tuples[r].count(u)) return false;
    }
  return true;
}

void search_autos(const FiniteStructure& s, const std::vector<int>& color,
                  std::vector<int>& perm, std::vector<bool>& used, int i,
                  std::vector<std::vector<int>>& out) {
  if (i == s.size) {
    if (perm_preserves(s, perm)) out.push_back(perm);
    return;
  }
  for (int j = 0; j < s.size; ++j) {
    if (used[j] || color[j] != color[i]) continue;
    // partial consistency: every fully mapped tuple must be preserved
    perm[i] = j;
    used[j] = true;
    bool ok = true;
    for (size_t r = 0; r < s.tuples.size() && ok; ++r) {
      int ar = s.sig.relations[r].arity;
      // check tuples whose entries are all mapped and include i
      std::vector<int> t(ar, 0);
      while (ok) {
        bool has_i = false, all_mapped = true;
        for (int x : t) {
          if (x == i) has_i = true;
          if (x > i) all_mapped = false;
        }
        if (has_i && all_mapped) {
          std::vector<int> u(ar);
          for (int k = 0; k < ar; ++k) u[k] = perm[t[k]];
          if ((s.tuples[r].count(std::vector<int>(t.begin(), t.end())) > 0) !=
              (s.tuples[r].count(u) > 0))
            ok = false;
        }
        int k = ar - 1;
        while (k >= 0 && ++t[k] == s.size) t[k--] = 0;
        if (k < 0) break;
      }
    }
    if (ok) search_autos(s, color, perm, used, i + 1, out);
    used[j] = false;
  }
  perm[i] = -1;
}

}  // namespace

AutomorphismSet automorphisms(const FiniteStructure& s, int size_bound) {
  if (s.size > size_bound)
    throw ForgeError("size_bound",
                     "structure size exceeds the automorphism bound (" +
                         std::to_string(size_bound) + "); full enumeration only");
  AutomorphismSet out;
  out.size = s.size;
  std::vector<int> color = stable_coloring(s);
  std::vector<int> perm(s.size, -1);
  std::vector<bool> used(s.size, false);
  search_autos(s, color, perm, used, 0, out.perms);
  std::sort(out.perms.begin(), out.perms.end());
  return out;
}

namespace {

std::vector<std::vector<int>> stabilizer(const FiniteStructure& s,
                                         std::span<const int> tuple, int size_bound) {
  for (int x : tuple)
    if (x < 0 || x >= s.size) throw ForgeError("out_of_range", "tuple label out of range");
  AutomorphismSet all = automorphisms(s, size_bound);
  std::vector<std::vector<int>> fix;
  for (auto& p : all.perms) {
    bool fixes = true;
    for (int x : tuple)
      if (p[x] != x) { fixes = false; break; }
    if (fixes) fix.push_back(std::move(p));
  }
  return fix;
}

}  // namespace

std::set<int> dcl(const FiniteStructure& s, std::span<const int> tuple, int size_bound) {
  auto stab = stabilizer(s, tuple, size_bound);
  std::set<int> out;
  for (int b = 0; b < s.size; ++b) {
    bool fixed = true;
    for (const auto& p : stab)
      if (p[b] != b) { fixed = false; break; }
    if (fixed) out.insert(b);
  }
  return out;
}

std::vector<int> acl_orbit_sizes(const FiniteStructure& s, std::span<const int> tuple,
                                 int size_bound) {
  auto stab = stabilizer(s, tuple, size_bound);
  std::vector<int> size_of(s.size, 0);
  std::vector<bool> seen(s.size, false);
  for (int b = 0; b < s.size; ++b) {
    if (seen[b]) continue;
    std::set<int> orbit;
    for (const auto& p : stab) orbit.insert(p[b]);
    for (int x : orbit) {
      seen[x] = true;
      size_of[x] = static_cast<int>(orbit.size());
    }
  }
  return size_of;
}

std::set<int> acl_below(const FiniteStructure& s, std::span<const int> tuple, int t,
                        int size_bound) {
  auto sizes = acl_orbit_sizes(s, tuple, size_bound);
  std::set<int> out;
  for (int b = 0; b < s.size; ++b)
    if (sizes[b] <= t) out.insert(b);
  return out;
}

namespace {

void check_embedding(const FiniteStructure& a, const FiniteStructure& big,
                     std::span<const int> emb) {
  if (static_cast<int>(emb.size()) != a.size)
    throw ForgeError("bad_embedding", "embedding must cover the substructure");
  std::set<int> img;
  for (int x : emb) {
    if (x < 0 || x >= big.size) throw ForgeError("bad_embedding", "image out of range");
    if (!img.insert(x).second) throw ForgeError("bad_embedding", "embedding not injective");
  }
  for (size_t r = 0; r < a.sig.relations.size(); ++r) {
    int ar = a.sig.relations[r].arity;
    std::vector<int> t(ar, 0), u(ar);
    if (a.size == 0) continue;
    while (true) {
      for (int k = 0; k < ar; ++k) u[k] = emb[t[k]];
      if (a.holds(static_cast<int>(r), t) != big.holds(static_cast<int>(r), u))
        throw ForgeError("bad_embedding", "map does not preserve " + a.sig.relations[r].name);
      int k = ar - 1;
      while (k >= 0 && ++t[k] == a.size) t[k--] = 0;
      if (k < 0) break;
    }
  }
}

/// Type-like view of a partially decided structure used for the cross-atom
/// search during amalgamation.
struct PartialStructure {
  Signature sig;
  int width = 0;
  std::vector<std::vector<Tri>> atoms;

  PartialStructure(Signature s, int w) : sig(std::move(s)), width(w) {
    atoms.resize(sig.relations.size());
    for (size_t r = 0; r < atoms.size(); ++r) {
      size_t n = 1;
      for (int k = 0; k < sig.relations[r].arity; ++k) n *= static_cast<size_t>(width);
      atoms[r].assign(n, Tri::Unknown);
    }
  }
  size_t idx(int rel, std::span<const int> args) const {
    size_t v = 0;
    for (int a : args) v = v * static_cast<size_t>(width) + static_cast<size_t>(a);
    (void)rel;
    return v;
  }
  Tri get(int rel, std::span<const int> args) const { return atoms[rel][idx(rel, args)]; }
  void set(int rel, std::span<const int> args, Tri v) { atoms[rel][idx(rel, args)] = v; }
  bool same_class(int i, int j) const { return i == j; }

  QfType as_type() const {
    QfType t(sig, width);
    t.atoms = atoms;
    return t;
  }
};

}  // namespace

std::optional<Amalgam> strong_amalgam(const FiniteStructure& a, const FiniteStructure& b,
                                      const FiniteStructure& c,
                                      std::span<const int> emb_ab,
                                      std::span<const int> emb_ac,
                                      const AgeOracle& oracle) {
  check_embedding(a, b, emb_ab);
  check_embedding(a, c, emb_ac);
  const CompiledTheory& th = *oracle.theory;
  if (!(b.sig == th.sig) || !(c.sig == th.sig) || !(a.sig == th.sig))
    throw ForgeError("bad_signature", "amalgamation inputs must share the oracle signature");

  int na = a.size, nb = b.size, nc = c.size;
  int total = nb + nc - na;
  // glued labels: 0..na-1 = A, then B\A, then C\A
  std::vector<int> b_to_glued(nb, -1), c_to_glued(nc, -1);
  for (int i = 0; i < na; ++i) b_to_glued[emb_ab[i]] = i;
  for (int i = 0; i < na; ++i) c_to_glued[emb_ac[i]] = i;
  int next = na;
  for (int i = 0; i < nb; ++i)
    if (b_to_glued[i] < 0) b_to_glued[i] = next++;
  for (int i = 0; i < nc; ++i)
    if (c_to_glued[i] < 0) c_to_glued[i] = next++;

  PartialStructure part(th.sig, total);
  auto plant = [&](const FiniteStructure& s, const std::vector<int>& to_glued) {
    for (size_t r = 0; r < s.sig.relations.size(); ++r) {
      int ar = s.sig.relations[r].arity;
      std::vector<int> t(ar, 0), u(ar);
      if (s.size == 0) continue;
      while (true) {
        for (int k = 0; k < ar; ++k) u[k] = to_glued[t[k]];
        part.set(static_cast<int>(r), u,
                 s.holds(static_cast<int>(r), t) ? Tri::True : Tri::False);
        int k = ar - 1;
        while (k >= 0 && ++t[k] == s.size) t[k--] = 0;
        if (k < 0) break;
      }
    }
  };
  plant(b, b_to_glued);
  plant(c, c_to_glued);

  if (!universals_ok_full(th, part, total)) return std::nullopt;

  // cross atoms: everything still unknown, in canonical slot order
  std::vector<AtomSlot> cross;
  for (size_t r = 0; r < th.sig.relations.size(); ++r) {
    int ar = th.sig.relations[r].arity;
    std::vector<int> t(ar, 0);
    while (true) {
      if (part.get(static_cast<int>(r), t) == Tri::Unknown)
        cross.push_back({static_cast<int>(r), t});
      int k = ar - 1;
      while (k >= 0 && ++t[k] == total) t[k--] = 0;
      if (k < 0) break;
    }
  }
  if (!complete_slots(th, part, total, cross)) return std::nullopt;

  Amalgam out;
  out.glued = structure_of_type(part.as_type());
  out.emb_b = b_to_glued;
  out.emb_c = c_to_glued;
  return out;
}

AmalgamReport check_strong_amalgamation(const AgeOracle& oracle, int size_bound) {
  AmalgamReport report;
  report.size_bound = size_bound;
  auto age = enumerate_age(*oracle.theory, size_bound);
  std::set<std::string> seen_cases;
  for (const auto& b : age) {
    for (const auto& c : age) {
      // common substructures: subsets of B, mapped injectively into C
      for (int mask = 0; mask < (1 << b.size); ++mask) {
        std::vector<int> sel;
        for (int i = 0; i < b.size; ++i)
          if (mask & (1 << i)) sel.push_back(i);
        if (sel.empty()) continue;  // amalgamation over the empty set is disjoint union
        FiniteStructure a = induced_substructure(b, sel);
        // injections of A into C preserving structure
        std::vector<int> pick(a.size, -1);
        std::vector<bool> used(c.size, false);
        std::function<void(int)> rec = [&](int i) {
          if (i == a.size) {
            // dedupe up to isomorphism of the whole configuration
            std::string key = a.canonical_key() + "|" + b.canonical_key() + "|" +
                              c.canonical_key() + "|" + diagram_of(b, sel).key() + "|" +
                              diagram_of(c, pick).key();
            if (!seen_cases.insert(key).second) return;
            ++report.pairs_tested;
            auto res = strong_amalgam(a, b, c, sel, pick, oracle);
            if (!res) {
              report.all_pass = false;
              if (report.failures.size() < 8)
                report.failures.push_back({a, b, c, sel, pick, false});
            }
            return;
          }
          for (int j = 0; j < c.size; ++j) {
            if (used[j]) continue;
            pick[i] = j;
            used[j] = true;
            bool ok = true;
            // partial preservation check
            std::vector<int> pre(i + 1);
            std::iota(pre.begin(), pre.end(), 0);
            QfType da = diagram_of(a, pre);
            std::vector<int> img(pick.begin(), pick.begin() + i + 1);
            QfType dc = diagram_of(c, img);
            ok = da.key() == dc.key();
            if (ok) rec(i + 1);
            used[j] = false;
          }
          pick[i] = -1;
        };
        rec(0);
      }
    }
  }
  return report;
}

DuplicationReport check_duplication(const TheoryRef& theory, int width_bound) {
  DuplicationReport report;
  report.width_bound = width_bound;
  for (int w = 1; w <= width_bound && report.pass; ++w) {
    for (const QfType& p : consistent_types(*theory, w, true)) {
      for (int x = 0; x < w && report.pass; ++x) {
        ++report.types_tested;
        // q on w+1 variables: variable w is the duplicate of x
        PartialStructure q(theory->sig, w + 1);
        for (size_t r = 0; r < theory->sig.relations.size(); ++r) {
          int ar = theory->sig.relations[r].arity;
          std::vector<int> t(ar, 0);
          while (true) {
            q.set(static_cast<int>(r), t, p.get(static_cast<int>(r), t));
            int k = ar - 1;
            while (k >= 0 && ++t[k] == w) t[k--] = 0;
            if (k < 0) break;
          }
        }
        copy_position(theory->sig, q, w + 1, x, w);
        if (duplicate_cross(*theory, q, w + 1, x, w)) {
          if (!report.witness) report.witness = q.as_type();
        } else {
          report.pass = false;
          report.counterexample = p;
          report.counterexample_position = x;
        }
      }
      if (!report.pass) break;
    }
  }
  return report;
}

FiniteStructure blowup(const FiniteStructure& base, int n) {
  if (n < 1) throw ForgeError("bad_argument", "blowup needs n >= 1");
  Signature sig = base.sig;
  sig.relations.push_back({"eqv", 2});
  int eqv = static_cast<int>(sig.relations.size()) - 1;
  FiniteStructure out(sig, base.size * n);
  auto lab = [&](int elem, int copy) { return elem * n + copy; };
  for (int e = 0; e < base.size; ++e)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.tuples[eqv].insert({lab(e, i), lab(e, j)});
  for (size_t r = 0; r < base.tuples.size(); ++r)
    for (const auto& t : base.tuples[r]) {
      // lift coordinate-wise over all copy choices
      std::vector<int> copies(t.size(), 0);
      while (true) {
        std::vector<int> u(t.size());
        for (size_t k = 0; k < t.size(); ++k) u[k] = lab(t[k], copies[k]);
        out.tuples[r].insert(std::move(u));
        int k = static_cast<int>(t.size()) - 1;
        while (k >= 0 && ++copies[k] == n) copies[k--] = 0;
        if (k < 0) break;
      }
    }
  return out;
}

}  // namespace forge
