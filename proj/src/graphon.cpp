#include "forge/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace forge {

void StepGraphon::validate() const {
  double sum = 0;
  for (double m : masses) {
    if (m < -1e-12) throw ForgeError("bad_graphon", "negative part mass");
    sum += m;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ForgeError("bad_graphon", "masses must sum to 1");
  if (values.size() != masses.size()) throw ForgeError("bad_graphon", "shape mismatch");
  bool rf = true;
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i].size() != masses.size()) throw ForgeError("bad_graphon", "shape mismatch");
    for (size_t j = 0; j < values.size(); ++j) {
      double v = values[i][j];
      if (v < 0 || v > 1) throw ForgeError("bad_graphon", "edge value outside [0,1]");
      if (std::abs(values[i][j] - values[j][i]) > 1e-12)
        throw ForgeError("bad_graphon", "values must be symmetric");
      if (v != 0.0 && v != 1.0) rf = false;
    }
  }
  if (random_free && !rf)
    throw ForgeError("bad_graphon", "random_free flag inconsistent with values");
}

StepGraphon StepGraphon::constant(double p) {
  StepGraphon w;
  w.masses = {1.0};
  w.values = {{p}};
  w.random_free = (p == 0.0 || p == 1.0);
  w.unresolved_mass = 0.0;
  return w;
}

StepGraphon export_step_graphon(const ConstructionTrace& trace, const MeasureSpec& m) {
  const Signature& sig = trace.theory->sig;
  if (sig.relations.size() != 1 || sig.relations[0].arity != 2)
    throw ForgeError("non_graph_signature",
                     "graphon export needs exactly one binary relation");
  int w = trace.width();
  // the trace type must be symmetric and irreflexive on interior positions
  for (int i = 0; i < w; ++i) {
    std::vector<int> d{i, i};
    if (trace.type.get(0, d) != Tri::False)
      throw ForgeError("non_graph_signature", "trace relation is not irreflexive");
    for (int j = 0; j < w; ++j) {
      std::vector<int> ij{i, j}, ji{j, i};
      if (trace.type.get(0, ij) != trace.type.get(0, ji))
        throw ForgeError("non_graph_signature", "trace relation is not symmetric");
    }
  }
  StepGraphon out;
  int parts = w + 2;  // left tail, interiors, right tail
  out.masses.resize(parts);
  out.values.assign(parts, std::vector<double>(parts, 0.0));
  out.masses[0] = cdf_at(m, trace.bounds.front());
  for (int j = 0; j < w; ++j)
    out.masses[j + 1] = cdf_at(m, trace.bounds[j + 1]) - cdf_at(m, trace.bounds[j]);
  out.masses[parts - 1] = 1.0 - cdf_at(m, trace.bounds.back());
  for (int i = 0; i < w; ++i)
    for (int j = 0; j < w; ++j) {
      std::vector<int> ids{trace.order[i], trace.order[j]};
      out.values[i + 1][j + 1] =
          trace.type.get(0, ids) == Tri::True ? 1.0 : 0.0;
    }
  out.random_free = true;
  out.unresolved_mass = out.masses[0] + out.masses[parts - 1];
  out.validate();
  return out;
}

FiniteStructure w_random(const StepGraphon& W, int n, Rng rng) {
  if (n < 1) throw ForgeError("bad_argument", "need at least one vertex");
  W.validate();
  std::vector<int> part(n);
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform(), acc = 0;
    int p = static_cast<int>(W.masses.size()) - 1;
    for (size_t k = 0; k < W.masses.size(); ++k) {
      acc += W.masses[k];
      if (u < acc) { p = static_cast<int>(k); break; }
    }
    part[i] = p;
  }
  FiniteStructure g(Signature{{{"E", 2}}, {}}, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.bernoulli(W.values[part[i]][part[j]])) {
        g.tuples[0].insert({i, j});
        g.tuples[0].insert({j, i});
      }
  return g;
}

CompareReport distribution_compare(const GraphGen& a, const GraphGen& b, long draws,
                                   Rng rng) {
  CompareReport rep;
  rep.draws = draws;
  std::map<std::string, long> ca, cb;
  for (long d = 0; d < draws; ++d) {
    try {
      ++ca[a(rng.child(2 * static_cast<std::uint64_t>(d))).key()];
      ++rep.kept_a;
    } catch (const FilteredDraw&) {
    }
    try {
      ++cb[b(rng.child(2 * static_cast<std::uint64_t>(d) + 1)).key()];
      ++rep.kept_b;
    } catch (const FilteredDraw&) {
    }
  }
  if (rep.kept_a == 0 || rep.kept_b == 0)
    throw ForgeError("no_draws", "a generator filtered every draw");
  std::set<std::string> keys;
  for (const auto& [k, v] : ca) keys.insert(k);
  for (const auto& [k, v] : cb) keys.insert(k);
  double tv = 0;
  for (const auto& k : keys) {
    double pa = ca.count(k) ? static_cast<double>(ca[k]) / rep.kept_a : 0.0;
    double pb = cb.count(k) ? static_cast<double>(cb[k]) / rep.kept_b : 0.0;
    tv += std::abs(pa - pb);
  }
  rep.tv = tv / 2;
  return rep;
}

}  // namespace forge
