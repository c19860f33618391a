#include "forge/enumerate.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace forge {

QfType canonical_type(const QfType& p) {
  std::vector<int> perm(p.width);
  std::iota(perm.begin(), perm.end(), 0);
  QfType best = p;
  std::string best_key = p.key();
  do {
    QfType q = p.restrict_to(perm);
    std::string k = q.key();
    if (k < best_key) {
      best_key = std::move(k);
      best = std::move(q);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<QfType> consistent_types(const CompiledTheory& th, int width, bool dedupe) {
  QfType seed(th.sig, width);
  std::vector<AtomSlot> all;
  for (size_t r = 0; r < th.sig.relations.size(); ++r) {
    int ar = th.sig.relations[r].arity;
    std::vector<int> t(ar, 0);
    while (true) {
      all.push_back({static_cast<int>(r), t});
      int k = ar - 1;
      while (k >= 0 && ++t[k] == width) t[k--] = 0;
      if (k < 0) break;
    }
  }
  std::vector<QfType> out;
  std::set<std::string> seen;
  for_each_completion(th, seed, width, all, [&] {
    if (!dedupe) {
      out.push_back(seed);
      return;
    }
    QfType c = canonical_type(seed);
    if (seen.insert(c.key()).second) out.push_back(std::move(c));
  });
  return out;
}

std::vector<QfType> one_point_extensions(const CompiledTheory& th, const QfType& base) {
  QfType seed(th.sig, base.width + 1);
  // plant the base type on the first base.width variables
  for (size_t r = 0; r < th.sig.relations.size(); ++r) {
    int ar = th.sig.relations[r].arity;
    std::vector<int> t(ar, 0);
    if (base.width == 0) break;
    while (true) {
      seed.set(static_cast<int>(r), t, base.get(static_cast<int>(r), t));
      int k = ar - 1;
      while (k >= 0 && ++t[k] == base.width) t[k--] = 0;
      if (k < 0) break;
    }
  }
  auto slots = slots_touching(th.sig, seed.width, base.width);
  std::vector<QfType> out;
  for_each_completion(th, seed, seed.width, slots, [&] { out.push_back(seed); });
  return out;
}

std::vector<FiniteStructure> enumerate_age(const CompiledTheory& th, int max_size) {
  std::vector<FiniteStructure> out;
  for (int n = 1; n <= max_size; ++n)
    for (const QfType& p : consistent_types(th, n, true))
      out.push_back(structure_of_type(p));
  return out;
}

}  // namespace forge
