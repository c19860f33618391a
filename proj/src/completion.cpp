#include "forge/completion.hpp"

#include <algorithm>
#include <bit>

namespace forge {

namespace {

// Enumerates tuples by labeling each coordinate as one of the pinned
// positions or "free"; free coordinates never take a pinned value, so each
// tuple is produced exactly once. Tuples must use every pinned position.
void gen(int arity, int width, std::span<const int> pinned, int rel,
         std::vector<int>& t, size_t k, unsigned used_mask,
         std::vector<AtomSlot>& out) {
  if (k == t.size()) {
    if (used_mask + 1 == (1u << pinned.size()))
      out.push_back({rel, t});
    return;
  }
  for (size_t p = 0; p < pinned.size(); ++p) {
    t[k] = pinned[p];
    gen(arity, width, pinned, rel, t, k + 1, used_mask | (1u << p), out);
  }
  // free coordinate: skip entirely if not enough coordinates remain to place
  // the unused pinned positions
  size_t missing = pinned.size() - static_cast<size_t>(std::popcount(used_mask + 0u));
  if (t.size() - k - 1 < missing) return;
  for (int v = 0; v < width; ++v) {
    bool is_pinned = false;
    for (int p : pinned)
      if (v == p) { is_pinned = true; break; }
    if (is_pinned) continue;
    t[k] = v;
    gen(arity, width, pinned, rel, t, k + 1, used_mask, out);
  }
}

std::vector<AtomSlot> slots_with_pins(const Signature& sig, int width,
                                      std::span<const int> pinned) {
  std::vector<AtomSlot> out;
  for (size_t r = 0; r < sig.relations.size(); ++r) {
    int ar = sig.relations[r].arity;
    if (ar < static_cast<int>(pinned.size())) continue;
    std::vector<int> t(ar, 0);
    gen(ar, width, pinned, static_cast<int>(r), t, 0, 0, out);
  }
  std::sort(out.begin(), out.end(), [](const AtomSlot& a, const AtomSlot& b) {
    return std::tie(a.rel, a.args) < std::tie(b.rel, b.args);
  });
  return out;
}

}  // namespace

std::vector<AtomSlot> slots_touching(const Signature& sig, int width, int pos) {
  int pins[1] = {pos};
  return slots_with_pins(sig, width, pins);
}

std::vector<AtomSlot> slots_touching_both(const Signature& sig, int width, int a, int b) {
  int pins[2] = {a, b};
  return slots_with_pins(sig, width, pins);
}

}  // namespace forge
