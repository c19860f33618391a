#pragma once

#include "forge/theory.hpp"

namespace forge {

struct AtomSlot {
  int rel;
  std::vector<int> args;
};

/// All atom slots whose argument tuple mentions `pos`, over positions
/// 0..width-1, ordered by (relation index, argument tuple lex).
std::vector<AtomSlot> slots_touching(const Signature& sig, int width, int pos);

/// All atom slots mentioning both a and b.
std::vector<AtomSlot> slots_touching_both(const Signature& sig, int width, int a, int b);

namespace detail {

template <TypeLike T>
bool dfs_slots(const CompiledTheory& th, T& type, int width,
               std::span<const AtomSlot> slots, size_t i) {
  while (i < slots.size() && type.get(slots[i].rel, slots[i].args) != Tri::Unknown) ++i;
  if (i == slots.size()) return true;
  const AtomSlot& s = slots[i];
  for (Tri v : {Tri::False, Tri::True}) {
    type.set(s.rel, s.args, v);
    if (universals_ok_after_set(th, type, width, s.rel, s.args, v) &&
        dfs_slots(th, type, width, slots, i + 1))
      return true;
  }
  type.set(s.rel, s.args, Tri::Unknown);
  return false;
}

template <TypeLike T, class Fn>
void dfs_all(const CompiledTheory& th, T& type, int width,
             std::span<const AtomSlot> slots, size_t i, Fn&& visit) {
  while (i < slots.size() && type.get(slots[i].rel, slots[i].args) != Tri::Unknown) ++i;
  if (i == slots.size()) {
    visit();
    return;
  }
  const AtomSlot& s = slots[i];
  for (Tri v : {Tri::False, Tri::True}) {
    type.set(s.rel, s.args, v);
    if (universals_ok_after_set(th, type, width, s.rel, s.args, v))
      dfs_all(th, type, width, slots, i + 1, visit);
  }
  type.set(s.rel, s.args, Tri::Unknown);
}

}  // namespace detail

/// Depth-first search over the undecided slots in order, assigning False
/// before True (the free completion is tried first); every assignment must
/// keep all universal constraints satisfiable. Pre-decided slots in the list
/// are kept as-is. On success the slots are left assigned; on failure every
/// slot this call decided is restored to Unknown.
template <TypeLike T>
bool complete_slots(const CompiledTheory& th, T& type, int width,
                    std::span<const AtomSlot> slots) {
  return detail::dfs_slots(th, type, width, slots, 0);
}

/// Visits every consistent completion of the given slots (the type is fully
/// assigned during each visit, and restored afterwards).
template <TypeLike T, class Fn>
void for_each_completion(const CompiledTheory& th, T& type, int width,
                         std::span<const AtomSlot> slots, Fn&& visit) {
  detail::dfs_all(th, type, width, slots, 0, visit);
}

/// Canonically completes the atoms around position new_pos. `forced`
/// assignments are applied first (typically the literals of a chosen
/// axiom disjunct). Restores everything on failure.
template <TypeLike T>
bool canonical_new_position(const CompiledTheory& th, T& type, int width, int new_pos,
                            std::span<const std::pair<AtomSlot, Tri>> forced) {
  std::vector<AtomSlot> undone;
  for (const auto& [slot, val] : forced) {
    Tri cur = type.get(slot.rel, slot.args);
    if (cur == val) continue;
    if (cur != Tri::Unknown) {
      for (const auto& u : undone) type.set(u.rel, u.args, Tri::Unknown);
      return false;  // clashes with an already decided atom
    }
    type.set(slot.rel, slot.args, val);
    undone.push_back(slot);
    if (!universals_ok_after_set(th, type, width, slot.rel, slot.args, val)) {
      for (const auto& u : undone) type.set(u.rel, u.args, Tri::Unknown);
      return false;
    }
  }
  auto slots = slots_touching(th.sig, width, new_pos);
  if (complete_slots(th, type, width, slots)) return true;
  for (const auto& u : undone) type.set(u.rel, u.args, Tri::Unknown);
  return false;
}

/// Copies the atoms of position orig onto position new_pos for every tuple
/// avoiding orig, leaving the atoms that mention both positions undecided.
template <TypeLike T>
void copy_position(const Signature& sig, T& type, int width, int orig, int new_pos) {
  for (size_t r = 0; r < sig.relations.size(); ++r) {
    int ar = sig.relations[r].arity;
    std::vector<int> t(ar, 0), u(ar);
    while (true) {
      bool has_new = false, has_orig = false;
      for (int k = 0; k < ar; ++k) {
        if (t[k] == new_pos) has_new = true;
        if (t[k] == orig) has_orig = true;
      }
      if (has_new && !has_orig) {
        for (int k = 0; k < ar; ++k) u[k] = t[k] == new_pos ? orig : t[k];
        type.set(static_cast<int>(r), t, type.get(static_cast<int>(r), u));
      }
      int k = ar - 1;
      while (k >= 0 && ++t[k] == width) t[k--] = 0;
      if (k < 0) break;
    }
  }
}

/// Searches for a duplicating completion: new_pos already carries a copy of
/// orig's atoms away from orig; decide the atoms mentioning both so that the
/// whole type stays consistent. False-first, so free amalgamation is found
/// where the constraints allow it.
template <TypeLike T>
bool duplicate_cross(const CompiledTheory& th, T& type, int width, int orig, int new_pos) {
  auto slots = slots_touching_both(th.sig, width, orig, new_pos);
  return complete_slots(th, type, width, slots);
}

}  // namespace forge
