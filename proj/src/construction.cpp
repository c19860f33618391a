#include "forge/construction.hpp"

#include "forge/completion.hpp"

#include <algorithm>

namespace forge {

void RelTable::ensure(int new_width) {
  if (new_width <= cap) {
    width = new_width;
    return;
  }
  int new_cap = cap;
  while (new_cap < new_width) new_cap *= 2;
  std::vector<std::uint8_t> nx(cap_pow(new_cap, arity),
                               static_cast<std::uint8_t>(Tri::Unknown));
  std::vector<int> t(arity, 0);
  if (width > 0 && arity > 0) {
    while (true) {
      size_t src = 0, dst = 0;
      for (int a : t) {
        src = src * static_cast<size_t>(cap) + static_cast<size_t>(a);
        dst = dst * static_cast<size_t>(new_cap) + static_cast<size_t>(a);
      }
      nx[dst] = cells[src];
      int k = arity - 1;
      while (k >= 0 && ++t[k] == width) t[k--] = 0;
      if (k < 0) break;
    }
  }
  cap = new_cap;
  cells = std::move(nx);
  width = new_width;
}

void RelTable::reserve_positions(int n) {
  if (n <= cap) return;
  int w = width;
  ensure(n);
  width = w;
}

void TraceType::init(const Signature& s, int cap0) {
  sig = s;
  width = 0;
  rels.resize(sig.relations.size());
  for (size_t r = 0; r < rels.size(); ++r) rels[r].init(sig.relations[r].arity, cap0);
}

int TraceType::add_position() {
  int id = width++;
  for (auto& r : rels) r.ensure(width);
  return id;
}

int ConstructionTrace::rank_of(int id) const {
  for (size_t j = 0; j < order.size(); ++j)
    if (order[j] == id) return static_cast<int>(j);
  return -1;
}

std::vector<int> ConstructionTrace::rank_keys(int pending_id, int pending_rank) const {
  // even keys for ranked positions, odd key just below the pending slot,
  // creation order beyond the end for not-yet-placed witnesses
  std::vector<int> rk(type.width, -1);
  for (size_t j = 0; j < order.size(); ++j)
    if (order[j] < type.width) rk[order[j]] = 2 * static_cast<int>(j);
  int base = 2 * static_cast<int>(order.size());
  for (int id = 0; id < type.width; ++id)
    if (rk[id] < 0) rk[id] = base + id;
  if (pending_id >= 0 && pending_id < type.width) rk[pending_id] = 2 * pending_rank - 1;
  return rk;
}

void ConstructionTrace::order_slots(std::vector<AtomSlot>& slots, int pending_id,
                                    int pending_rank) const {
  // Slots ordered by descending rank of their arguments: the free-first
  // search then resolves forced orientations (totality and the like) toward
  // the numeric order of the underlying rationals, so refinement choices
  // depend on values, never on creation history.
  auto rk = rank_keys(pending_id, pending_rank);
  std::sort(slots.begin(), slots.end(), [&](const AtomSlot& a, const AtomSlot& b) {
    if (a.rel != b.rel) return a.rel < b.rel;
    for (size_t i = 0; i < a.args.size(); ++i) {
      if (rk[a.args[i]] != rk[b.args[i]]) return rk[a.args[i]] > rk[b.args[i]];
    }
    return false;
  });
}

int ConstructionTrace::new_position_canonical(
    std::span<const std::pair<AtomSlot, Tri>> forced, int pending_rank) {
  int id = type.add_position();
  std::vector<AtomSlot> undone;
  bool ok = true;
  for (const auto& [slot, val] : forced) {
    Tri cur = type.get(slot.rel, slot.args);
    if (cur == val) continue;
    if (cur != Tri::Unknown) { ok = false; break; }
    type.set(slot.rel, slot.args, val);
    undone.push_back(slot);
    if (!universals_ok_after_set(*theory, type, type.width, slot.rel, slot.args, val)) {
      ok = false;
      break;
    }
  }
  if (ok) {
    auto slots = slots_touching(theory->sig, type.width, id);
    order_slots(slots, id, pending_rank);
    if (complete_slots(*theory, type, type.width, slots)) return id;
  }
  for (const auto& u : undone) type.set(u.rel, u.args, Tri::Unknown);
  type.drop_last_position();
  return -1;
}

ConstructionTrace ConstructionTrace::init(TheoryRef theory_) {
  ConstructionTrace tr;
  tr.theory = std::move(theory_);
  if (tr.theory->contradictory)
    throw ForgeError("theory_inconsistent",
                     "theory inconsistent: a universal constraint is unsatisfiable");
  tr.type.init(tr.theory->sig);
  int id = tr.new_position_canonical({}, 0);
  if (id < 0)
    throw ForgeError("theory_inconsistent",
                     "theory inconsistent: no consistent one-element configuration");
  tr.value.push_back(Rational(0));
  tr.order.push_back(id);
  tr.bounds.push_back(Quad{Rational(0), Rational(-1)});  // -sqrt(2)
  tr.bounds.push_back(Quad{Rational(0), Rational(1)});   // +sqrt(2)
  return tr;
}

Rational ConstructionTrace::next_rational() {
  std::uint64_t k = rational_cursor++;
  if (k == 0) return Rational(0);
  bool negative = (k % 2) == 0;
  Rational out = negative ? -cw_state : cw_state;
  if (negative) {
    // advance the Calkin-Wilf iteration x -> 1/(2 floor(x) - x + 1)
    cw_state = 1 / (2 * Rational(rat_floor(cw_state)) - cw_state + 1);
  }
  return out;
}

void ConstructionTrace::step() {
  ++stage;
  if (stage % 2 == 1) {
    refine(next_rational());
  } else {
    if (!theory->genuine.empty()) {
      enlarge(static_cast<int>(axiom_cursor % theory->genuine.size()));
      ++axiom_cursor;
    }
  }
}

ConstructionTrace ConstructionTrace::run(TheoryRef theory, long stages) {
  ConstructionTrace tr = init(std::move(theory));
  for (long s = 0; s < stages; ++s) tr.step();
  return tr;
}

IntervalLocation ConstructionTrace::locate(const Rational& point) const {
  // least index with point <= bounds[idx]
  size_t lo = 0, hi = bounds.size();
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (point <= bounds[mid])
      hi = mid;
    else
      lo = mid + 1;
  }
  if (lo == 0) return {IntervalLocation::OutsideLeft, -1};
  if (lo == bounds.size()) return {IntervalLocation::OutsideRight, -1};
  return {IntervalLocation::Interior, static_cast<int>(lo - 1)};
}

void ConstructionTrace::insert_rank(int id, const Rational& q, int rank, Quad boundary,
                                    int bound_at) {
  value.resize(std::max(value.size(), static_cast<size_t>(id + 1)));
  value[id] = q;
  order.insert(order.begin() + rank, id);
  bounds.insert(bounds.begin() + bound_at, std::move(boundary));
}

void ConstructionTrace::refine(const Rational& q) {
  // Case 1: the rational is already a position
  auto it = std::lower_bound(order.begin(), order.end(), q,
                             [&](int id, const Rational& v) { return value[id] < v; });
  if (it != order.end() && value[*it] == q) return;

  IntervalLocation loc = locate(q);
  if (!loc.interior()) {
    // Case 2: outside the covered range; the new outermost position takes
    // any consistent completion, found canonically
    bool left = loc.kind == IntervalLocation::OutsideLeft;
    int id = new_position_canonical({}, left ? 0 : static_cast<int>(order.size()));
    if (id < 0)
      throw ForgeError("extension_failure",
                       "no consistent completion for an outermost extension");
    if (left)
      insert_rank(id, q, 0, Quad{q - 1, Rational(-1, 2)}, 0);
    else
      insert_rank(id, q, static_cast<int>(order.size()), Quad{q + 1, Rational(1, 2)},
                  static_cast<int>(bounds.size()));
    return;
  }

  // Case 3: q falls in the interval of an existing position; duplicate it
  int rank = loc.rank;
  int orig = order[rank];
  int id = type.add_position();
  copy_position(theory->sig, type, type.width, orig, id);
  auto cross = slots_touching_both(theory->sig, type.width, orig, id);
  order_slots(cross, id, q < value[orig] ? rank : rank + 1);
  if (!complete_slots(*theory, type, type.width, cross)) {
    // clear the copied atoms before giving the position back
    for (const auto& slot : slots_touching(theory->sig, type.width, id))
      type.set(slot.rel, slot.args, Tri::Unknown);
    type.drop_last_position();
    throw DuplicationFailure(stage, rational_str(q), rank);
  }
  if (q < value[orig])
    insert_rank(id, q, rank, irrational_between(q, value[orig]), rank + 1);
  else
    insert_rank(id, q, rank + 1, irrational_between(value[orig], q), rank + 1);
}

void ConstructionTrace::enlarge(int genuine_index, std::span<const int> scope_ids) {
  const OnePointAxiom& ax = theory->axioms[theory->genuine[genuine_index]];
  const QfFormula& psi = ax.matrix;
  int k = ax.premise_width;
  int pre_width = type.width;

  // witness tuples range over the whole pre-stage trace, or over the given
  // scope during point-driven extension
  std::vector<int> universe;
  if (scope_ids.empty()) {
    for (int j = 0; j < pre_width; ++j) universe.push_back(order[j]);
  } else {
    universe.assign(scope_ids.begin(), scope_ids.end());
  }
  int m = static_cast<int>(universe.size());
  double tuple_count = 1;
  for (int i = 0; i < k; ++i) tuple_count *= m;
  if (tuple_count * std::max(1, pre_width) > 2e9)
    throw ForgeError("enlargement_too_large",
                     "enlargement pass over " + std::to_string(m) + "^" +
                         std::to_string(k) +
                         " tuples exceeds the desk-scale budget; reduce --stages");

  std::vector<int> new_ids;
  std::vector<int> zr(k, 0);  // tuple over the universe, lexicographic
  std::vector<int> asg(k + 1);
  while (true) {
    for (int i = 0; i < k; ++i) asg[i] = universe[zr[i]];
    // internal witness among all current positions?
    bool witnessed = false;
    for (int t = 0; t < type.width && !witnessed; ++t) {
      asg[k] = t;
      witnessed = psi.eval_on(type, asg) == Tri::True;
    }
    if (!witnessed) {
      bool added = false;
      for (const auto& disj : psi.disjuncts) {
        // literals not touching the witness variable must already hold
        bool feasible = true;
        std::vector<std::pair<AtomSlot, Tri>> forced;
        for (const Literal& lit : disj) {
          bool touches = false;
          for (int v : lit.vars) touches |= v == k;
          if (!touches) {
            std::vector<int> args(lit.vars.size());
            bool val;
            if (lit.rel < 0) {
              val = asg[lit.vars[0]] == asg[lit.vars[1]];
            } else {
              for (size_t i = 0; i < lit.vars.size(); ++i) args[i] = asg[lit.vars[i]];
              val = type.get(lit.rel, args) == Tri::True;
            }
            if (val != lit.positive) { feasible = false; break; }
          } else if (lit.rel < 0) {
            // equality with the fresh witness: positive means internal, which
            // already failed; negative is automatic
            if (lit.positive && lit.vars[0] != lit.vars[1]) { feasible = false; break; }
          }
        }
        if (!feasible) continue;
        int id = type.add_position();
        forced.clear();
        bool clash = false;
        for (const Literal& lit : disj) {
          if (lit.rel < 0) continue;
          bool touches = false;
          for (int v : lit.vars) touches |= v == k;
          if (!touches) continue;
          AtomSlot slot;
          slot.rel = lit.rel;
          for (int v : lit.vars) slot.args.push_back(v == k ? id : asg[v]);
          Tri want = lit.positive ? Tri::True : Tri::False;
          for (const auto& [s, w] : forced)
            if (s.rel == slot.rel && s.args == slot.args && w != want) clash = true;
          forced.push_back({std::move(slot), want});
        }
        bool done = false;
        if (!clash) {
          bool ok = true;
          std::vector<AtomSlot> undone;
          for (const auto& [slot, want] : forced) {
            Tri cur = type.get(slot.rel, slot.args);
            if (cur == want) continue;
            if (cur != Tri::Unknown) { ok = false; break; }
            type.set(slot.rel, slot.args, want);
            undone.push_back(slot);
            if (!universals_ok_after_set(*theory, type, type.width, slot.rel, slot.args,
                                         want)) {
              ok = false;
              break;
            }
          }
          if (ok) {
            auto slots = slots_touching(theory->sig, type.width, id);
            order_slots(slots, -1, 0);
            done = complete_slots(*theory, type, type.width, slots);
          }
          if (!done)
            for (const auto& u : undone) type.set(u.rel, u.args, Tri::Unknown);
        }
        if (done) {
          new_ids.push_back(id);
          witness_log.push_back({stage, ax.source, std::vector<int>(asg.begin(), asg.begin() + k), id});
          added = true;
          break;
        }
        type.drop_last_position();
      }
      if (!added)
        throw ForgeError("unwitnessable",
                         "axiom " + ax.source + " unwitnessable against the current type");
    }
    // next tuple over the universe
    int i = k - 1;
    while (i >= 0 && ++zr[i] == m) zr[i--] = 0;
    if (i < 0 || k == 0) break;
  }

  // place the witnesses at integers to the right of every existing rational
  // and past the last boundary, so the separation invariant extends
  if (!new_ids.empty()) {
    Rational base = Rational(rat_ceil(value[order.back()]));
    while (base + 1 <= bounds.back()) base += 1;
    std::vector<Rational> rats;
    for (size_t i = 0; i < new_ids.size(); ++i) rats.push_back(base + 1 + static_cast<long>(i));
    for (size_t i = 0; i < new_ids.size(); ++i) {
      Quad bd = (i + 1 < new_ids.size()) ? irrational_between(rats[i], rats[i + 1])
                                         : Quad{rats[i] + 1, Rational(1, 2)};
      value.resize(std::max(value.size(), static_cast<size_t>(new_ids[i] + 1)));
      value[new_ids[i]] = rats[i];
      order.push_back(new_ids[i]);
      bounds.push_back(std::move(bd));
    }
  }
}

QfType ConstructionTrace::type_of_tuple(std::span<const Rational> points) const {
  std::vector<int> ranks(points.size());
  for (size_t i = 0; i < points.size(); ++i) {
    IntervalLocation loc = locate(points[i]);
    if (!loc.interior())
      throw ForgeError("insufficient_stage_depth",
                       "point " + rational_str(points[i]) + " is outside the covered range");
    ranks[i] = loc.rank;
    for (size_t j = 0; j < i; ++j)
      if (ranks[j] == ranks[i] && !(points[j] == points[i]))
        throw ForgeError("insufficient_stage_depth",
                         "points " + rational_str(points[j]) + " and " +
                             rational_str(points[i]) + " share an interval");
  }
  QfType out(theory->sig, static_cast<int>(points.size()));
  for (size_t i = 0; i < points.size(); ++i)
    for (size_t j = 0; j < i; ++j)
      if (points[i] == points[j]) {
        out.eq_class[i] = out.eq_class[j];
        break;
      }
  for (size_t r = 0; r < theory->sig.relations.size(); ++r) {
    int ar = theory->sig.relations[r].arity;
    std::vector<int> t(ar, 0), ids(ar);
    if (out.width == 0) continue;
    while (true) {
      for (int x = 0; x < ar; ++x) ids[x] = order[ranks[t[x]]];
      out.set(static_cast<int>(r), t, type.get(static_cast<int>(r), ids));
      int x = ar - 1;
      while (x >= 0 && ++t[x] == out.width) t[x--] = 0;
      if (x < 0) break;
    }
  }
  return out;
}

void ConstructionTrace::interiorize(const Rational& p) {
  while (true) {
    IntervalLocation loc = locate(p);
    if (loc.interior()) return;
    ++stage;
    if (loc.kind == IntervalLocation::OutsideLeft) {
      Rational q(rat_floor(p));
      if (q == p) q = p - 1;
      refine(q);
    } else {
      Rational q(rat_ceil(p));
      if (q == p) q = p + 1;
      refine(q);
    }
  }
}

void ConstructionTrace::separate(const Rational& a, const Rational& b) {
  if (a == b) return;
  while (true) {
    IntervalLocation la = locate(a), lb = locate(b);
    if (!(la.interior() && lb.interior() && la.rank == lb.rank)) return;
    const Rational& r = value[order[la.rank]];
    const Rational& lo = std::min(a, b);
    const Rational& hi = std::max(a, b);
    Rational q;
    if (lo < r && r < hi)
      q = simplest_in_open(lo, r);
    else if (lo == r)
      q = simplest_in_open(r, hi);
    else if (hi == r)
      q = simplest_in_open(lo, r);
    else
      q = simplest_in_open(lo, hi);
    ++stage;
    refine(q);
  }
}

void ConstructionTrace::extend_for_points(std::span<const Rational> points) {
  size_t cycle_after = points.size() >= 2 ? 1 : 0;
  type.reserve_positions(type.width + static_cast<int>(points.size()) * 2 + 8);
  for (size_t i = 0; i < points.size(); ++i) {
    interiorize(points[i]);
    for (size_t j = 0; j < i; ++j) separate(points[i], points[j]);
    if (i == cycle_after && !theory->genuine.empty()) {
      // one scoped round-robin cycle: cover the placed labels' positions
      std::vector<int> scope;
      for (size_t j = 0; j <= i; ++j) {
        IntervalLocation loc = locate(points[j]);
        if (loc.interior()) scope.push_back(order[loc.rank]);
      }
      for (size_t c = 0; c < theory->genuine.size(); ++c) {
        ++stage;
        enlarge(static_cast<int>(axiom_cursor % theory->genuine.size()), scope);
        ++axiom_cursor;
      }
    }
  }
}

void ConstructionTrace::check_invariants() const {
  if (bounds.size() != order.size() + 1)
    throw ForgeError("invariant", "boundary count mismatch");
  for (size_t j = 0; j < order.size(); ++j) {
    const Rational& r = value[order[j]];
    if (!(bounds[j] < r && r <= bounds[j + 1]))
      throw ForgeError("invariant", "separation violated at rank " + std::to_string(j));
    if (j + 1 < order.size() && !(value[order[j]] < value[order[j + 1]]))
      throw ForgeError("invariant", "rank order violated");
  }
  for (const Quad& b : bounds)
    if (!b.irrational()) throw ForgeError("invariant", "rational boundary");
  for (size_t j = 0; j + 1 < bounds.size(); ++j)
    if (!(bounds[j] < bounds[j + 1])) throw ForgeError("invariant", "boundary order");
  // the type of the rationals must satisfy every universal constraint
  std::vector<Rational> pts;
  for (int id : order) pts.push_back(value[id]);
  QfType p = type_of_tuple(pts);
  if (!p.complete() || !p.non_redundant())
    throw ForgeError("invariant", "trace type incomplete or redundant");
  AgeOracle oracle(theory);
  if (!oracle.consistent(p)) throw ForgeError("invariant", "trace type inconsistent");
}

}  // namespace forge
