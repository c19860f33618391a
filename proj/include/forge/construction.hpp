#pragma once

#include "forge/completion.hpp"
#include "forge/quadratic.hpp"
#include "forge/theory.hpp"

namespace forge {

/// Dense grow-only atom table for one relation, indexed by position ids.
/// Capacity doubles so insertion never re-indexes more than amortized O(1)
/// times; cells start undecided.
struct RelTable {
  int arity = 0;
  int width = 0;
  int cap = 0;
  std::vector<std::uint8_t> cells;

  void init(int arity_, int cap_) {
    arity = arity_;
    cap = cap_;
    cells.assign(cap_pow(cap_, arity_), static_cast<std::uint8_t>(Tri::Unknown));
  }
  static size_t cap_pow(int c, int a) {
    size_t n = 1;
    for (int i = 0; i < a; ++i) n *= static_cast<size_t>(c);
    return n;
  }
  size_t idx(std::span<const int> args) const {
    size_t v = 0;
    for (int a : args) v = v * static_cast<size_t>(cap) + static_cast<size_t>(a);
    return v;
  }
  Tri get(std::span<const int> args) const { return static_cast<Tri>(cells[idx(args)]); }
  void set(std::span<const int> args, Tri v) {
    cells[idx(args)] = static_cast<std::uint8_t>(v);
  }
  void ensure(int new_width);
  void reserve_positions(int n);
};

/// Type-like view over the trace's positions (ids 0..width-1); all positions
/// denote distinct reals, so the equality partition is discrete.
struct TraceType {
  Signature sig;
  std::vector<RelTable> rels;
  int width = 0;

  void init(const Signature& s, int cap0 = 8);
  Tri get(int rel, std::span<const int> args) const { return rels[rel].get(args); }
  void set(int rel, std::span<const int> args, Tri v) { rels[rel].set(args, v); }
  bool same_class(int i, int j) const { return i == j; }
  int add_position();
  void drop_last_position() { --width; for (auto& r : rels) --r.width; }
  void reserve_positions(int n) {
    for (auto& r : rels) r.reserve_positions(n);
  }
};

struct IntervalLocation {
  enum Kind { Interior, OutsideLeft, OutsideRight } kind = Interior;
  int rank = -1;  // interior interval index
  bool interior() const { return kind == Interior; }
};

struct WitnessRecord {
  long stage;
  std::string axiom_source;
  std::vector<int> tuple_ids;
  int witness_id;
};

struct DuplicationFailure : ForgeError {
  long stage;
  std::string rational;
  int rank;
  DuplicationFailure(long stage_, std::string rational_, int rank_)
      : ForgeError("duplication_failure",
                   "duplication failure while refining at " + rational_ +
                       " (interval " + std::to_string(rank_) +
                       "): the theory has nontrivial definable closure"),
        stage(stage_),
        rational(std::move(rational_)),
        rank(rank_) {}
};

/// Finite-stage state of the interval construction: the increasing rational
/// tuple (by ranks), the irrational boundaries separating it, the complete
/// non-redundant type of the rationals, and the schedule cursors.
class ConstructionTrace {
 public:
  TheoryRef theory;
  TraceType type;               // atoms over position ids
  std::vector<Rational> value;  // id -> rational
  std::vector<int> order;       // rank -> id, increasing by value
  std::vector<Quad> bounds;     // |order|+1 irrational boundaries
  long stage = 0;
  std::uint64_t rational_cursor = 0;
  Rational cw_state = 1;  // current Calkin-Wilf term
  size_t axiom_cursor = 0;
  std::vector<WitnessRecord> witness_log;

  static ConstructionTrace init(TheoryRef theory);
  static ConstructionTrace run(TheoryRef theory, long stages);

  int width() const { return type.width; }
  int rank_of(int id) const;

  /// One scheduled stage: refinement with the fixed rational enumeration on
  /// odd stages, enlargement round-robin over genuine axioms on even ones.
  void step();

  /// Refinement at an arbitrary rational (the three documented cases).
  void refine(const Rational& q);

  /// Enlargement for one genuine axiom (index into theory->genuine).
  /// When scope_ids is nonempty, only witness tuples drawn from those
  /// positions are covered (the auto-extension path); the scheduled stages
  /// cover every tuple of current positions.
  void enlarge(int genuine_index, std::span<const int> scope_ids = {});

  IntervalLocation locate(const Rational& point) const;

  QfType type_of_tuple(std::span<const Rational> points) const;

  /// Advances refinement until every point is interior and any two distinct
  /// points occupy distinct intervals. Labels are processed in order, and a
  /// full round-robin cycle of enlargements runs once the first two labels
  /// are placed, so the measured tuples gain witness intervals while the
  /// trace is still small. Deterministic in (trace, points).
  void extend_for_points(std::span<const Rational> points);

  Rational next_rational();

  /// Test hook: checks the separation invariant and boundary irrationality.
  void check_invariants() const;

 private:
  int new_position_canonical(std::span<const std::pair<AtomSlot, Tri>> forced,
                             int pending_rank);
  std::vector<int> rank_keys(int pending_id, int pending_rank) const;
  void order_slots(std::vector<AtomSlot>& slots, int pending_id, int pending_rank) const;
  void insert_rank(int id, const Rational& q, int rank, Quad boundary, int bound_at);
  void interiorize(const Rational& p);
  void separate(const Rational& a, const Rational& b);
};

}  // namespace forge
