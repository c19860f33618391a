#include <doctest.h>

#include "forge/construction.hpp"

#include <sstream>

using namespace forge;

namespace {

std::string fingerprint(const ConstructionTrace& tr) {
  std::ostringstream os;
  os << tr.stage << ";" << tr.rational_cursor << ";" << tr.axiom_cursor << ";";
  for (int id : tr.order) os << rational_str(tr.value[id]) << ",";
  os << ";";
  for (const auto& b : tr.bounds)
    os << rational_str(b.a) << "+" << rational_str(b.b) << "r,";
  os << ";";
  std::vector<Rational> pts;
  for (int id : tr.order) pts.push_back(tr.value[id]);
  os << tr.type_of_tuple(pts).key();
  return os.str();
}

std::vector<Rational> rationals_of(const ConstructionTrace& tr) {
  std::vector<Rational> pts;
  for (int id : tr.order) pts.push_back(tr.value[id]);
  return pts;
}

}  // namespace

TEST_CASE("init builds the documented stage-0 state") {
  auto henson = ConstructionTrace::init(compile(catalog("henson3")));
  CHECK(henson.width() == 1);
  CHECK(henson.value[henson.order[0]] == Rational(0));
  CHECK(henson.bounds.size() == 2);
  CHECK(henson.bounds[0] == Quad{Rational(0), Rational(-1)});
  CHECK(henson.bounds[1] == Quad{Rational(0), Rational(1)});
  // the canonical one-element configuration is loop-free
  std::vector<int> d{0, 0};
  CHECK(henson.type.get(0, d) == Tri::False);

  auto dlo = ConstructionTrace::init(compile(catalog("dlo")));
  CHECK(dlo.type.get(0, d) == Tri::False);
}

TEST_CASE("an unsatisfiable universal makes init fail") {
  TheorySpec bad = parse_theory("rel E/2\nforall x : E(x,x) & !E(x,x)");
  CHECK_THROWS_WITH_AS((void)ConstructionTrace::init(compile(bad)),
                       doctest::Contains("inconsistent"), ForgeError);
}

TEST_CASE("refinement case analysis at stage 0") {
  TheoryRef th = compile(catalog("henson3"));

  // case 1: the rational is already a position
  auto t1 = ConstructionTrace::init(th);
  t1.refine(Rational(0));
  CHECK(t1.width() == 1);

  // case 2: beyond the covered range (sqrt(2) < 2), appended to the right
  auto t2 = ConstructionTrace::init(th);
  t2.refine(Rational(2));
  CHECK(t2.width() == 2);
  CHECK(rationals_of(t2) == std::vector<Rational>{Rational(0), Rational(2)});
  t2.check_invariants();

  // case 2 to the left
  auto t2l = ConstructionTrace::init(th);
  t2l.refine(Rational(-2));
  CHECK(rationals_of(t2l) == std::vector<Rational>{Rational(-2), Rational(0)});
  t2l.check_invariants();

  // case 3: 1 lies inside (-sqrt(2), sqrt(2)], so the position at 0 is
  // duplicated and the free cross choice leaves the copies non-adjacent
  auto t3 = ConstructionTrace::init(th);
  t3.refine(Rational(1));
  CHECK(t3.width() == 2);
  std::vector<int> cross{t3.order[0], t3.order[1]};
  CHECK(t3.type.get(0, cross) == Tri::False);
  t3.check_invariants();
}

TEST_CASE("interior refinement duplicates: both projections extend the parent") {
  TheoryRef th = compile(catalog("rado"));
  auto tr = ConstructionTrace::run(th, 8);
  QfType before = tr.type_of_tuple(rationals_of(tr));
  int w = tr.width();
  // refine strictly inside the interval of the first position
  Rational target = tr.value[tr.order[0]] - Rational(1, 7);
  if (!(tr.bounds[0] < target)) target = tr.value[tr.order[0]];  // stay interior
  if (target == tr.value[tr.order[0]]) target = target - Rational(1, 1000000);
  REQUIRE(tr.locate(target).interior());
  tr.refine(target);
  REQUIRE(tr.width() == w + 1);
  QfType after = tr.type_of_tuple(rationals_of(tr));
  // dropping either copy projects onto the pre-refinement type
  int new_rank = tr.locate(target).rank;
  std::vector<int> keep_new, keep_old;
  for (int i = 0; i <= w; ++i) {
    if (i != new_rank) keep_old.push_back(i);
    if (i != new_rank + 1) keep_new.push_back(i);
  }
  CHECK(after.restrict_to(keep_old).key() == before.key());
  CHECK(after.restrict_to(keep_new).key() == before.key());
}

TEST_CASE("duplication failure raises the documented error") {
  TheoryRef th = compile(catalog("equiv_classes_of(2)"));
  CHECK_THROWS_AS((void)ConstructionTrace::run(th, 200), DuplicationFailure);
  try {
    (void)ConstructionTrace::run(th, 200);
  } catch (const DuplicationFailure& e) {
    CHECK(e.code == "duplication_failure");
    CHECK(e.stage <= 200);
  }
}

TEST_CASE("blowup theories also trip the engine within 200 stages") {
  CHECK_THROWS_AS((void)ConstructionTrace::run(compile(catalog("blowup(rado,2)")), 200),
                  DuplicationFailure);
  CHECK_THROWS_AS((void)ConstructionTrace::run(compile(catalog("equiv_classes_of(3)")), 200),
                  DuplicationFailure);
}

TEST_CASE("enlargement: dlo gains an upper witness, rado a neighbor") {
  TheoryRef dlo = compile(catalog("dlo"));
  auto tr = ConstructionTrace::init(dlo);
  // find the genuine axiom asserting an element above (lt(x0, y))
  int above = -1;
  for (size_t g = 0; g < dlo->genuine.size(); ++g) {
    const auto& ax = dlo->axioms[dlo->genuine[g]];
    if (ax.premise_width != 1) continue;
    std::vector<int> asg{0, 1};
    QfType two(dlo->sig, 2);
    two.set(0, std::vector<int>{0, 1}, Tri::True);
    two.set(0, std::vector<int>{1, 0}, Tri::False);
    two.set(0, std::vector<int>{0, 0}, Tri::False);
    two.set(0, std::vector<int>{1, 1}, Tri::False);
    if (ax.matrix.eval_on(two, asg) == Tri::True) { above = static_cast<int>(g); break; }
  }
  REQUIRE(above >= 0);
  tr.enlarge(above);
  REQUIRE(tr.width() == 2);
  // the witness integer clears both the old rationals and the last boundary
  CHECK(tr.value[tr.order[1]] == Rational(2));
  std::vector<int> pair{tr.order[0], tr.order[1]};
  CHECK(tr.type.get(0, pair) == Tri::True);  // 0 < witness
  CHECK(tr.witness_log.size() == 1);
  tr.check_invariants();

  // a second pass covers the new position too (the old tuple is internally
  // witnessed now, the witness itself gains its own upper neighbor)
  tr.enlarge(above);
  CHECK(tr.width() == 3);

  TheoryRef rado = compile(catalog("rado"));
  auto rr = ConstructionTrace::init(rado);
  int nbr = -1;
  for (size_t g = 0; g < rado->genuine.size(); ++g) {
    const auto& ax = rado->axioms[rado->genuine[g]];
    if (ax.premise_width != 1) continue;
    QfType two(rado->sig, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        two.set(0, std::vector<int>{i, j}, i != j ? Tri::True : Tri::False);
    std::vector<int> asg{0, 1};
    if (ax.matrix.eval_on(two, asg) == Tri::True) { nbr = static_cast<int>(g); break; }
  }
  REQUIRE(nbr >= 0);
  rr.enlarge(nbr);
  REQUIRE(rr.width() == 2);
  std::vector<int> pr{rr.order[0], rr.order[1]};
  CHECK(rr.type.get(0, pr) == Tri::True);
  rr.check_invariants();
}

TEST_CASE("enlargement coverage: every pre-stage tuple ends up witnessed") {
  TheoryRef th = compile(catalog("rado"));
  auto tr = ConstructionTrace::run(th, 9);
  for (size_t g = 0; g < th->genuine.size(); ++g) {
    auto snapshot = tr;
    int pre = snapshot.width();
    snapshot.enlarge(static_cast<int>(g));
    const auto& ax = th->axioms[th->genuine[g]];
    int k = ax.premise_width;
    std::vector<int> zr(k, 0);
    while (true) {
      std::vector<int> asg(k + 1);
      for (int i = 0; i < k; ++i) asg[i] = snapshot.order[zr[i]];
      bool witnessed = false;
      for (int t = 0; t < snapshot.width() && !witnessed; ++t) {
        asg[k] = t;
        witnessed = ax.matrix.eval_on(snapshot.type, asg) == Tri::True;
      }
      CHECK(witnessed);
      int i = k - 1;
      while (i >= 0 && ++zr[i] == pre) zr[i--] = 0;
      if (i < 0 || k == 0) break;
    }
  }
}

TEST_CASE("locate answers the documented queries") {
  auto tr = ConstructionTrace::init(compile(catalog("rado")));
  CHECK(tr.locate(Rational(0)).interior());
  CHECK(tr.locate(Rational(0)).rank == 0);
  CHECK(tr.locate(Rational(10)).kind == IntervalLocation::OutsideRight);
  CHECK(tr.locate(Rational(-10)).kind == IntervalLocation::OutsideLeft);
  auto deep = ConstructionTrace::run(compile(catalog("rado")), 12);
  for (size_t j = 0; j < deep.order.size(); ++j) {
    auto loc = deep.locate(deep.value[deep.order[j]]);
    REQUIRE(loc.interior());
    CHECK(loc.rank == static_cast<int>(j));
  }
}

TEST_CASE("type_of_tuple restriction, permutation and error paths") {
  auto tr = ConstructionTrace::run(compile(catalog("dlo")), 10);
  auto pts = rationals_of(tr);
  REQUIRE(pts.size() >= 2);
  QfType full = tr.type_of_tuple(pts);

  std::vector<Rational> first{pts[0]};
  QfType one = tr.type_of_tuple(first);
  CHECK(one.key() == full.restrict_to(std::vector<int>{0}).key());

  std::vector<Rational> swapped{pts[1], pts[0]};
  QfType two = tr.type_of_tuple(swapped);
  CHECK(two.key() == full.restrict_to(std::vector<int>{1, 0}).key());

  // repeated points induce the equality partition
  std::vector<Rational> rep{pts[0], pts[0]};
  QfType r = tr.type_of_tuple(rep);
  CHECK(r.same_class(0, 1));

  // two distinct points in one interval: not yet separated
  Rational inside = pts[0] + Rational(1, 1000000000);
  std::vector<Rational> collide{pts[0], inside};
  CHECK_THROWS_WITH_AS((void)tr.type_of_tuple(collide),
                       doctest::Contains("share an interval"), ForgeError);
}

TEST_CASE("separation and consistency invariants hold along a run") {
  for (const char* name : {"rado", "henson3", "dlo", "universal_poset",
                           "universal_tournament", "equiv_inf_classes",
                           "q_min_semigroup"}) {
    TheoryRef th = compile(catalog(name));
    auto tr = ConstructionTrace::init(th);
    QfType prev = tr.type_of_tuple(rationals_of(tr));
    std::vector<Rational> prev_pts = rationals_of(tr);
    for (int s = 0; s < 14; ++s) {
      tr.step();
      tr.check_invariants();
      // the key inductive property: the new type restricted to the previous
      // rationals is the previous type
      QfType now_on_prev = tr.type_of_tuple(prev_pts);
      CHECK(now_on_prev.key() == prev.key());
      prev_pts = rationals_of(tr);
      prev = tr.type_of_tuple(prev_pts);
    }
  }
}

TEST_CASE("runs are deterministic") {
  TheoryRef th = compile(catalog("henson3"));
  auto a = ConstructionTrace::run(th, 16);
  auto b = ConstructionTrace::run(compile(catalog("henson3")), 16);
  CHECK(fingerprint(a) == fingerprint(b));
}

TEST_CASE("run(theory, 0) is the initial trace") {
  auto tr = ConstructionTrace::run(compile(catalog("dlo")), 0);
  CHECK(tr.width() == 1);
  CHECK(tr.stage == 0);
}

TEST_CASE("extension for points separates and stays consistent") {
  TheoryRef th = compile(catalog("rado"));
  auto base = ConstructionTrace::run(th, 10);
  std::vector<Rational> pts = {Rational(1, 3), Rational(2, 5), Rational(-7, 2),
                               Rational(40), Rational(1, 3) + Rational(1, 1 << 20)};
  auto tr = base;
  tr.extend_for_points(pts);
  tr.check_invariants();
  QfType t = tr.type_of_tuple(pts);
  CHECK(t.width == 5);
  CHECK(t.non_redundant());
  // deterministic extension
  auto tr2 = base;
  tr2.extend_for_points(pts);
  CHECK(fingerprint(tr) == fingerprint(tr2));
}
