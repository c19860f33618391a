#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "forge/logic.hpp"
#include "forge/quadratic.hpp"
#include "forge/rational.hpp"
#include "forge/rng.hpp"

#include <algorithm>
#include <numeric>

using namespace forge;

namespace {

Signature graph_sig() { return Signature{{{"E", 2}}, {}}; }

FiniteStructure path3() {
  FiniteStructure s(graph_sig(), 3);
  for (auto [a, b] : {std::pair{0, 1}, {1, 0}, {1, 2}, {2, 1}}) s.tuples[0].insert({a, b});
  return s;
}

FiniteStructure triangle() {
  FiniteStructure s(graph_sig(), 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) s.tuples[0].insert({i, j});
  return s;
}

FiniteStructure cycle4() {
  FiniteStructure s(graph_sig(), 4);
  for (int i = 0; i < 4; ++i) {
    s.tuples[0].insert({i, (i + 1) % 4});
    s.tuples[0].insert({(i + 1) % 4, i});
  }
  return s;
}

QfFormula formula_E(int x, int y, int width) {
  QfFormula f;
  f.width = width;
  Literal lit;
  lit.rel = 0;
  lit.vars = {x, y};
  f.disjuncts.push_back({lit});
  return f;
}

FiniteStructure random_graph(Rng& rng, int n, double p) {
  FiniteStructure s(graph_sig(), n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) {
        s.tuples[0].insert({i, j});
        s.tuples[0].insert({j, i});
      }
  return s;
}

}  // namespace

TEST_CASE("simplest rational in open interval") {
  CHECK(simplest_in_open(Rational(1, 3), Rational(1, 2)) == Rational(2, 5));
  CHECK(simplest_in_open(Rational(-1), Rational(1)) == Rational(0));
  CHECK(simplest_in_open(Rational(5, 2), Rational(7, 2)) == Rational(3));
  CHECK(simplest_in_open(Rational(-7, 2), Rational(-5, 2)) == Rational(-3));
  // brute-force minimal denominator property over a grid of intervals
  Rng rng(7);
  for (int iter = 0; iter < 300; ++iter) {
    long a = static_cast<long>(rng.below(2001)) - 1000;
    long d1 = 1 + static_cast<long>(rng.below(40));
    long d2 = 1 + static_cast<long>(rng.below(40));
    Rational lo(a, d1);
    Rational hi = lo + Rational(1 + static_cast<long>(rng.below(30)), d2);
    Rational q = simplest_in_open(lo, hi);
    REQUIRE(lo < q);
    REQUIRE(q < hi);
    BigInt qd = denominator(q);
    for (BigInt d = 1; d < qd; ++d) {
      // any fraction with denominator d inside (lo,hi)? floor(hi*d) gives the
      // largest candidate numerator; it must not be > lo*d (strictly inside)
      BigInt top = rat_floor(hi * Rational(d));
      Rational cand(top, d);
      if (cand == hi) cand = Rational(top - 1, d);
      CHECK(!(lo < cand && cand < hi));
    }
  }
}

TEST_CASE("quadratic field comparisons are exact") {
  Quad root2{Rational(0), Rational(1)};
  CHECK(root2.compare(Rational(141421356, 100000000)) > 0);
  CHECK(root2.compare(Rational(141421357, 100000000)) < 0);
  CHECK(Quad{Rational(1), Rational(1)}.compare(Quad{Rational(2), Rational(0)}) > 0);
  // sign agrees with double arithmetic away from ties
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    Rational a(static_cast<long>(rng.below(401)) - 200, 1 + static_cast<long>(rng.below(20)));
    Rational b(static_cast<long>(rng.below(401)) - 200, 1 + static_cast<long>(rng.below(20)));
    Quad q{a, b};
    double approx = q.approx();
    if (std::abs(approx) > 1e-6) CHECK((q.sgn() > 0) == (approx > 0));
  }
}

TEST_CASE("irrational_between lands strictly inside and is irrational") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    Rational lo(static_cast<long>(rng.below(2001)) - 1000, 1 + static_cast<long>(rng.below(50)));
    Rational hi = lo + Rational(1, 1 + static_cast<long>(rng.below(100)));
    Quad v = irrational_between(lo, hi);
    CHECK(v.irrational());
    CHECK(v.compare(lo) > 0);
    CHECK(v.compare(hi) < 0);
  }
}

TEST_CASE("rng determinism and stream independence") {
  Rng a(42), b(42);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
  Rng c = Rng(42).child("alpha"), d = Rng(42).child("beta");
  CHECK(c.next() != d.next());
  Rng e(9);
  for (int i = 0; i < 1000; ++i) CHECK(e.below(7) < 7);
}

TEST_CASE("eval_qf on the documented examples") {
  FiniteStructure p = path3();
  QfFormula f = formula_E(0, 1, 2);
  f.var_names = {"x", "y"};
  CHECK(eval_qf(f, p, {{"x", 0}, {"y", 1}}));

  QfFormula eq;
  eq.width = 2;
  eq.var_names = {"x", "y"};
  Literal l;
  l.rel = -1;
  l.vars = {0, 1};
  eq.disjuncts.push_back({l});
  FiniteStructure any(graph_sig(), 5);
  CHECK(eval_qf(eq, any, {{"x", 3}, {"y", 3}}));

  // E(x,y) and not E(y,z) under {x->0, y->1, z->0}: both literals checked
  // directly, E(0,1) holds and E(1,0) holds, so the conjunction fails
  QfFormula g;
  g.width = 3;
  g.var_names = {"x", "y", "z"};
  Literal a;
  a.rel = 0;
  a.vars = {0, 1};
  Literal b;
  b.rel = 0;
  b.vars = {1, 2};
  b.positive = false;
  g.disjuncts.push_back({a, b});
  CHECK(!eval_qf(g, p, {{"x", 0}, {"y", 1}, {"z", 0}}));

  CHECK_THROWS_WITH_AS(eval_qf(f, p, {{"x", 0}}), doctest::Contains("unbound"), ForgeError);
}

TEST_CASE("diagram_of reads off the atomic diagram") {
  FiniteStructure p = path3();
  QfType t = diagram_of(p, std::vector<int>{0, 1});
  CHECK(t.get(0, std::vector<int>{0, 1}) == Tri::True);
  CHECK(t.get(0, std::vector<int>{1, 0}) == Tri::True);
  CHECK(t.get(0, std::vector<int>{0, 0}) == Tri::False);
  CHECK(t.non_redundant());
  CHECK(t.complete());

  QfType rep = diagram_of(FiniteStructure(graph_sig(), 5), std::vector<int>{3, 3});
  CHECK(rep.same_class(0, 1));
  CHECK(!rep.non_redundant());

  QfType k3 = diagram_of(triangle(), std::vector<int>{0, 1, 2});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(k3.get(0, std::vector<int>{i, j}) == (i == j ? Tri::False : Tri::True));

  CHECK_THROWS_AS(diagram_of(p, std::vector<int>{0, 9}), ForgeError);
}

TEST_CASE("induced_substructure examples") {
  CHECK(induced_substructure(triangle(), std::vector<int>{0, 2}).tuples[0].size() == 2);
  CHECK(induced_substructure(path3(), std::vector<int>{0, 2}).tuples[0].empty());
  // cycle 0-1-2-3 restricted to {0,1,2}: edges of the cycle among those
  // labels enumerated directly are (0,1) and (1,2) — a path
  FiniteStructure sub = induced_substructure(cycle4(), std::vector<int>{0, 1, 2});
  CHECK(sub.key() == path3().key());
  CHECK_THROWS_AS(induced_substructure(triangle(), std::vector<int>{0, 0}), ForgeError);
}

TEST_CASE("type_extends on sub-diagrams") {
  FiniteStructure k2(graph_sig(), 2);
  k2.tuples[0].insert({0, 1});
  k2.tuples[0].insert({1, 0});
  QfType pair = diagram_of(k2, std::vector<int>{0, 1});
  QfType one = diagram_of(k2, std::vector<int>{0});
  CHECK(type_extends(pair, one, std::vector<int>{0}));

  QfType non_edge = diagram_of(FiniteStructure(graph_sig(), 2), std::vector<int>{0, 1});
  CHECK(!type_extends(non_edge, pair, std::vector<int>{0, 1}));
}

TEST_CASE("diagram/eval and restriction invariants") {
  Rng rng(5);
  for (int iter = 0; iter < 60; ++iter) {
    int n = 2 + static_cast<int>(rng.below(4));
    FiniteStructure s = random_graph(rng, n, 0.4);
    int len = 1 + static_cast<int>(rng.below(3));
    std::vector<int> tuple(len);
    for (int& x : tuple) x = static_cast<int>(rng.below(n));
    QfType d = diagram_of(s, tuple);
    // evaluating the diagram as a conjunction on the same tuple holds
    QfFormula conj;
    conj.width = len;
    std::vector<Literal> lits;
    for (int i = 0; i < len; ++i)
      for (int j = 0; j < len; ++j) {
        Literal lit;
        lit.rel = 0;
        lit.vars = {i, j};
        lit.positive = d.get(0, std::vector<int>{i, j}) == Tri::True;
        lits.push_back(lit);
      }
    conj.disjuncts.push_back(lits);
    CHECK(conj.eval(s, tuple));
    // subtuple restriction extends
    if (len >= 2) {
      std::vector<int> sub = {tuple[0]};
      CHECK(type_extends(d, diagram_of(s, sub), std::vector<int>{0}));
    }
  }
}

TEST_CASE("diagrams are permutation-equivariant (brute force, n <= 5)") {
  Rng rng(17);
  for (int n = 2; n <= 5; ++n) {
    FiniteStructure s = random_graph(rng, n, 0.5);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> tuple = {0, n - 1, 1 % n};
    do {
      FiniteStructure t = s.relabeled(perm);
      std::vector<int> mapped(tuple.size());
      for (size_t i = 0; i < tuple.size(); ++i) mapped[i] = perm[tuple[i]];
      CHECK(diagram_of(t, mapped).key() == diagram_of(s, tuple).key());
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}
