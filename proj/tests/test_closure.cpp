#include <doctest.h>

#include "forge/closure.hpp"
#include "forge/enumerate.hpp"
#include "forge/rng.hpp"

#include <algorithm>
#include <numeric>

using namespace forge;

namespace {

Signature graph_sig() { return Signature{{{"E", 2}}, {}}; }

FiniteStructure graph_of(int n, std::initializer_list<std::pair<int, int>> edges) {
  FiniteStructure s(graph_sig(), n);
  for (auto [a, b] : edges) {
    s.tuples[0].insert({a, b});
    s.tuples[0].insert({b, a});
  }
  return s;
}

/// Independent oracle: checks all n! permutations directly.
std::vector<std::vector<int>> brute_autos(const FiniteStructure& s) {
  std::vector<int> perm(s.size);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    bool ok = true;
    for (size_t r = 0; r < s.tuples.size() && ok; ++r)
      for (const auto& t : s.tuples[r]) {
        std::vector<int> u(t.size());
        for (size_t k = 0; k < t.size(); ++k) u[k] = perm[t[k]];
        if (!s.tuples[r].count(u)) { ok = false; break; }
      }
    if (ok) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::set<int> brute_dcl(const FiniteStructure& s, std::vector<int> tuple) {
  auto autos = brute_autos(s);
  std::set<int> out;
  for (int b = 0; b < s.size; ++b) {
    bool fixed = true;
    for (const auto& p : autos) {
      bool stab = true;
      for (int x : tuple)
        if (p[x] != x) { stab = false; break; }
      if (stab && p[b] != b) { fixed = false; break; }
    }
    if (fixed) out.insert(b);
  }
  return out;
}

TheoryRef degree_at_most_one() {
  TheorySpec t;
  t.name = "matchings";
  t.sig.relations = {{"E", 2}};
  t = parse_theory(
      "theory matchings\n"
      "rel E/2\n"
      "forall x : !E(x,x)\n"
      "forall x y : E(x,y) -> E(y,x)\n"
      "forall x y z : (E(x,y) & E(x,z)) -> y = z\n");
  return compile(t);
}

}  // namespace

TEST_CASE("automorphisms of the documented structures") {
  auto path = graph_of(3, {{0, 1}, {1, 2}});
  AutomorphismSet ap = automorphisms(path);
  REQUIRE(ap.perms.size() == 2);  // identity and the flip (0 2)
  CHECK(ap.perms[0] == std::vector<int>{0, 1, 2});
  CHECK(ap.perms[1] == std::vector<int>{2, 1, 0});

  CHECK(automorphisms(FiniteStructure(graph_sig(), 3)).perms.size() == 6);
  CHECK(automorphisms(graph_of(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})).perms.size() == 8);

  FiniteStructure big(graph_sig(), 11);
  CHECK_THROWS_AS(automorphisms(big), ForgeError);
}

TEST_CASE("automorphism search matches the brute-force oracle") {
  Rng rng(31);
  for (int iter = 0; iter < 40; ++iter) {
    int n = 1 + static_cast<int>(rng.below(6));
    FiniteStructure s(graph_sig(), n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.bernoulli(0.5)) {
          s.tuples[0].insert({i, j});
          s.tuples[0].insert({j, i});
        }
    CHECK(automorphisms(s).perms == brute_autos(s));
  }
}

TEST_CASE("dcl of the documented structures") {
  auto path = graph_of(3, {{0, 1}, {1, 2}});
  CHECK(dcl(path, std::vector<int>{}) == std::set<int>{1});

  auto c4 = graph_of(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  CHECK(dcl(c4, std::vector<int>{0}) == std::set<int>{0, 2});

  FiniteStructure edgeless(graph_sig(), 3);
  CHECK(dcl(edgeless, std::vector<int>{0}) == std::set<int>{0});
}

TEST_CASE("acl orbit sizes and thresholds") {
  auto c4 = graph_of(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  CHECK(acl_below(c4, std::vector<int>{0}, 1) == dcl(c4, std::vector<int>{0}));
  CHECK(acl_below(c4, std::vector<int>{0}, 4) == std::set<int>{0, 1, 2, 3});

  auto two_edges = graph_of(4, {{0, 1}, {2, 3}});
  CHECK(acl_below(two_edges, std::vector<int>{0}, 1) == std::set<int>{0, 1});
}

TEST_CASE("dcl/acl invariants: containment and idempotence") {
  Rng rng(5);
  for (int iter = 0; iter < 25; ++iter) {
    int n = 2 + static_cast<int>(rng.below(4));
    FiniteStructure s(graph_sig(), n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.bernoulli(0.4)) {
          s.tuples[0].insert({i, j});
          s.tuples[0].insert({j, i});
        }
    std::vector<int> tuple = {static_cast<int>(rng.below(n))};
    auto d = dcl(s, tuple);
    CHECK(d.count(tuple[0]) == 1);
    for (int t = 1; t <= n; ++t) {
      auto a = acl_below(s, tuple, t);
      for (int x : d) CHECK(a.count(x) == 1);
    }
    CHECK(d == brute_dcl(s, tuple));
    std::vector<int> dvec(d.begin(), d.end());
    CHECK(dcl(s, dvec) == d);
  }
}

TEST_CASE("strong amalgam: the three worked triples") {
  AgeOracle henson(compile(catalog("henson3")));
  FiniteStructure point(graph_sig(), 1);
  auto edge = graph_of(2, {{0, 1}});

  // B and C are edges sharing their first endpoint
  auto res = strong_amalgam(point, edge, edge, std::vector<int>{0}, std::vector<int>{0},
                            henson);
  REQUIRE(res.has_value());
  CHECK(res->glued.size == 3);
  // free amalgam: the two outer points are non-adjacent
  CHECK(!res->glued.holds(0, std::vector<int>{res->emb_b[1], res->emb_c[1]}));

  AgeOracle matchings(degree_at_most_one());
  CHECK(!strong_amalgam(point, edge, edge, std::vector<int>{0}, std::vector<int>{0},
                        matchings)
             .has_value());

  // linear orders: B has a < b, C has c < a; amalgam must order c < a < b
  AgeOracle orders(compile(catalog("dlo")));
  Signature osig{{{"lt", 2}}, {}};
  FiniteStructure opoint(osig, 1);
  FiniteStructure ab(osig, 2);
  ab.tuples[0].insert({0, 1});  // a=0 < b=1
  FiniteStructure ca(osig, 2);
  ca.tuples[0].insert({0, 1});  // c=0 < a=1
  auto lin = strong_amalgam(opoint, ab, ca, std::vector<int>{0}, std::vector<int>{1},
                            orders);
  REQUIRE(lin.has_value());
  int a = 0, b = lin->emb_b[1], c = lin->emb_c[0];
  CHECK(lin->glued.holds(0, std::vector<int>{c, a}));
  CHECK(lin->glued.holds(0, std::vector<int>{a, b}));
  CHECK(lin->glued.holds(0, std::vector<int>{c, b}));
}

TEST_CASE("check_strong_amalgamation over small bounds") {
  CHECK(check_strong_amalgamation(AgeOracle(compile(catalog("henson3"))), 3).all_pass);
  CHECK(check_strong_amalgamation(AgeOracle(compile(catalog("dlo"))), 4).all_pass);
  auto rep = check_strong_amalgamation(AgeOracle(degree_at_most_one()), 3);
  CHECK(!rep.all_pass);
  REQUIRE(!rep.failures.empty());
}

TEST_CASE("check_duplication: documented passes and failures") {
  CHECK(check_duplication(compile(catalog("henson3")), 3).pass);
  CHECK(check_duplication(compile(catalog("dlo")), 3).pass);

  auto rep = check_duplication(compile(catalog("equiv_classes_of(2)")), 3);
  CHECK(!rep.pass);
  REQUIRE(rep.counterexample.has_value());
  // the counterexample is the pair type x eqv z, x != z
  const QfType& p = *rep.counterexample;
  CHECK(p.width == 2);
  CHECK(p.get(0, std::vector<int>{0, 1}) == Tri::True);
}

TEST_CASE("duplication witnesses extend both copies of the base type") {
  auto rep = check_duplication(compile(catalog("henson3")), 3);
  REQUIRE(rep.witness.has_value());
  const QfType& q = *rep.witness;
  int w = q.width - 1;
  // q was built duplicating position 0 of a width-(w) type into position w
  std::vector<int> as_x(w), as_y(w);
  std::iota(as_x.begin(), as_x.end(), 0);
  std::iota(as_y.begin(), as_y.end(), 0);
  as_y[0] = w;
  QfType p = q.restrict_to(as_x);
  CHECK(type_extends(q, p, as_x));
  CHECK(type_extends(q, p, as_y));
}

TEST_CASE("duplication dichotomy across class sizes") {
  // pinning a full class of size n takes n variables, so the finite-class
  // theories fail exactly once the width bound reaches the class size
  for (int n = 2; n <= 4; ++n) {
    auto rep = check_duplication(
        compile(catalog("equiv_classes_of(" + std::to_string(n) + ")")), std::max(3, n));
    CHECK(!rep.pass);
  }
  CHECK(check_duplication(compile(catalog("equiv_inf_classes")), 3).pass);
}

TEST_CASE("blowup structures") {
  FiniteStructure v(graph_sig(), 1);
  FiniteStructure b3 = blowup(v, 3);
  CHECK(b3.size == 3);
  CHECK(b3.tuples[0].empty());       // no edges
  CHECK(b3.tuples[1].size() == 9);   // one full eqv class

  auto k2 = graph_of(2, {{0, 1}});
  FiniteStructure bk = blowup(k2, 2);
  CHECK(bk.size == 4);
  // complete bipartite between the two classes: 2*2 ordered pairs twice
  CHECK(bk.tuples[0].size() == 8);
  for (int i : {0, 1})
    for (int j : {2, 3}) CHECK(bk.holds(0, std::vector<int>{i, j}));

  CHECK_THROWS_AS(blowup(v, 0), ForgeError);
}

TEST_CASE("blowup of a path: size-2 classes force nontrivial closure") {
  auto p3 = graph_of(3, {{0, 1}, {1, 2}});
  FiniteStructure b = blowup(p3, 2);
  REQUIRE(b.size == 6);
  // any automorphism fixing element 0 maps its classmate into the class and
  // away from 0, hence fixes it: the whole class is definable from one member
  CHECK(dcl(b, std::vector<int>{0}) == std::set<int>{0, 1});
  auto a2 = acl_below(b, std::vector<int>{0}, 2);
  CHECK(a2.count(0) == 1);
  CHECK(a2.count(1) == 1);
  // with no parameters nothing is pinned: classes swap freely
  CHECK(dcl(b, std::vector<int>{}) == std::set<int>{});
}

TEST_CASE("blowup theory fails duplication") {
  auto rep = check_duplication(compile(catalog("blowup(rado,2)")), 3);
  CHECK(!rep.pass);
}
