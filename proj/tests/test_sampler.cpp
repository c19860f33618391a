#include <doctest.h>

#include "forge/sampler.hpp"
#include "forge/verify.hpp"

#include <numeric>

using namespace forge;

TEST_CASE("quantile images match the documented distribution checks") {
  MeasureSpec cauchy = MeasureSpec::parse("cauchy");
  Rng rng(101);
  long below_zero = 0;
  const long draws = 20000;
  for (long i = 0; i < draws; ++i) {
    SampleBatch b = sample_points(cauchy, 1, rng.child(static_cast<std::uint64_t>(i)));
    if (b.points[0] < 0) ++below_zero;
  }
  double frac = static_cast<double>(below_zero) / draws;
  CHECK(frac == doctest::Approx(0.5).epsilon(0.04));  // median of cauchy(0,1) is 0

  MeasureSpec logistic = MeasureSpec::parse("logistic");
  long below_one = 0;
  for (long i = 0; i < draws; ++i) {
    SampleBatch b = sample_points(logistic, 1, rng.child(1000000 + static_cast<std::uint64_t>(i)));
    if (b.points[0] < Rational(1)) ++below_one;
  }
  frac = static_cast<double>(below_one) / draws;
  CHECK(frac == doctest::Approx(0.7311).epsilon(0.03));  // logistic cdf at 1

  CHECK_THROWS_AS((void)sample_points(cauchy, 0, rng), ForgeError);
}

TEST_CASE("points are exact dyadic rationals and pairwise distinct") {
  MeasureSpec m = MeasureSpec::parse("cauchy", 0, 1, 96);
  SampleBatch b = sample_points(m, 50, Rng(3));
  std::set<Rational> s(b.points.begin(), b.points.end());
  CHECK(s.size() == 50);
  for (const auto& p : b.points) {
    BigInt d = denominator(p);
    // denominator divides 2^96
    while (d % 2 == 0) d /= 2;
    CHECK(d == 1);
  }
}

TEST_CASE("induce on a dlo trace yields a linear order; single point works") {
  TheoryRef th = compile(catalog("dlo"));
  auto base = ConstructionTrace::run(th, 14);
  MeasureSpec m = MeasureSpec::parse("cauchy");
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    FiniteStructure s = sample_from_base(base, m, 3, seed);
    // a strict total order on three labels: exactly 3 ordered pairs,
    // irreflexive, antisymmetric, transitive
    CHECK(s.tuples[0].size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(!s.holds(0, std::vector<int>{i, i}));
  }
  FiniteStructure one = sample_from_base(base, m, 1, 5);
  CHECK(one.size == 1);
  CHECK(one.tuples[0].empty());
}

TEST_CASE("henson3 samples are triangle-free; rado shows both pair patterns") {
  TheoryRef henson = compile(catalog("henson3"));
  auto hbase = ConstructionTrace::run(henson, 14);
  MeasureSpec m = MeasureSpec::parse("cauchy");
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    FiniteStructure s = sample_from_base(hbase, m, 8, seed);
    for (int a = 0; a < 8; ++a)
      for (int b = a + 1; b < 8; ++b)
        for (int c = b + 1; c < 8; ++c) {
          bool tri = s.holds(0, std::vector<int>{a, b}) &&
                     s.holds(0, std::vector<int>{b, c}) &&
                     s.holds(0, std::vector<int>{a, c});
          CHECK(!tri);
        }
  }

  TheoryRef rado = compile(catalog("rado"));
  auto rbase = ConstructionTrace::run(rado, 10);
  bool edge = false, nonedge = false;
  for (std::uint64_t seed = 0; seed < 200 && !(edge && nonedge); ++seed) {
    FiniteStructure s = sample_from_base(rbase, m, 2, seed);
    (s.tuples[0].empty() ? nonedge : edge) = true;
  }
  CHECK(edge);
  CHECK(nonedge);
}

TEST_CASE("sampling is deterministic in all inputs") {
  TheoryRef th = compile(catalog("rado"));
  FiniteStructure a = sample_structure(th, 6, MeasureSpec::parse("cauchy"), 42, 10);
  FiniteStructure b = sample_structure(th, 6, MeasureSpec::parse("cauchy"), 42, 10);
  CHECK(a.key() == b.key());
  FiniteStructure c = sample_structure(th, 6, MeasureSpec::parse("cauchy"), 43, 10);
  CHECK(a.key() != c.key());  // overwhelmingly likely for n=6
}

TEST_CASE("induce error paths: repeated points and missing depth") {
  TheoryRef th = compile(catalog("rado"));
  auto tr = ConstructionTrace::init(th);
  std::vector<Rational> rep = {Rational(0), Rational(0)};
  CHECK_THROWS_AS((void)induce(tr, rep, true), ForgeError);
  std::vector<Rational> apart = {Rational(0), Rational(1, 2)};
  CHECK_THROWS_WITH_AS((void)induce(tr, apart, false), doctest::Contains("share"),
                       ForgeError);
  FiniteStructure ok = induce(tr, apart, true);
  CHECK(ok.size == 2);
}

TEST_CASE("q_min samples satisfy the semigroup laws literally") {
  TheoryRef th = compile(catalog("q_min_semigroup"));
  auto base = ConstructionTrace::run(th, 20);
  MeasureSpec m = MeasureSpec::parse("cauchy");
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    FiniteStructure s = sample_from_base(base, m, 6, seed);
    CHECK(min_semigroup_laws_hold(s));
  }
}

TEST_CASE("exchangeability smoke test and negative control") {
  TheoryRef th = compile(catalog("dlo"));
  auto base = ConstructionTrace::run(th, 14);
  MeasureSpec m = MeasureSpec::parse("cauchy");
  auto rep = exchangeability_test("dlo", base, m, 3, 4000, 11, 1e-3);
  CHECK(rep.passed());

  // broken generator: label 0 is always isolated below everything
  StructureGen broken = [&](std::uint64_t d) {
    FiniteStructure s = sample_from_base(base, m, 3, Rng(99).child(d).key);
    for (int j = 1; j < 3; ++j) {
      s.set(0, {j, 0}, false);
      s.set(0, {0, j}, true);  // 0 below everyone
    }
    return s;
  };
  auto bad = exchangeability_test("dlo-broken", broken, 3, 4000, 11, 1e-3);
  CHECK(!bad.passed());
}

TEST_CASE("axiom satisfaction rates behave for dlo") {
  TheoryRef th = compile(catalog("dlo"));
  auto base = ConstructionTrace::run(th, 14);
  MeasureSpec m = MeasureSpec::parse("cauchy");
  std::vector<int> n_list = {5, 10, 20, 50};
  for (size_t g = 0; g < th->genuine.size(); ++g) {
    auto rep = axiom_satisfaction("dlo", base, static_cast<int>(g), m, n_list, 200, 5, 0.95);
    CHECK(rep.passed());
  }
}

TEST_CASE("forbidden_check passes on honest samples, catches an injected triangle") {
  TheoryRef th = compile(catalog("henson3"));
  auto base = ConstructionTrace::run(th, 14);
  MeasureSpec m = MeasureSpec::parse("cauchy");
  auto rep = forbidden_check("henson3", base, m, 12, 50, 3);
  CHECK(rep.passed());
  CHECK(rep.value == 0);

  std::vector<FiniteStructure> tampered;
  tampered.push_back(sample_from_base(base, m, 12, 4));
  for (auto [a, b] : {std::pair{0, 1}, {1, 2}, {0, 2}}) {
    tampered.back().set(0, {a, b}, true);
    tampered.back().set(0, {b, a}, true);
  }
  auto neg = forbidden_check_structures("henson3", th, tampered);
  CHECK(!neg.passed());
  CHECK(neg.value >= 1);
}
