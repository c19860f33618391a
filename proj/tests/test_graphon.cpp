#include <doctest.h>

#include "forge/graphon.hpp"
#include "forge/json_io.hpp"
#include "forge/verify.hpp"

using namespace forge;

TEST_CASE("stage-0 export: tails plus one interior part, all values zero") {
  TheoryRef th = compile(catalog("rado"));
  auto tr = ConstructionTrace::init(th);
  MeasureSpec m = MeasureSpec::parse("cauchy");
  StepGraphon w = export_step_graphon(tr, m);
  REQUIRE(w.masses.size() == 3);
  // cauchy cdf at sqrt(2): 0.5 + atan(sqrt 2)/pi
  CHECK(w.masses[0] == doctest::Approx(0.19591835).epsilon(1e-6));
  CHECK(w.masses[1] == doctest::Approx(0.60816330).epsilon(1e-6));
  CHECK(w.masses[2] == doctest::Approx(0.19591835).epsilon(1e-6));
  for (const auto& row : w.values)
    for (double v : row) CHECK(v == 0.0);
  CHECK(w.random_free);
  CHECK(w.unresolved_mass == doctest::Approx(2 * 0.19591835).epsilon(1e-5));
  double sum = 0;
  for (double x : w.masses) sum += x;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exports are random-free and reject non-graph signatures") {
  StepGraphon w = export_step_graphon(
      ConstructionTrace::run(compile(catalog("rado")), 10), MeasureSpec::parse("cauchy"));
  CHECK(w.random_free);
  CHECK_THROWS_AS((void)export_step_graphon(
                      ConstructionTrace::run(compile(catalog("q_min_semigroup")), 4),
                      MeasureSpec::parse("cauchy")),
                  ForgeError);
}

TEST_CASE("henson3 export has no triangle among interior parts") {
  StepGraphon w = export_step_graphon(
      ConstructionTrace::run(compile(catalog("henson3")), 16), MeasureSpec::parse("cauchy"));
  size_t p = w.values.size();
  for (size_t i = 1; i + 1 < p; ++i)
    for (size_t j = i + 1; j + 1 < p; ++j)
      for (size_t k = j + 1; k + 1 < p; ++k)
        CHECK(!(w.values[i][j] == 1.0 && w.values[j][k] == 1.0 && w.values[i][k] == 1.0));
}

TEST_CASE("w_random: constant graphons behave like coin flips") {
  StepGraphon half = StepGraphon::constant(0.5);
  Rng rng(17);
  long edges = 0, pairs = 0;
  for (int d = 0; d < 60; ++d) {
    FiniteStructure g = w_random(half, 40, rng.child(static_cast<std::uint64_t>(d)));
    pairs += 40 * 39 / 2;
    edges += static_cast<long>(g.tuples[0].size()) / 2;
  }
  CHECK(static_cast<double>(edges) / pairs == doctest::Approx(0.5).epsilon(0.02));

  FiniteStructure full = w_random(StepGraphon::constant(1.0), 10, rng);
  CHECK(full.tuples[0].size() == 90);  // complete graph, both directions
}

TEST_CASE("distribution_compare separates ER(1/2) from ER(1/4)") {
  auto er = [](double p) {
    return GraphGen([p](Rng rng) { return w_random(StepGraphon::constant(p), 3, rng); });
  };
  CompareReport same = distribution_compare(er(0.5), er(0.5), 20000, Rng(5));
  CHECK(same.tv < 0.02);
  CompareReport diff = distribution_compare(er(0.5), er(0.25), 20000, Rng(5));
  CHECK(diff.tv > 0.2);
}

TEST_CASE("graphon JSON round-trips through the documented schema") {
  StepGraphon w = export_step_graphon(
      ConstructionTrace::run(compile(catalog("rado")), 8), MeasureSpec::parse("cauchy"));
  Json j = to_json(w);
  CHECK(j.contains("masses"));
  CHECK(j.contains("values"));
  CHECK(j["random_free"].get<bool>());
  StepGraphon back = graphon_from_json(j);
  CHECK(back.masses == w.masses);
  CHECK(back.values == w.values);
}

TEST_CASE("w_random output is exchangeable (orbit uniformity)") {
  StepGraphon w = export_step_graphon(
      ConstructionTrace::run(compile(catalog("rado")), 10), MeasureSpec::parse("cauchy"));
  StructureGen gen = [&](std::uint64_t d) { return w_random(w, 3, Rng(23).child(d)); };
  auto rep = exchangeability_test("rado-graphon", gen, 3, 6000, 23, 1e-3);
  CHECK(rep.passed());
}
