#include <doctest.h>

#include "forge/enumerate.hpp"
#include "forge/rng.hpp"
#include "forge/theory.hpp"

using namespace forge;

namespace {

const char* henson_src = R"(
theory triangle_free_demo
rel E/2
forall x : !E(x,x)
forall x y : E(x,y) -> E(y,x)
forbid size 3 : E(0,1) E(1,0) E(1,2) E(2,1) E(0,2) E(2,0)
forall x exists y : E(x,y) & y != x
forall x exists y : !E(x,y) & y != x
)";

QfType k3_diagram() {
  FiniteStructure s(Signature{{{"E", 2}}, {}}, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) s.tuples[0].insert({i, j});
  return diagram_of(s, std::vector<int>{0, 1, 2});
}

}  // namespace

TEST_CASE("parser accepts the triangle-free demo source") {
  TheorySpec spec = parse_theory(henson_src);
  CHECK(spec.name == "triangle_free_demo");
  CHECK(spec.sig.relations.size() == 1);
  CHECK(spec.forbidden.size() == 1);
  CHECK(spec.axioms.size() == 4);

  TheoryRef th = compile(spec);
  AgeOracle oracle(th);
  CHECK(!oracle.consistent(k3_diagram()));
}

TEST_CASE("parser reports syntax errors with position") {
  CHECK_THROWS_WITH_AS(parse_theory("rel E/2\nforall x : E(x"),
                       doctest::Contains("syntax error at 2"), ForgeError);
  CHECK_THROWS_WITH_AS(parse_theory("rel E/2\nforall x : E(x,y,z)"),
                       doctest::Contains("arity"), ForgeError);
  CHECK_THROWS_WITH_AS(parse_theory("rel E/2\nforall x : Q(x,x)"),
                       doctest::Contains("undeclared"), ForgeError);
}

TEST_CASE("constant symbols are rejected without relationalization") {
  TheorySpec spec = parse_theory("rel P/1\nconst c\nforall x : P(x)");
  CHECK_THROWS_WITH_AS((void)expand_to_one_point(spec), doctest::Contains("selector"),
                       ForgeError);
  // but compile() relationalizes first, which is fine
  TheoryRef th = compile(spec);
  CHECK(th->sig.rel_index("c*") >= 0);
}

TEST_CASE("empty axiom list yields an unconstrained theory") {
  TheorySpec spec = parse_theory("theory free\nrel R/2\nforall x : R(x,x) | !R(x,x)");
  TheoryRef th = compile(spec);
  AgeOracle oracle(th);
  FiniteStructure s(Signature{{{"R", 2}}, {}}, 2);
  s.tuples[0].insert({0, 1});
  CHECK(oracle.consistent(diagram_of(s, std::vector<int>{0, 1})));
}

TEST_CASE("relationalize turns a binary function into a graph relation") {
  TheorySpec spec;
  spec.name = "minfun";
  spec.sig.relations = {};
  spec.sig.functions = {{"min", 2}};
  TheorySpec rel = relationalize(spec);
  CHECK(rel.sig.relational());
  int mi = rel.sig.rel_index("min*");
  REQUIRE(mi >= 0);
  CHECK(rel.sig.relations[mi].arity == 3);
  // totality (extension) and uniqueness (universal) schemas present
  bool total = false, unique = false;
  for (const auto& ax : rel.axioms) {
    if (ax.id == "min:total") total = !ax.universal() && ax.exist_vars.size() == 1;
    if (ax.id == "min:unique") unique = ax.universal();
  }
  CHECK(total);
  CHECK(unique);
}

TEST_CASE("relationalize turns constants into unary relations") {
  TheorySpec spec;
  spec.sig.functions = {{"c", 0}};
  TheorySpec rel = relationalize(spec);
  int ci = rel.sig.rel_index("c*");
  REQUIRE(ci >= 0);
  CHECK(rel.sig.relations[ci].arity == 1);
  bool total_k0 = false;
  for (const auto& ax : rel.axioms)
    if (ax.id == "c:total") total_k0 = ax.univ_vars.empty() && ax.exist_vars.size() == 1;
  CHECK(total_k0);
}

TEST_CASE("relationalize is the identity on relational specs") {
  TheorySpec spec = parse_theory("rel E/2\nforall x : !E(x,x)");
  TheorySpec rel = relationalize(spec);
  CHECK(rel.sig == spec.sig);
  CHECK(rel.axioms.size() == spec.axioms.size());
}

TEST_CASE("one-point expansion leaves single-witness axioms alone") {
  TheorySpec spec = parse_theory("rel E/2\nforall x exists y : E(x,y)");
  CompiledTheory th = expand_to_one_point(spec);
  REQUIRE(th.genuine.size() == 1);
  CHECK(th.axioms[th.genuine[0]].premise_width == 1);
  CHECK(th.sig.relations.size() == 1);  // no auxiliaries
}

TEST_CASE("one-point expansion chains multi-witness axioms through auxiliaries") {
  TheorySpec spec = parse_theory("rel E/2\nforall x exists y z : E(x,y) & E(y,z)");
  CompiledTheory th = expand_to_one_point(spec);
  // auxiliary relations _stage0 (arity 1) and _stage1 (arity 2)
  CHECK(th.sig.relations.size() == 3);
  CHECK(th.sig.relations[1].arity == 1);
  CHECK(th.sig.relations[2].arity == 2);
  // trigger universal, two backward universals
  CHECK(th.universals.size() == 3);
  // two forward one-point axioms
  CHECK(th.genuine.size() == 2);
  for (int g : th.genuine) {
    const auto& ax = th.axioms[g];
    CHECK(ax.matrix.width == ax.premise_width + 1);
  }
}

TEST_CASE("universal axioms become dummy mirrors with one existential variable") {
  TheorySpec spec = parse_theory("rel E/2\nforall x y : E(x,y) -> E(y,x)");
  CompiledTheory th = expand_to_one_point(spec);
  CHECK(th.universals.size() == 1);
  REQUIRE(th.axioms.size() == 1);
  CHECK(th.axioms[0].dummy);
  CHECK(th.axioms[0].premise_width == 2);
  CHECK(th.axioms[0].matrix.width == 3);
  CHECK(th.genuine.empty());
}

TEST_CASE("every catalog axiom has exactly one existential variable") {
  for (const auto& name : catalog_names()) {
    TheoryRef th = compile(catalog(name));
    for (const auto& ax : th->axioms) {
      CHECK(ax.matrix.width == ax.premise_width + 1);
      CHECK(ax.premise_width >= 0);
    }
    CHECK(!th->axioms.empty());
  }
}

TEST_CASE("consistency oracle on documented cases") {
  AgeOracle henson(compile(catalog("henson3")));
  CHECK(!henson.consistent(k3_diagram()));
  FiniteStructure v(Signature{{{"E", 2}}, {}}, 1);
  CHECK(henson.consistent(diagram_of(v, std::vector<int>{0})));

  AgeOracle pairs(compile(catalog("equiv_classes_of(2)")));
  Signature esig{{{"eqv", 2}}, {}};
  FiniteStructure two(esig, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) two.tuples[0].insert({i, j});
  CHECK(pairs.consistent(diagram_of(two, std::vector<int>{0, 1})));
  FiniteStructure three(esig, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) three.tuples[0].insert({i, j});
  CHECK(!pairs.consistent(diagram_of(three, std::vector<int>{0, 1, 2})));
}

TEST_CASE("consistency is monotone under deciding atoms") {
  AgeOracle oracle(compile(catalog("henson3")));
  Rng rng(23);
  const auto& sig = oracle.theory->sig;
  for (int iter = 0; iter < 200; ++iter) {
    int w = 2 + static_cast<int>(rng.below(3));
    QfType p(sig, w);
    // random partial assignment
    for (auto& v : p.atoms[0])
      v = static_cast<Tri>(rng.below(3));
    bool before = oracle.consistent(p);
    // decide one undecided atom, if any
    for (auto& v : p.atoms[0])
      if (v == Tri::Unknown) {
        v = static_cast<Tri>(rng.below(2));
        break;
      }
    if (!before) CHECK(!oracle.consistent(p));
  }
}

TEST_CASE("catalog(dlo) axiomatizes dense linear orders without endpoints") {
  TheorySpec spec = catalog("dlo");
  TheoryRef th = compile(spec);
  // universal part: irreflexive, transitive, total
  CHECK(th->universals.size() == 3);
  // extension axioms: above/below a point, and for the (unique up to
  // isomorphism) ordered pair, the three one-point positions
  CHECK(th->genuine.size() == 5);
  AgeOracle oracle(th);
  // consistent width-2 types are exactly the two orderings
  CHECK(consistent_types(*th, 2, false).size() == 2);
}

TEST_CASE("catalog(henson3) extension axioms avoid completing triangles") {
  TheoryRef th = compile(catalog("henson3"));
  // the edge-pair premise admits extensions adjacent to at most one vertex:
  // patterns (edge,edge) excluded, so 7 = 2 (k=1) + 2 (non-edge premise: by
  // symmetry 3 of 4 patterns survive dedupe) + 3 (edge premise minus both)
  AgeOracle oracle(th);
  QfType k3 = k3_diagram();
  CHECK(!oracle.consistent(k3));
  for (int g : th->genuine) CHECK(th->axioms[g].premise_width <= 2);
}

TEST_CASE("unknown catalog name lists the catalog") {
  CHECK_THROWS_WITH_AS((void)catalog("nope"), doctest::Contains("rado"), ForgeError);
}
