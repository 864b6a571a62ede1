#include "doctest.h"
#include "fsat/monadic.hpp"
#include "fsat/search.hpp"
#include "support.hpp"

using namespace fsat;

TEST_CASE("base decisions agree with exhaustive search") {
  // With only unary relations, elements of equal type collapse, so 2^n points suffice.
  Signature s({}, {{"P", 1}, {"Q", 1}});
  testing::FormulaGen gen(s, 31, 2);
  for (int i = 0; i < 300; ++i) {
    Formula f = gen.formula(4);
    auto r = decide_monadic_base(f, s);
    CHECK(r.sat == search_up_to(f, s, 4).sat());
    if (r.sat) {
      REQUIRE(r.witness);
      CHECK(eval_formula(r.witness->model, r.witness->env, f));
    }
  }
}

TEST_CASE("full decisions with unary functions and constants") {
  Signature s({{"c", 0}, {"g", 1}}, {{"A", 0}, {"P", 1}});
  testing::FormulaGen gen(s, 37, 1, 1);
  std::size_t sat = 0, guarded = 0;
  for (int i = 0; i < 120; ++i) {
    Formula f = gen.formula(3);
    MonadicResult r;
    try {
      r = decide_monadic_full(f, s);
    } catch (const ResourceError&) {
      ++guarded;
      continue;
    }
    if (r.sat) {
      ++sat;
      REQUIRE(r.witness);
      CHECK(eval_formula(r.witness->model, r.witness->env, f));
    } else {
      CHECK_FALSE(search_up_to(f, s, 3).sat());
    }
  }
  CHECK(sat > 0);
  CHECK(guarded < 20);
}

TEST_CASE("known monadic formulas") {
  Signature s({{"g", 1}}, {{"P", 1}});
  // g swaps P and not P: satisfiable, but needs two elements.
  auto r = decide_monadic_full(parse_formula("(and (exists x (P x)) (forall x (iff (P x) (not (P (g x))))))", s), s);
  CHECK(r.sat);
  CHECK(r.witness->model.size() >= 2);
  auto u = decide_monadic_full(parse_formula("(and (P x) (not (P x)))", s), s);
  CHECK_FALSE(u.sat);
  CHECK_FALSE(r.steps.empty());
}

TEST_CASE("guards") {
  Signature big({}, {{"A", 1}, {"B", 1}, {"C", 1}, {"D", 1}});
  Formula f = parse_formula("(and (A x) (B x) (C x) (D x))", big);
  MonadicOptions tight;
  tight.max_predicates = 3;
  CHECK_THROWS_AS(decide_monadic_base(f, big, tight), ResourceError);
  CHECK(decide_monadic_base(f, big).sat);
  Signature binary({}, {{"R", 2}});
  CHECK_THROWS_AS(decide_monadic_full(Formula::atom("R", {var(0), var(0)}), binary), PreconditionError);
}
