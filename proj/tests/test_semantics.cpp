#include "doctest.h"
#include "fsat/semantics.hpp"
#include "support.hpp"

using namespace fsat;

TEST_CASE("tuple indexing is big-endian") {
  CHECK(tuple_index({1, 2}, 3) == 5);
  CHECK(tuple_at(5, 2, 3) == std::vector<Elem>{1, 2});
  CHECK(table_length(3, 0) == 1);
  CHECK_THROWS_AS(table_length(100, 5), ResourceError);
}

TEST_CASE("term evaluation") {
  Env e{{0, 1}, 0};
  FinModel m(2);
  CHECK(eval_term(m, e, var(3)) == 0);
  m.set_function("f", 1, {1, 0});
  CHECK(eval_term(m, e, Term::apply("f", {var(0)})) == 1);
  FinModel m3(3);
  std::vector<Elem> add(9);
  for (Elem a = 0; a < 3; ++a)
    for (Elem b = 0; b < 3; ++b) add[a * 3 + b] = (a + b) % 3;
  m3.set_function("f", 2, add);
  CHECK(eval_term(m3, Env{{1, 2}, 0}, Term::apply("f", {var(0), var(1)})) == 0);
}

TEST_CASE("formula evaluation") {
  FinModel m(2);
  m.set_relation("P", 1, {1, 0});
  CHECK_FALSE(eval_formula(m, {}, Formula::falsum()));
  CHECK(eval_formula(m, {}, exists(Formula::atom("P", {var(0)}))));
  CHECK_FALSE(eval_formula(m, {}, forall(Formula::atom("P", {var(0)}))));
  FinModel r(2);
  r.set_relation("P", 2, {0, 1, 0, 0});
  CHECK_FALSE(eval_formula(r, {}, forall(exists(Formula::atom("P", {var(1), var(0)})))));
}

TEST_CASE("evaluation ignores variables that are not free and respects negation") {
  Signature s({{"f", 1}}, {{"P", 1}, {"R", 2}});
  testing::FormulaGen gen(s, 3, 2);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    Formula f = gen.formula(3);
    FinModel m = testing::random_model(s, 3, rng);
    Env e = testing::random_env(2, 3, rng);
    bool v = eval_formula(m, e, f);
    CHECK(eval_formula(m, e, neg(f)) == !v);
    Env other = e;
    other.prefix.resize(5, 2);
    other.fallback = 1;
    for (std::size_t x : free_vars(f)) other.set(x, e.lookup(x));
    CHECK(eval_formula(m, other, f) == v);
  }
}

TEST_CASE("compiled evaluator tracks table changes") {
  FinModel m(2);
  m.set_relation("P", 1, {0, 0});
  Formula f = exists(Formula::atom("P", {var(0)}));
  Evaluator ev(m, f);
  CHECK_FALSE(ev(Env{}));
  m.mutable_relation("P")->bits[1] = 1;
  CHECK(ev(Env{}));
}

TEST_CASE("extensional model equality") {
  FinModel a(1), b(1);
  a.set_relation("P", 1, {1});
  b.set_relation("P", 1, {0});
  CHECK(models_ext_equal(a, a, {{}, {"P"}}));
  CHECK_FALSE(models_ext_equal(a, b, {{}, {"P"}}));
  FinModel c(2), d(2);
  c.set_relation("P", 1, {1, 0});
  d.set_relation("P", 1, {1, 0});
  c.set_relation("Q", 1, {1, 1});
  d.set_relation("Q", 1, {0, 0});
  CHECK(models_ext_equal(c, d, {{}, {"P"}}));
}

TEST_CASE("compiled evaluation matches the clauses on large domains") {
  Signature s({{"f", 1}}, {{"P", 1}, {"R", 2}});
  testing::FormulaGen gen(s, 17, 2, 1);
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    Formula f = gen.formula(3);
    std::size_t k = 16 + i % 3;
    FinModel m = testing::random_model(s, k, rng);
    // Sparse relations make guarded quantifiers skip most of the domain.
    for (auto& b : m.mutable_relation("R")->bits) b = (rng() % 6 == 0);
    // Guard-shaped wrappers around the random body.
    Formula g = i % 2 ? exists(conj(Formula::atom("R", {var(0), var(1 + i % 3)}), f))
                      : forall(impl(conj(Formula::atom("R", {var(2), var(0)}), f), shift(f, 0, 1)));
    f = i % 4 < 2 ? g : exists(g);
    Env e = testing::random_env(2, k, rng);
    Evaluator ev(m, f);
    CHECK(ev(e) == testing::naive_eval(m, e, f));
    Env e2 = testing::random_env(2, k, rng);
    CHECK(ev(e2) == testing::naive_eval(m, e2, f));
  }
}
