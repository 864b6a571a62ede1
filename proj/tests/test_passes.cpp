#include <algorithm>

#include "doctest.h"
#include "pass_check.hpp"
#include "support.hpp"

using namespace fsat;
using testing::check_step;
using testing::PassBounds;

namespace {

void expect_clean(const testing::PassTally& t) {
  for (const auto& f : t.failures) FAIL_CHECK(f);
  CHECK(t.failures.empty());
}

void run_all(const std::vector<std::string>& texts, const Signature& sig,
             const std::function<ReductionStep(const Formula&)>& pass, const PassBounds& b) {
  testing::PassTally total;
  for (const auto& text : texts) total.merge(check_step(pass(parse_formula(text, sig)), b));
  expect_clean(total);
  CHECK(total.forward > 0);
}

}  // namespace

TEST_CASE("pass names dispatch") {
  Signature s({}, {{"P", 1}});
  Formula f = parse_formula("(P x)", s);
  for (const auto& n : pass_names()) {
    if (n == "add_congruence" || n == "embed_padding" || n == "compress_to_membership" || n == "rel2_to_fun" ||
        n == "merge_relations" || n == "propositional_collapse")
      continue;
    CHECK(run_pass(n, f, s, {}).name == n);
  }
  CHECK_THROWS_AS(run_pass("nope", f, s, {}), InputError);
  CHECK_THROWS_AS(run_pass("add_congruence", f, s, {}), InputError);
}

TEST_CASE("preconditions are checked") {
  Signature fn({{"g", 2}}, {{"P", 1}});
  Formula f = parse_formula("(P (g x y))", fn);
  CHECK_THROWS_AS(merge_relations(f, fn), PreconditionError);
  CHECK_THROWS_AS(remove_constants(f, fn), PreconditionError);
  CHECK_THROWS_AS(lift_arity0_to1(f, fn), PreconditionError);
  CHECK_THROWS_AS(propositional_collapse(f, fn), PreconditionError);
  CHECK_THROWS_AS(add_congruence(f, fn, "P"), PreconditionError);
  CHECK_THROWS_AS(rel2_to_fun(f, fn, 2), PreconditionError);
  Signature p2({}, {{"P", 2}});
  CHECK_THROWS_AS(rel2_to_fun(Formula::atom("P", {var(0), var(1)}), p2, 1), PreconditionError);
  CHECK_THROWS_AS(embed_padding(Formula::atom("P", {var(0), var(1)}), p2, Signature({}, {{"U", 1}})),
                  PreconditionError);
}

TEST_CASE("compact_symbols keeps only used symbols") {
  Signature s({{"g", 1}, {"h", 2}}, {{"A", 1}, {"B", 2}, {"C", 0}});
  auto step = compact_symbols(parse_formula("(B (g x) y)", s), s);
  CHECK(step.target_sig.functions().size() == 1);
  CHECK(step.target_sig.relations().size() == 1);
  run_all({"(B (g x) y)", "(forall x (-> (A x) (B x (g x))))", "(and C (exists x (A (h x x))))"}, s,
          [&](const Formula& f) { return compact_symbols(f, s); }, {});
}

TEST_CASE("remove_functions yields a relational signature") {
  Signature s({{"g", 1}, {"c", 0}}, {{"P", 1}, {"R", 2}});
  auto step = remove_functions(parse_formula("(P (g c))", s), s);
  CHECK(step.target_sig.functions().empty());
  PassBounds b;
  b.backward_opts.diagonal = "eq";
  run_all({"(P (g c))", "(forall x (R x (g x)))", "(and (P c) (not (P (g c))))", "(exists x (R (g x) (g (g x))))"},
          s, [&](const Formula& f) { return remove_functions(f, s); }, b);
}

TEST_CASE("add_congruence") {
  Signature s({{"g", 1}}, {{"P", 1}, {"E", 2}});
  PassBounds b;
  b.forward_opts.diagonal = "E";
  run_all({"(P (g x))", "(and (E x y) (P x) (not (P y)))", "(forall x (E x (g x)))"}, s,
          [&](const Formula& f) { return add_congruence(f, s, "E"); }, b);
  // The second formula is unsatisfiable once E is a congruence.
  auto step = add_congruence(parse_formula("(and (E x y) (P x) (not (P y)))", s), s, "E");
  CHECK_FALSE(search_up_to(step.target, step.target_sig, 2).sat());
}

TEST_CASE("uniformize_arity") {
  Signature s({}, {{"A", 0}, {"U", 1}, {"R", 2}});
  auto step = uniformize_arity(parse_formula("(and A (U x))", s), s, 2);
  for (const auto& r : step.target_sig.relations()) CHECK(r.arity == 2);
  run_all({"(and A (U x))", "(forall x (-> (U x) (R x x)))", "(or (not A) (exists x (R x y)))"}, s,
          [&](const Formula& f) { return uniformize_arity(f, s, 2); }, {});
}

TEST_CASE("merge_relations") {
  Signature s({}, {{"A", 2}, {"B", 2}});
  auto step = merge_relations(parse_formula("(A x y)", s), s);
  CHECK(step.target_sig.relations().size() == 1);
  run_all({"(and (A x y) (not (B x y)))", "(forall x (exists y (and (A x y) (B y x))))"}, s,
          [&](const Formula& f) { return merge_relations(f, s); }, {});
}

TEST_CASE("remove_constants") {
  Signature s({{"a", 0}, {"b", 0}}, {{"R", 2}});
  auto step = remove_constants(parse_formula("(R a b)", s), s);
  CHECK(step.target_sig.functions().empty());
  run_all({"(R a b)", "(and (R a x) (not (R b x)))", "(forall x (R x a))"}, s,
          [&](const Formula& f) { return remove_constants(f, s); }, {});
}

TEST_CASE("compress_to_membership") {
  Signature s({}, {{"R", 2}});
  auto step = compress_to_membership(parse_formula("(R x y)", s), s);
  CHECK(step.target_sig.relations().size() == 1);
  CHECK(step.target_sig.relations()[0].arity == 2);
  PassBounds b;
  b.k_backward = 0;
  run_all({"(R x y)", "(forall x (not (R x x)))", "(exists x (forall y (R x y)))"}, s,
          [&](const Formula& f) { return compress_to_membership(f, s); }, b);
}

TEST_CASE("rel2_to_fun and embed_padding") {
  Signature s({}, {{"R", 2}});
  PassBounds b;
  b.k_backward = 2;
  run_all({"(R x y)", "(forall x (not (R x x)))", "(exists x (R x x))"}, s,
          [&](const Formula& f) { return rel2_to_fun(f, s, 2); }, b);
  Signature wide({}, {{"T", 3}});
  run_all({"(R x y)", "(forall x (exists y (R x y)))"}, s,
          [&](const Formula& f) { return embed_padding(f, s, wide); }, {});
  Signature mixed({{"g", 2}}, {{"U", 1}});
  run_all({"(R x y)", "(exists x (R x x))"}, s, [&](const Formula& f) { return embed_padding(f, s, mixed); }, b);
}

TEST_CASE("monadic passes") {
  Signature s({{"c", 0}, {"g", 1}}, {{"A", 0}, {"U", 1}});
  run_all({"(and A (U c))", "(forall x (-> (U x) (U (g x))))", "(or A (exists x (not (U (g c)))))"}, s,
          [&](const Formula& f) { return lift_arity0_to1(f, s); }, {});
  Signature u({{"g", 1}}, {{"U", 1}});
  PassBounds b;
  b.k_backward = 0;
  run_all({"(forall x (-> (U x) (not (U (g x)))))", "(and (U x) (not (U (g (g x)))))"}, u,
          [&](const Formula& f) { return remove_monadic_functions(f, u); }, b);
  auto step = remove_monadic_functions(parse_formula("(U (g x))", u), u);
  CHECK(step.target_sig.functions().empty());
  Signature p({{"g", 2}}, {{"A", 0}, {"B", 0}});
  run_all({"(and A (not B))", "(forall x (-> A B))"}, p,
          [&](const Formula& f) { return propositional_collapse(f, p); }, {});
}

TEST_CASE("close_formula") {
  Signature s({}, {{"R", 2}});
  auto step = close_formula(parse_formula("(R x y)", s), s);
  CHECK(free_vars(step.target).empty());
  run_all({"(R x y)", "(and (R x y) (not (R y x)))"}, s, [&](const Formula& f) { return close_formula(f, s); },
          {});
}

TEST_CASE("pipeline ends in the membership signature") {
  Signature s({{"g", 1}}, {{"P", 2}, {"Q", 1}});
  Formula f = parse_formula("(and (P x (g x)) (Q (g y)))", s);
  auto steps = pipeline_to_binary(f, s);
  CHECK(steps.size() == 7);
  const auto& last = steps.back().target_sig;
  CHECK(last.functions().empty());
  REQUIRE(last.relations().size() == 1);
  CHECK(last.relations()[0].arity == 2);
  for (std::size_t i = 1; i < steps.size(); ++i) CHECK(steps[i].source == steps[i - 1].target);
  auto w = search_up_to(f, s, 2);
  REQUIRE(w.sat());
  auto fw = forward_through(steps, *w.witness);
  CHECK(eval_formula(fw.model, fw.env, steps.back().target));
  auto back = backward_through(steps, fw);
  CHECK(eval_formula(back.model, back.env, f));
}
