#include "doctest.h"
#include "fsat/logic.hpp"
#include "support.hpp"

using namespace fsat;

namespace {

Signature p1() { return Signature({}, {{"P", 1}}); }
Signature p2() { return Signature({}, {{"P", 2}}); }

}  // namespace

TEST_CASE("free_vars adjusts for binders") {
  CHECK(free_vars(forall(Formula::atom("P", {var(0)}))).empty());
  CHECK(free_vars(forall(Formula::atom("P", {var(0), var(3)}))) == std::vector<std::size_t>{2});
  Formula f = conj(Formula::atom("P", {var(1)}), exists(Formula::atom("P", {var(0)})));
  CHECK(free_vars(f) == std::vector<std::size_t>{1});
  CHECK(free_bound(f) == 2);
}

TEST_CASE("symbols_of lists each symbol once") {
  CHECK(symbols_of(Formula::falsum()).relations.empty());
  auto u = symbols_of(Formula::atom("P", {Term::apply("f", {var(0)})}));
  CHECK(u.functions == std::vector<std::string>{"f"});
  CHECK(u.relations == std::vector<std::string>{"P"});
  auto v = symbols_of(impl(Formula::atom("P", {var(0)}), Formula::atom("P", {var(1)})));
  CHECK(v.relations.size() == 1);
}

TEST_CASE("shift moves indices at or above the cutoff") {
  CHECK(shift(Formula::atom("P", {var(0), var(2)}), 1, 1) == Formula::atom("P", {var(0), var(3)}));
  CHECK(shift(forall(Formula::atom("P", {var(0), var(1)})), 0, 1) == forall(Formula::atom("P", {var(0), var(2)})));
  CHECK_THROWS_AS(shift(Formula::atom("P", {var(0)}), 0, -1), PreconditionError);
  Formula f = Formula::atom("P", {var(1), var(4)});
  CHECK(shift(shift(f, 1, 2), 1, 3) == shift(f, 1, 5));
}

TEST_CASE("parser resolves binders, free names and explicit indices") {
  CHECK(parse_formula("(forall x (P x))", p1()) == forall(Formula::atom("P", {var(0)})));
  Formula f = parse_formula("(forall x (exists y (-> (P x u) (P y v))))", p2());
  CHECK(f == forall(exists(impl(Formula::atom("P", {var(1), var(2)}), Formula::atom("P", {var(0), var(3)})))));
  CHECK(parse_formula("(P #3 a)", p2()) == Formula::atom("P", {var(3), var(0)}));
  CHECK(parse_formula("(and (P a) (P b) (P a))", p1()) ==
        conj(Formula::atom("P", {var(0)}), conj(Formula::atom("P", {var(1)}), Formula::atom("P", {var(0)}))));
  Signature s({{"c", 0}, {"f", 1}}, {{"P", 1}, {"A", 0}});
  CHECK(parse_formula("(P (f c))", s) == Formula::atom("P", {Term::apply("f", {Term::apply("c")})}));
  CHECK(parse_formula("(or A false) ; comment", s) == disj(Formula::atom("A"), Formula::falsum()));
}

TEST_CASE("parser errors are distinct and positioned") {
  auto kind_of = [](const std::string& text, const Signature& s) {
    try {
      parse_formula(text, s);
    } catch (const InputError& e) {
      return e.kind();
    }
    FAIL("no error");
    return InputError::Kind::Format;
  };
  CHECK(kind_of("(P x y)", p1()) == InputError::Kind::ArityMismatch);
  CHECK(kind_of("(Q x)", p1()) == InputError::Kind::UnknownSymbol);
  CHECK(kind_of("(forall x (P x)", p1()) == InputError::Kind::Syntax);
  try {
    parse_formula("(P x", p1());
    FAIL("no error");
  } catch (const InputError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("printer output") {
  CHECK(print_formula(forall(Formula::atom("P", {var(0)}))) == "(forall v0 (P v0))");
  CHECK(print_formula(Formula::falsum()) == "false");
}

TEST_CASE("print then parse is the identity on random formulas") {
  Signature s({{"c", 0}, {"f", 1}, {"g", 2}}, {{"P", 1}, {"R", 2}, {"A", 0}});
  testing::FormulaGen gen(s, 7, 3);
  for (int i = 0; i < 1000; ++i) {
    Formula f = gen.formula(4);
    CHECK(parse_formula(print_formula(f), s) == f);
  }
}

TEST_CASE("free variables of a quantifier drop by one") {
  Signature s({{"f", 1}}, {{"R", 2}});
  testing::FormulaGen gen(s, 11, 3);
  for (int i = 0; i < 300; ++i) {
    Formula f = gen.formula(3);
    std::vector<std::size_t> expect;
    for (auto x : free_vars(f))
      if (x >= 1) expect.push_back(x - 1);
    CHECK(free_vars(forall(f)) == expect);
    CHECK(symbols_of(shift(f, 0, 2)).relations == symbols_of(f).relations);
  }
}

TEST_CASE("well-formedness checks arities") {
  CHECK_THROWS_AS(check_well_formed(Formula::atom("P", {var(0), var(1)}), p1()), InputError);
  CHECK_NOTHROW(check_well_formed(Formula::atom("P", {var(0)}), p1()));
}
