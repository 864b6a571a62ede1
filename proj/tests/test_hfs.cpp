#include "doctest.h"
#include "fsat/hfs.hpp"
#include "fsat/passes.hpp"

using namespace fsat;

namespace {

RawTree raw(std::vector<RawTree> c) { return RawTree{std::move(c)}; }

}  // namespace

TEST_CASE("normalization is set equality") {
  RawTree e = raw({});
  RawTree one = raw({e});
  CHECK(normalize(raw({e, e})) == normalize(one));
  CHECK(normalize(raw({one, e})) == normalize(raw({e, one, e})));
  CHECK_FALSE(normalize(one) == normalize(e));
  CHECK(normalize(to_raw(numeral(4))) == numeral(4));
  CHECK(numeral(2).to_string() == "{{},{{}}}");
}

TEST_CASE("membership and numerals") {
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(numeral(i).members().size() == i);
    CHECK(numeral(i).rank() == i);
    for (std::size_t j = 0; j < 6; ++j) CHECK(mem(numeral(j), numeral(i)) == (j < i));
  }
}

TEST_CASE("ordered pairs and tuples are injective") {
  std::vector<Hfs> xs;
  for (std::size_t i = 0; i < 4; ++i) xs.push_back(numeral(i));
  xs.push_back(Hfs::of({numeral(2)}));
  for (const auto& a : xs)
    for (const auto& b : xs)
      for (const auto& c : xs)
        for (const auto& d : xs) {
          CHECK((opair(a, b) == opair(c, d)) == (a == c && b == d));
          CHECK((tuple({a, b}) == tuple({c, d})) == (a == c && b == d));
        }
  CHECK(tuple({}) == Hfs());
  CHECK(opair(numeral(0), numeral(0)) == Hfs::of({Hfs::of({numeral(0)})}));
}

TEST_CASE("transitive closure and powerset") {
  auto tc = transitive_closure({numeral(3)});
  CHECK(tc.size() == 4);
  for (const auto& x : tc)
    for (const auto& y : x.members()) CHECK(std::find(tc.begin(), tc.end(), y) != tc.end());
  CHECK(powerset(numeral(3)).members().size() == 8);
  CHECK(powerset(Hfs()).members().size() == 1);
  std::vector<Hfs> big;
  for (std::size_t i = 0; i <= kPowersetGuard; ++i) big.push_back(numeral(i));
  CHECK_THROWS_AS(powerset(Hfs::of(big)), ResourceError);
}

TEST_CASE("membership model contents") {
  FinModel m(2);
  m.set_relation("R", 2, {0, 1, 0, 0});
  auto mm = build_membership_model(m, Env{{1}, 0}, 1);
  const auto& u = mm.universe;
  CHECK(u[mm.d] == Hfs::of({numeral(0), numeral(1)}));
  CHECK(u[mm.r] == Hfs::of({tuple({numeral(0), numeral(1)})}));
  CHECK(mm.env.lookup(0) == mm.element[1]);
  CHECK(mm.env.lookup(1) == mm.d);
  CHECK(mm.env.lookup(2) == mm.r);
  for (Elem a = 0; a < u.size(); ++a)
    for (Elem b = 0; b < u.size(); ++b) CHECK(mm.model.holds(kMembership, {a, b}) == mem(u[a], u[b]));
  CHECK(eval_formula(mm.model, mm.env, mb_extensionality()));
}
