#include "doctest.h"
#include "fsat/classify.hpp"

using namespace fsat;

TEST_CASE("verdicts") {
  using C = Verdict::Case;
  CHECK(classify_signature(Signature({}, {{"R", 2}})).which == C::RelationAtLeastBinary);
  CHECK(classify_signature(Signature({{"g", 2}}, {{"U", 1}})).which == C::UnaryRelationAndBinaryFunction);
  CHECK(classify_signature(Signature({{"g", 1}, {"c", 0}}, {{"U", 1}})).which == C::Monadic);
  CHECK(classify_signature(Signature({{"g", 5}}, {{"A", 0}})).which == C::Propositional);
  CHECK(classify_signature(Signature({}, {})).which == C::Monadic);
  CHECK(classify_signature(Signature({{"g", 3}}, {{"R", 2}, {"U", 1}})).which == C::RelationAtLeastBinary);
  CHECK_FALSE(classify_signature(Signature({}, {{"R", 3}})).decidable());
  CHECK(classify_signature(Signature({{"g", 1}}, {})).decidable());
  CHECK(case_label(C::UnaryRelationAndBinaryFunction) == "b");
  CHECK(classify_signature(Signature({}, {{"R", 2}})).enumerable);
}
