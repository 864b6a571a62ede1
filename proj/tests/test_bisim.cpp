#include <functional>

#include "doctest.h"
#include "fsat/bisim.hpp"
#include "support.hpp"

using namespace fsat;

namespace {

bool is_congruence(const FinModel& m, const PairRelation& r) {
  std::size_t k = m.size();
  for (Elem x = 0; x < k; ++x)
    for (Elem y = 0; y < k; ++y) {
      if (!r.get(x, y)) continue;
      for (const auto& [name, f] : m.functions())
        for (std::size_t i = 0; i < table_length(k, f.arity); ++i) {
          auto t = tuple_at(i, f.arity, k);
          for (std::size_t p = 0; p < t.size(); ++p) {
            if (t[p] != x) continue;
            auto u = t;
            u[p] = y;
            if (!r.get(m.apply(name, t), m.apply(name, u))) return false;
          }
        }
      for (const auto& [name, rel] : m.relations())
        for (std::size_t i = 0; i < table_length(k, rel.arity); ++i) {
          auto t = tuple_at(i, rel.arity, k);
          for (std::size_t p = 0; p < t.size(); ++p) {
            if (t[p] != x) continue;
            auto u = t;
            u[p] = y;
            if (m.holds(name, t) != m.holds(name, u)) return false;
          }
        }
    }
  return true;
}

/// All partitions of {0..k-1} as class labels.
void partitions(std::size_t k, const std::function<void(const std::vector<Elem>&)>& visit) {
  std::vector<Elem> label(k, 0);
  std::function<void(std::size_t, Elem)> go = [&](std::size_t i, Elem used) {
    if (i == k) return visit(label);
    for (Elem c = 0; c <= used && c < k; ++c) {
      label[i] = c;
      go(i + 1, std::max<Elem>(used, c + 1));
    }
  };
  go(0, 0);
}

}  // namespace

TEST_CASE("pair relation basics") {
  auto id = PairRelation::identity(3);
  CHECK(id.is_equivalence());
  CHECK(id.count() == 3);
  CHECK(id.subset_of(PairRelation::full(3)));
  CHECK_FALSE(PairRelation::full(3).subset_of(id));
  PairRelation r(2);
  r.set(0, 1, true);
  CHECK_FALSE(r.is_equivalence());
}

TEST_CASE("indistinguishability is the coarsest congruence") {
  Signature s({{"f", 1}}, {{"P", 1}, {"R", 2}});
  std::mt19937_64 rng(3);
  for (int iter = 0; iter < 150; ++iter) {
    std::size_t k = 1 + iter % 4;
    FinModel m = testing::random_model(s, k, rng);
    auto fp = indist_fixpoint(m, {"f"}, {"P", "R"});
    CHECK(fp.relation.is_equivalence());
    CHECK(fp.iterations >= 1);
    CHECK(is_congruence(m, fp.relation));
    CHECK(apply_F(m, {"f"}, {"P", "R"}, fp.relation) == fp.relation);
    partitions(k, [&](const std::vector<Elem>& label) {
      PairRelation r(k);
      for (Elem x = 0; x < k; ++x)
        for (Elem y = 0; y < k; ++y) r.set(x, y, label[x] == label[y]);
      if (is_congruence(m, r)) CHECK(r.subset_of(fp.relation));
    });
  }
}

TEST_CASE("minimization preserves truth and does not grow") {
  Signature s({{"f", 1}}, {{"P", 1}});
  testing::FormulaGen gen(s, 8, 2);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 300; ++i) {
    Formula f = gen.formula(3);
    std::size_t k = 1 + i % 4;
    FinModel m = testing::random_model(s, k, rng);
    Env e = testing::random_env(2, k, rng);
    auto q = minimize_model(m, e, f);
    CHECK(q.model.size() <= k);
    CHECK(eval_formula(q.model, q.env, f) == eval_formula(m, e, f));
    auto again = minimize_model(q.model, q.env, f);
    CHECK(again.model.size() == q.model.size());
  }
}

TEST_CASE("two points with the same profile collapse") {
  FinModel m(3);
  m.set_relation("P", 1, {1, 1, 0});
  auto q = minimize_model(m, Env{{0, 1, 2}, 0}, Formula::atom("P", {var(0)}));
  CHECK(q.model.size() == 2);
  CHECK(q.env.prefix == std::vector<Elem>{0, 0, 1});
}
