#include <set>

#include "doctest.h"
#include "fsat/bpcp.hpp"

using namespace fsat;

namespace {

/// Pairs reachable by concatenating one or more cards, both sides no longer than `len`.
std::set<std::pair<BitString, BitString>> reachable(const BpcpInstance& r, std::size_t len) {
  std::set<std::pair<BitString, BitString>> out, frontier;
  for (const auto& c : r)
    if (c.top.size() <= len && c.bottom.size() <= len) frontier.insert({c.top, c.bottom});
  while (!frontier.empty()) {
    std::set<std::pair<BitString, BitString>> next;
    for (const auto& p : frontier) {
      if (!out.insert(p).second) continue;
      for (const auto& c : r) {
        BitString s = c.top + p.first, t = c.bottom + p.second;
        if (s.size() <= len && t.size() <= len && !out.count({s, t})) next.insert({s, t});
      }
    }
    frontier = std::move(next);
  }
  return out;
}

std::vector<BitString> strings_up_to(std::size_t len) {
  std::vector<BitString> out{""};
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i].size() < len) {
      out.push_back(out[i] + "0");
      out.push_back(out[i] + "1");
    }
  return out;
}

}  // namespace

TEST_CASE("instances are validated") {
  CHECK_THROWS_AS(validate_instance({{"01", "2"}}), InputError);
  CHECK_NOTHROW(validate_instance({{"", "1"}}));
}

TEST_CASE("derivability matches concatenation") {
  std::vector<BpcpInstance> instances{
      {{"1", "101"}, {"10", "00"}, {"011", "11"}}, {{"0", "01"}, {"", "1"}}, {{"", ""}, {"1", "11"}}, {{"01", "0"}}};
  auto all = strings_up_to(5);
  for (const auto& r : instances) {
    auto reach = reachable(r, 5);
    for (const auto& s : all)
      for (const auto& t : all) CHECK(derivable(r, s, t) == (reach.count({s, t}) == 1));
  }
}

TEST_CASE("shortest solutions") {
  BpcpInstance classic{{"1", "101"}, {"10", "00"}, {"011", "11"}};
  auto sol = solve_bpcp(classic, 12);
  REQUIRE(sol);
  CHECK(derivable(classic, *sol, *sol));
  for (const auto& s : strings_up_to(sol->size() - 1)) CHECK_FALSE(derivable(classic, s, s));
  CHECK(solve_bpcp({{"1", "0"}}, 8) == std::nullopt);
  CHECK(solve_bpcp({{"", ""}}, 3) == BitString(""));
  CHECK(solve_bpcp({{"0", "0"}, {"1", "1"}}, 3) == BitString("0"));
}

TEST_CASE("string indices") {
  for (const auto& s : strings_up_to(6)) CHECK(bn_string(bn_index(s)) == s);
  CHECK(bn_index("") == 1);
  CHECK(bn_index("1") == 3);
  CHECK(bn_index("10") == 6);
  CHECK(bn_string(0) == std::nullopt);
}

TEST_CASE("built models satisfy the encoding when a solution fits") {
  std::vector<BpcpInstance> solvable{{{"0", "0"}}, {{"1", "11"}, {"11", "1"}}, {{"01", "0"}, {"", "1"}}};
  for (const auto& r : solvable) {
    auto sol = solve_bpcp(r, 6);
    REQUIRE(sol);
    auto b = build_Bn(r, std::max<std::size_t>(sol->size(), 1));
    CHECK(eval_formula(b.model, b.env, encode_phi(r)));
    BitString got = extract_solution(r, b.model, b.env);
    CHECK(derivable(r, got, got));
  }
  BpcpInstance none{{"1", "0"}};
  auto b = build_Bn(none, 3);
  CHECK_FALSE(eval_formula(b.model, b.env, encode_phi(none)));
  CHECK_THROWS_AS(extract_solution(none, b.model, b.env), PreconditionError);
  CHECK_THROWS_AS(build_Bn(none, 11), ResourceError);
}

TEST_CASE("the encoding parses against its signature") {
  BpcpInstance r{{"1", "101"}, {"10", "00"}};
  Formula f = encode_phi(r);
  CHECK_NOTHROW(check_well_formed(f, bpcp_signature()));
  CHECK(free_vars(f).empty());
  CHECK_NOTHROW(check_well_formed(encode_phi({}), bpcp_signature()));
}
