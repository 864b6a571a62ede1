#include <set>

#include "doctest.h"
#include "fsat/finite.hpp"

using namespace fsat;

TEST_CASE("find_duplicate scans in a fixed order") {
  auto eq = [](int a, int b) { return a == b; };
  CHECK(find_duplicate(std::vector<int>{1, 2, 1}, eq) == std::make_pair(std::size_t{0}, std::size_t{2}));
  CHECK_FALSE(find_duplicate(std::vector<int>{1, 2, 3}, eq));
  auto parity = [](int a, int b) { return a % 2 == b % 2; };
  CHECK(find_duplicate(std::vector<int>{1, 2, 3, 4}, parity) == std::make_pair(std::size_t{0}, std::size_t{2}));
  for (int mask = 0; mask < 256; ++mask) {
    std::vector<int> l;
    for (int i = 0; i < 8; ++i) l.push_back((mask >> i & 1) ? i : i % 3);
    auto d = find_duplicate(l, eq);
    bool any = false;
    for (std::size_t i = 0; i < l.size(); ++i)
      for (std::size_t j = i + 1; j < l.size(); ++j) any = any || l[i] == l[j];
    CHECK(d.has_value() == any);
  }
}

TEST_CASE("finite quotient") {
  auto q = finite_quotient(std::vector<int>{0, 1, 2}, [](int a, int b) { return a % 2 == b % 2; });
  CHECK(q.size() == 2);
  CHECK(q.class_of(0) == q.class_of(2));
  CHECK(q.class_of(1) != q.class_of(0));
  for (std::size_t c = 0; c < q.size(); ++c) CHECK(q.class_of(q.repr(c)) == c);
  CHECK(finite_quotient(std::vector<int>{4, 5, 6}, [](int a, int b) { return a == b; }).size() == 3);
  CHECK(finite_quotient(std::vector<int>{4, 5, 6}, [](int, int) { return true; }).size() == 1);
  auto exact = finite_quotient(std::vector<int>{4, 5}, [](int a, int b) { return a == b; });
  CHECK_THROWS_AS(exact.class_of(9), PreconditionError);
}

TEST_CASE("weak powerset enumerates each vector once") {
  for (std::size_t n : {0u, 2u, 3u}) {
    WeakPowerset w(n);
    std::set<std::vector<std::uint8_t>> seen;
    while (w.next()) seen.insert(w.current());
    CHECK(seen.size() == (std::size_t{1} << n));
    CHECK(w.count() == (std::uint64_t{1} << n));
  }
  CHECK_THROWS(WeakPowerset(WeakPowerset::kMaxSize + 1));
}

TEST_CASE("cantor pairing") {
  CHECK(cantor_pair(0, 0) == 0);
  CHECK(cantor_pair(1, 0) == 1);
  CHECK(cantor_pair(0, 1) == 2);
  for (std::uint64_t x = 0; x < 50; ++x)
    for (std::uint64_t y = 0; y < 50; ++y) CHECK(cantor_unpair(cantor_pair(x, y)) == std::make_pair(x, y));
  std::set<std::uint64_t> seen;
  for (std::uint64_t x = 0; x < 1000; ++x)
    for (std::uint64_t y = 0; y < 1000; ++y) seen.insert(cantor_pair(x, y));
  CHECK(seen.size() == 1000000);
}
