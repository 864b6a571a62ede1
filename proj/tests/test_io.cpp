#include "doctest.h"
#include "fsat/io.hpp"

using namespace fsat;

namespace {

InputError::Kind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.kind();
  }
  return InputError::Kind::Syntax;
}

}  // namespace

TEST_CASE("signature and model round trips") {
  Signature s({{"c", 0}, {"g", 2}}, {{"R", 2}, {"A", 0}});
  CHECK(sig_from_json(sig_to_json(s)) == s);
  FinModel m(2);
  m.set_function("c", 0, {1});
  m.set_function("g", 2, {0, 1, 1, 0});
  m.set_relation("R", 2, {1, 0, 0, 1});
  m.set_relation("A", 0, {1});
  CHECK(model_from_json(model_to_json(m), &s) == m);
  CHECK(model_from_json(model_to_json(m)) == m);
  Env e{{1, 0}, 1};
  CHECK(env_from_json(env_to_json(e)) == e);
  CHECK(env_from_json(parse_json("[1, 0]")).prefix == std::vector<Elem>{1, 0});
}

TEST_CASE("model tables accept booleans") {
  auto m = model_from_json(parse_json(R"({"size": 2, "relations": {"P": [true, false]}})"));
  CHECK(m.holds("P", {0}));
  CHECK_FALSE(m.holds("P", {1}));
}

TEST_CASE("format errors") {
  using K = InputError::Kind;
  CHECK(kind_of([] { parse_json("{"); }) == K::Format);
  CHECK(kind_of([] { model_from_json(parse_json(R"({"size": 0})")); }) == K::Format);
  CHECK(kind_of([] { model_from_json(parse_json(R"({"size": 2, "relations": {"P": [1, 0, 1]}})")); }) == K::Format);
  CHECK(kind_of([] { sig_from_json(parse_json(R"({"format": 2})")); }) == K::Format);
  Signature s({}, {{"P", 1}});
  CHECK(kind_of([&] { model_from_json(parse_json(R"({"size": 2})"), &s); }) == K::Format);
  CHECK(kind_of([] { read_json_file("/nonexistent/file.json"); }) == K::Format);
  CHECK(kind_of([] { heap_from_json(parse_json("[[1, [null, 2]], [1, [null, 3]]]")); }) == K::Format);
}

TEST_CASE("bpcp, heap and stack round trips") {
  BpcpInstance r{{"1", "101"}, {"", "0"}};
  CHECK(bpcp_from_json(bpcp_to_json(r)) == r);
  CHECK(bpcp_from_json(parse_json(R"({"cards": [["1", "0"]]})")) == BpcpInstance{{"1", "0"}});
  Heap h{{1, std::nullopt, 2}, {2, 1, std::nullopt}};
  CHECK(heap_from_json(heap_to_json(h)) == h);
  Stack st{{1, std::nullopt}, 2};
  CHECK(stack_from_json(stack_to_json(st)) == st);
}
