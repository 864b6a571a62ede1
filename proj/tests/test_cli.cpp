#include <sys/wait.h>

#include <array>
#include <cstdio>

#include "doctest.h"
#include "fsat/io.hpp"

using namespace fsat;

namespace {

struct Run {
  int code = -1;
  Json out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

Run run(const std::vector<std::string>& args) {
  std::string cmd = FSAT_CLI_PATH;
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string text;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) text.append(buf.data(), n);
  int status = pclose(p);
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = Json::parse(text, nullptr, false);
  return r;
}

const std::string kSig = R"({"relations": {"R": 2}})";

}  // namespace

TEST_CASE("check and solve") {
  auto c = run({"check", "--sig", kSig, "--formula", "(R x x)", "--model",
                R"({"size": 2, "relations": {"R": [1, 0, 0, 0]}})", "--env", "[0]"});
  CHECK(c.code == 0);
  CHECK(c.out["format"] == 1);
  CHECK(c.out["definitive"] == true);
  CHECK(c.out["result"] == "sat");
  auto s = run({"solve", "--sig", kSig, "--formula", "(and (forall x (not (R x x))) (exists x (exists y (R x y))))",
                "--max-size", "3"});
  CHECK(s.code == 0);
  CHECK(s.out["size"] == 2);
  auto u = run({"solve", "--sig", kSig, "--formula", "(and (R x y) (not (R x y)))", "--max-size", "2"});
  CHECK(u.code == 1);
  CHECK(u.out["definitive"] == false);
}

TEST_CASE("exit codes for bad input and guards") {
  CHECK(run({"check", "--sig", kSig, "--formula", "(R x", "--model", R"({"size": 1})"}).code == 2);
  CHECK(run({"solve", "--sig", kSig, "--formula", "(Q x)"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"solve", "--sig", kSig, "--formula", "(R x y)", "--max-candidates", "1"}).code == 3);
  auto bad = run({"solve", "--sig", "{", "--formula", "(R x y)"});
  CHECK(bad.code == 2);
  CHECK(bad.out.contains("error"));
}

TEST_CASE("monadic, classify and passes") {
  auto m = run({"decide-monadic", "--sig", R"({"functions": {"g": 1}, "relations": {"P": 1}})", "--formula",
                "(and (P x) (not (P (g x))))"});
  CHECK(m.code == 0);
  CHECK(m.out["result"] == "sat");
  auto c = run({"classify", "--sig", R"({"functions": {"g": 2}, "relations": {"U": 1}})"});
  CHECK(c.code == 0);
  CHECK(c.out.dump().find("\"b\"") != std::string::npos);
  auto p = run({"pass", "remove_constants", "--sig", R"({"functions": {"a": 0}, "relations": {"R": 2}})",
                "--formula", "(R a a)"});
  CHECK(p.code == 0);
  CHECK(p.out["step"]["name"] == "remove_constants");
  auto pl = run({"pipeline", "to-binary", "--sig", kSig, "--formula", "(R x y)"});
  CHECK(pl.code == 0);
  CHECK(pl.out["steps"].size() == 7);
}

TEST_CASE("bpcp and seplog") {
  auto s = run({"bpcp", "solve", "--instance", R"([["1", "101"], ["10", "00"], ["011", "11"]])", "--max-len", "12"});
  CHECK(s.code == 0);
  auto n = run({"bpcp", "solve", "--instance", R"([["1", "0"]])", "--max-len", "5"});
  CHECK(n.code == 1);
  auto b = run({"bpcp", "build-model", "--instance", R"([["0", "0"]])", "--n", "1"});
  CHECK(b.code == 0);
  auto e = run({"seplog", "encode", "--sig", kSig, "--formula", "(forall x (R x x))"});
  CHECK(e.code == 0);
  auto k = run({"seplog", "check", "--formula", "(hooks #0 null null)", "--heap", "[[1, [null, null]]]", "--stack",
                "[1]"});
  CHECK(k.code == 0);
  CHECK(k.out["definitive"] == true);
}
