#include <doctest.h>

#include <algorithm>

#include "nahmlab/suite.hpp"

using namespace nahmlab;

namespace {

const char* kSmall = R"(suite small
description a few quick checks
depth 20

# comment line
euler: J(1) == P(+1;1;inf)
theta3: theta3 == J(2)^5/(J(1)^2*J(4)^2) @ 40
wrong: J(1) == J(2) expect=fail
claims-wrong: J(1) == J(1) expect=fail
bound: builtin sturm(2; 200; 2401)
)";

const CheckResult& find(const VerificationReport& r, const std::string& id) {
  auto it = std::find_if(r.checks.begin(), r.checks.end(), [&](const CheckResult& c) { return c.id == id; });
  REQUIRE(it != r.checks.end());
  return *it;
}

}  // namespace

TEST_CASE("suite files parse") {
  auto s = parse_suite(kSmall);
  CHECK(s.id == "small");
  CHECK(s.description == "a few quick checks");
  CHECK(s.depth == Exponent(20));
  REQUIRE(s.checks.size() == 5);
  CHECK(s.checks[1].depth == Exponent(40));
  CHECK(s.checks[2].expect_fail);
  CHECK(s.checks[4].builtin);
  CHECK(s.checks[4].name == "sturm");
  CHECK(s.checks[4].args == std::vector<std::string>{"2", "200", "2401"});
  auto deep = parse_suite("suite d\nx: J(1) == J(1) @ 10 deep=300\n");
  CHECK(deep.checks[0].deep == Exponent(300));
}

TEST_CASE("suite header and id errors") {
  CHECK_THROWS_AS(parse_suite("x: J(1) == J(1)\n"), ParseError);
  CHECK_THROWS_AS(parse_suite("suite a\nx: J(1) == J(1)\nx: J(2) == J(2)\n"), ParseError);
  CHECK_THROWS_AS(parse_suite("suite a\nbad id: J(1) == J(1)\n"), ParseError);
  CHECK_THROWS_AS(parse_suite("suite a\ndepth banana\n"), ParseError);
  CHECK_THROWS_AS(parse_suite("suite a\nx: J(1) == J(1) @ q\n"), ParseError);
}

TEST_CASE("running a suite") {
  RunOptions o;
  auto r = run_suite(parse_suite(kSmall), o);
  CHECK(r.suite == "small");
  CHECK(r.checks.size() == 5);
  CHECK(std::is_sorted(r.checks.begin(), r.checks.end(), [](auto& a, auto& b) { return a.id < b.id; }));
  CHECK(find(r, "euler").status == "pass");
  CHECK(find(r, "theta3").depth == Exponent(40));
  CHECK(find(r, "bound").status == "pass");
  // a designed mismatch passes and keeps its mismatch
  const auto& w = find(r, "wrong");
  CHECK(w.status == "pass");
  REQUIRE(w.mismatch);
  CHECK(w.mismatch->exponent == "1");
  // an identity that holds where a mismatch was expected fails
  CHECK(find(r, "claims-wrong").status == "fail");
  CHECK(find(r, "claims-wrong").mismatch);
  CHECK_FALSE(r.ok());
  CHECK(r.passed() == 4);
}

TEST_CASE("failures and errors are per check") {
  auto s = parse_suite("suite e\nbad: J(1 == J(1)\nnoeq: J(1)\nfine: J(1) == J(1)\nfails: J(1) == J(3)\n");
  auto r = run_suite(s, RunOptions{});
  CHECK(find(r, "bad").status == "error");
  CHECK(find(r, "bad").message.find("lhs") != std::string::npos);
  CHECK(find(r, "noeq").status == "error");
  CHECK(find(r, "fine").status == "pass");
  const auto& f = find(r, "fails");
  CHECK(f.status == "fail");
  REQUIRE(f.mismatch);
  CHECK(f.mismatch->exponent == "1");
  CHECK(f.mismatch->lhs == "-1");
  CHECK(f.mismatch->rhs == "0");
  auto unknown = run_suite(parse_suite("suite u\nx: builtin no-such-thing(1)\n"), RunOptions{});
  CHECK(unknown.checks[0].status == "error");
}

TEST_CASE("overrides and rings") {
  auto s = parse_suite(kSmall);
  RunOptions o;
  o.depth = Exponent(10);
  auto r = run_suite(s, o);
  for (const auto& c : r.checks)
    if (c.id != "bound") CHECK(c.depth == Exponent(10));
  for (const char* ring : {"root5", "gauss", "complex"}) {
    CAPTURE(ring);
    CHECK(check_identity("J(1)^2", "J(2)*J(8)^5/(J(4)^2*J(16)^2) - 2*qpow(1)*J(2)*J(16)^2/J(8)", 30, ring, 128).pass);
    CHECK_FALSE(check_identity("J(1)", "J(2)", 10, ring, 128).pass);
  }
  CHECK_THROWS(check_identity("J(1)", "J(1)", 10, "quaternion", 128));
}

TEST_CASE("reports are deterministic") {
  auto s = parse_suite(kSmall);
  RunOptions a, b;
  b.jobs = 1;
  auto ja = to_json(run_suite(s, a), false).dump();
  auto jb = to_json(run_suite(s, b), false).dump();
  CHECK(ja == jb);
  CHECK(ja.find("elapsed-ms") == std::string::npos);
  CHECK(to_json(run_suite(s, a))["checks"][0].contains("elapsed-ms"));
  RunOptions c;
  c.depth = Exponent(30);
  CHECK(config_hash(s, a) == config_hash(s, b));
  CHECK(config_hash(s, a) != config_hash(s, c));
  CHECK(config_hash(s, a).size() == 16);
  auto text = to_text(run_suite(s, a));
  CHECK(text.find("claims-wrong") != std::string::npos);
}

TEST_CASE("shipped suites") {
  auto ids = list_suites();
  for (const char* id : {"rogers", "tadpole-sums", "relations", "partial-theta", "g-basis", "decomposition",
                         "theta-relations", "residue-thetas", "second-proof", "wronskian", "tadpole-conjecture",
                         "tba-obstruction", "constant-term", "transforms"})
    CHECK(std::find(ids.begin(), ids.end(), id) != ids.end());
  CHECK_THROWS_AS(load_suite("nonexistent"), DomainError);
  CHECK_THROWS_AS(run_suite("nonexistent", RunOptions{}), DomainError);
  for (const auto& id : ids) CHECK_NOTHROW(load_suite(id));
  auto r = run_suite("rogers", RunOptions{});
  CHECK(r.ok());
  CHECK(r.checks.size() == 7);
}

TEST_CASE("builtin table") {
  for (const char* n : {"sturm", "leading", "tba", "obstruction", "transform", "closure", "conjecture", "ct-replay"})
    CHECK(find_builtin(n) != nullptr);
  CHECK(find_builtin("nope") == nullptr);
  CHECK(builtin_names().size() >= 15);
}
