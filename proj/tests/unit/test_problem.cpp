#include <doctest.h>

#include <filesystem>

#include "helpers.hpp"
#include "oscillint/error.hpp"
#include "oscillint/json_format.hpp"
#include "oscillint/problem.hpp"
#include "oscillint/report.hpp"

using namespace oscillint;
using namespace oscillint::test;

namespace {

std::string problem_path(const std::string& name) { return std::string(OSCILLINT_TEST_PROBLEMS) + "/" + name; }

std::string schema_error(const std::string& text) {
  try {
    parse_problem_text(text);
  } catch (const SchemaError& e) {
    return e.what();
  }
  return "no error";
}

}  // namespace

TEST_SUITE("problem") {
  TEST_CASE("pi strings") {
    CHECK(parse_real(Json("2*pi"), "/x") == doctest::Approx(2 * pi).epsilon(1e-15));
    CHECK(parse_real(Json("pi"), "/x") == doctest::Approx(pi).epsilon(1e-15));
    CHECK(parse_real(Json("-pi/2"), "/x") == doctest::Approx(-pi / 2).epsilon(1e-15));
    CHECK(parse_real(Json("1.5pi"), "/x") == doctest::Approx(1.5 * pi).epsilon(1e-15));
    CHECK(parse_real(Json(0.25), "/x") == 0.25);
    CHECK_THROWS_AS(parse_real(Json("tau"), "/x"), SchemaError);
  }

  TEST_CASE("files round-trip through serialize") {
    for (const auto& entry : std::filesystem::directory_iterator(OSCILLINT_TEST_PROBLEMS)) {
      const auto name = entry.path().filename().string();
      if (name.rfind("bad_", 0) == 0) continue;
      CAPTURE(name);
      const auto p = parse_problem(entry.path().string());
      const auto text = serialize(p);
      const auto q = parse_problem_text(text);
      CHECK(p == q);
      CHECK(serialize(q) == text);
    }
  }

  TEST_CASE("built equation matches the hand-written one") {
    const auto p = parse_problem(problem_path("damping_family.json"));
    const auto eq = p.build();
    const auto ref = damping_family(2.0);
    for (double t : {0.0, 0.7, 3.1, 9.9}) {
      CHECK(eq.a(t) == ref.a(t));
      CHECK(eq.b(t) == ref.b(t));
    }
    REQUIRE(eq.period);
    CHECK(*eq.period == doctest::Approx(2 * pi).epsilon(1e-15));
    CHECK(p.build({{"a", 1.9}}).a(0.0) == 1.9);
    CHECK_THROWS_AS(p.build({{"nope", 1.0}}), Error);
  }

  TEST_CASE("quotient form of the pi-periodic example") {
    const auto eq = parse_problem(problem_path("real_multipliers.json")).build();
    const auto ref = real_multipliers();
    for (double t : {0.1, 1.0, 2.5}) {
      CHECK(eq.a(t) == doctest::Approx(ref.a(t)).epsilon(1e-14));
      CHECK(eq.b(t) == doctest::Approx(ref.b(t)).epsilon(1e-14));
    }
  }

  TEST_CASE("schema errors carry a JSON pointer") {
    CHECK(schema_error(R"({"equation": {"a": 1, "b": 1, "period": -1}})") == "/equation/period: must be positive");
    CHECK(schema_error(R"({"equation": {"a": 1, "b": {"kind": "sin", "frequency": 2}}})") ==
          "/equation/b/frequency: unknown key");
    CHECK(schema_error(R"({"equation": {"a": 1}})") == "/equation/b: missing required key");
    CHECK(schema_error(R"({"equation": {"a": 1, "b": 1}, "extra": 0})") == "/extra: unknown key");
    CHECK(schema_error(R"({"equation": {"a": {"kind": "param", "name": "k"}, "b": 1}})") ==
          "/equation/a/name: undeclared parameter");
    CHECK(schema_error(R"({"equation": {"a": {"kind": "quot", "args": [1]}, "b": 1}})") ==
          "/equation/a/args: quot takes exactly two args");
    CHECK(schema_error(R"({"equation": {"a": 1, "b": 1}, "config": {"grid": 5}})").rfind("/config/grid: ", 0) == 0);
    CHECK(schema_error(R"({"equation": {"a": 1, "b": 1}, "config": {"tol": 1}})").rfind("/config/tol: ", 0) == 0);
    CHECK(schema_error(R"({"equation": {"a": 1, "b": 1},)").find("invalid JSON") != std::string::npos);
    CHECK(schema_error(R"({"equation": {"a": {"kind": "pw_const", "breaks": [2, 1], "values": [1, 2, 3]}, "b": 1}})") ==
          "/equation/a/breaks/1: breaks must increase");
  }

  TEST_CASE("files in the corpus that must fail") {
    CHECK_THROWS_AS(parse_problem(problem_path("bad_period.json")), SchemaError);
    CHECK_THROWS_AS(parse_problem(problem_path("bad_key.json")), SchemaError);
    try {
      parse_problem(problem_path("missing.json"));
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Io);
    }
  }

  TEST_CASE("config defaults and overrides") {
    const auto p = parse_problem_text(R"({"equation": {"a": 3, "b": 2}, "config": {"tol": 1e-9, "horizon": 80}})");
    CHECK(p.config.tol == 1e-9);
    CHECK(p.config.horizon == 80);
    CHECK(p.config.grid == 50);
    CHECK(p.config.cert().tol == 1e-9);
  }

  TEST_CASE("sweep values include both ends") {
    SweepSpec s{"a", 1.5, 2.5, 11, {}};
    CHECK(s.value(0) == 1.5);
    CHECK(s.value(10) == 2.5);
    CHECK(s.value(5) == doctest::Approx(2.0).epsilon(1e-15));
  }

  TEST_CASE("commands") {
    const auto p = parse_problem(problem_path("oscillator.json"));
    const auto sim = run_command("simulate", p);
    CHECK(sim.output.rfind("t,x,xdot\n", 0) == 0);
    const auto zeros = Json::parse(sim.zeros);
    REQUIRE(zeros.size() >= 1);
    CHECK(zeros[0]["t"].get<double>() == doctest::Approx(pi).epsilon(1e-10));
    CHECK_THROWS_AS(run_command("sweep", p), Error);
    CHECK_THROWS_AS(run_command("dance", p), Error);
    const auto cert = Json::parse(run_command("certify", p).output);
    CHECK(cert["summary"]["claim"] == "UNDECIDED");
  }

  TEST_CASE("non-finite numbers print as strings") {
    Json doc{{"a", INFINITY}, {"b", -INFINITY}, {"c", NAN}, {"d", 0.1}};
    const auto text = format_json(doc);
    CHECK(text.find(R"("a": "inf")") != std::string::npos);
    CHECK(text.find(R"("-inf")") != std::string::npos);
    CHECK(text.find(R"("nan")") != std::string::npos);
    CHECK(text.find("0.10000000000000001") != std::string::npos);
  }
}
