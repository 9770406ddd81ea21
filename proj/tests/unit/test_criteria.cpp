#include <doctest.h>

#include "helpers.hpp"
#include "oscillint/criteria.hpp"
#include "oscillint/error.hpp"
#include "oscillint/oracle.hpp"

using namespace oscillint;
using namespace oscillint::test;

namespace {

bool has(const CertifyReport& r, const std::string& id, Verdict v) {
  for (const auto& c : r.certificates)
    if (c.criterion == id) return c.verdict == v;
  return false;
}

}  // namespace

TEST_SUITE("criteria") {
  TEST_CASE("integral bounds, three cases") {
    const auto over = lemma2_bounds(3, 2);
    CHECK(over.kind == Lemma2Case::Overdamped);
    CHECK(over.K0 == doctest::Approx(0.5));
    CHECK(over.K1 == doctest::Approx(3.0));
    const auto under = lemma2_bounds(2, 2);
    CHECK(under.kind == Lemma2Case::Underdamped);
    CHECK(under.K0 == doctest::Approx(1.0));
    CHECK(under.K1 == doctest::Approx(2.0));
    const auto crit = lemma2_bounds(2, 1);
    CHECK(crit.kind == Lemma2Case::Critical);
    CHECK(crit.K0 == doctest::Approx(1.0));
    CHECK(crit.K1 == doctest::Approx(2.0));
    CHECK_THROWS_AS(lemma2_bounds(0, 1), Error);
    CHECK_THROWS_AS(lemma2_bounds(1, -1), Error);
  }

  TEST_CASE("C1 quadratic in lambda") {
    const auto a = cert_quadratic_lambda(constant_eq(3, 2), 50);
    CHECK(a.passed());
    CHECK(a.claim == Claim::ExpStable);
    const double lam = *a.witness("lambda");
    CHECK(lam * lam + 3 * lam + 2 <= 1e-9);
    CHECK(cert_quadratic_lambda(constant_eq(0, 1), 50).verdict == Verdict::Fail);
    const auto b = cert_quadratic_lambda(make_equation(c(2), c(0.75) + Expr::sine(0.1)), 50);
    CHECK(b.passed());
    CHECK(b.claim == Claim::ExpStable);
    CHECK(b.margin >= 0.15 - 1e-6);
  }

  TEST_CASE("C2 root separation") {
    const auto a = cert_levin(constant_eq(3, 2), 50);
    CHECK(a.passed());
    CHECK(a.claim == Claim::ExpStable);
    CHECK(*a.witness("nu0") <= -2.0 + 1e-9);
    CHECK(*a.witness("nu2") >= -1.0 - 1e-9);
    CHECK(*a.witness("nu2") < 0.0);
    CHECK(cert_levin(constant_eq(1, 1), 50).verdict == Verdict::Inapplicable);
    const auto b = cert_levin(make_equation(c(3), c(2) + Expr::sine(0.05)), 50);
    CHECK(b.passed());
    CHECK(b.claim == Claim::ExpStable);
  }

  TEST_CASE("T3 damping dominance") {
    const auto a = cert_thm3(constant_eq(3, 2), 0, 50);
    CHECK(a.passed());
    CHECK(a.claim == Claim::NonoscillationPositivity);
    CHECK(cert_thm3(constant_eq(1, 1), 0, 20).verdict == Verdict::Fail);
    const auto lin = cert_thm3(make_equation(Expr::poly({0.0, 1.0}), c(0.5)), 0, 10);
    CHECK(lin.passed());
    CHECK(lin.criterion == "T3_1");
  }

  TEST_CASE("C7 tail conditions") {
    CHECK_FALSE(cert_cor7(damping_family(2.0), 500).passed());
    const auto b = cert_cor7(make_equation(c(3), c(2) + Expr::sine(0.1), std::nullopt, 2 * pi), 500);
    CHECK(b.passed());
    CHECK(b.claim == Claim::NonoscillationPositivity);
    const auto summable = make_equation(c(1), Expr::pw_const({1.0, 2.0}, {0.5, 0.25, 0.0}));
    CHECK(cert_cor7(summable, 500).passed());
  }

  TEST_CASE("T7 tail bounds") {
    const auto a = cert_thm7(damping_family(2.0), 500);
    CHECK(a.passed());
    CHECK(a.claim == Claim::ExpStable);
    CHECK(*a.witness("alpha") == doctest::Approx(2.0));
    CHECK(*a.witness("beta") == doctest::Approx(0.01));
    CHECK(*a.witness("B") == doctest::Approx(1.99));
    CHECK(cert_thm7(damping_family(1.9), 500).verdict == Verdict::Fail);
    CHECK(cert_thm7(constant_eq(2, 0), 500).verdict == Verdict::Fail);
  }

  TEST_CASE("T8 constant pair") {
    const auto n = thm8_norms(near_constant(), 0);
    CHECK(thm8_margin(n, 10, 26) >= 1.0 - 1e-6);
    CHECK(cert_thm8(near_constant(), 0).passed());
    CHECK(cert_thm8(constant_eq(4, 3), 0).passed());
    const auto wide = make_equation(c(10), c(26) + Expr::cosine(6.0), std::nullopt, 2 * pi);
    CHECK(thm8_margin(thm8_norms(wide, 0), 10, 26) == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(cert_thm8(constant_eq(-1, 1), 0).verdict == Verdict::Inapplicable);
  }

  TEST_CASE("T9 natural witness") {
    CHECK(thm9_margin(1, 1, 3.3, 5.3, 1, 4.3) == doctest::Approx(1.0 - 4.0 / std::sqrt(16.2)));
    CHECK(thm9_margin(1, 1, 3.2, 5.2, 1, 4.2) < 0.0);
    CHECK(thm9_margin(2.9, 3.1, 2, 2, 3, 2) == doctest::Approx(0.7));
    CHECK(cert_thm9(stiffness_family(4.3), 0).passed());
    CHECK(cert_thm9(make_equation(c(3) + Expr::sine(0.1), c(2), std::nullopt, 2 * pi), 0).passed());
    CHECK(cert_thm9(constant_eq(1, -1), 0).verdict == Verdict::Inapplicable);
  }

  TEST_CASE("T10 periodic conditions") {
    const auto a = cert_thm10(make_equation(c(0), c(0.1), std::nullopt, 2 * pi));
    CHECK(a.passed());
    CHECK(a.claim == Claim::Bounded);
    CHECK(cert_thm10(make_equation(c(0), c(0.2), std::nullopt, 2 * pi)).verdict == Verdict::Fail);
    const auto b = cert_thm10(make_equation(c(2), c(1.5), std::nullopt, 1.0));
    CHECK(b.passed());
    CHECK(b.claim == Claim::TendsToZero);
    CHECK(cert_thm10(constant_eq(2, 1.5)).verdict == Verdict::Inapplicable);
  }

  TEST_CASE("witness u") {
    // u = a needs a(t) >= int_0^t b, so for (3, 2) it only holds up to t = 1.5.
    CHECK(verify_witness_u(constant_eq(3, 2), c(3), 1.5));
    CHECK_FALSE(verify_witness_u(constant_eq(3, 2), c(3), 50));
    CHECK(verify_witness_u(constant_eq(3, 2), c(1), 50));
    CHECK_FALSE(verify_witness_u(constant_eq(0, 1), c(0), 50));
  }

  TEST_CASE("property: witness u survives more damping and less stiffness") {
    const Expr u = c(1.0);
    REQUIRE(verify_witness_u(constant_eq(3, 2), u, 30));
    for (double da : {0.0, 0.5, 2.0})
      for (double db : {0.0, 0.3, 1.0}) {
        const auto eq = make_equation(c(3 + da) + Expr::sine(0.1 * da), c(2 - db) - Expr::cosine(0.1 * db));
        CHECK(verify_witness_u(eq, u, 30));
      }
  }

  TEST_CASE("certify_all") {
    const auto r2 = certify_all(near_constant());
    CHECK(r2.summary == Claim::ExpStable);
    CHECK(has(r2, "T8", Verdict::Pass));
    const auto osc = certify_all(make_equation(c(0), c(1)));
    CHECK(osc.summary == Claim::None);
    for (const auto& c : osc.certificates) CHECK(c.verdict != Verdict::Pass);
    const auto d = certify_all(constant_eq(3, 2));
    CHECK(has(d, "C1", Verdict::Pass));
    CHECK(has(d, "C2_LEVIN", Verdict::Pass));
    CHECK(d.summary == Claim::ExpStable);
    bool t3 = false, t9 = false;
    for (const auto& c : d.certificates) {
      t3 = t3 || (c.criterion.rfind("T3", 0) == 0 && c.passed());
      t9 = t9 || (c.criterion.rfind("T9", 0) == 0 && c.passed());
    }
    CHECK(t3);
    CHECK(t9);
    const auto only = certify_all(constant_eq(3, 2), {}, {"T7"});
    REQUIRE(only.certificates.size() == 1);
    CHECK(only.certificates[0].criterion == "T7");
    CHECK_THROWS_AS(certify_all(constant_eq(3, 2), {}, {"T99"}), Error);
  }

  TEST_CASE("property: soundness against the oracle") {
    const EquationSpec corpus[] = {damping_family(2.0), near_constant(), stiffness_family(4.3), constant_eq(3, 2), constant_eq(2, 1),
                                   make_equation(c(2), c(0.75) + Expr::sine(0.1), std::nullopt, 2 * pi)};
    for (const auto& eq : corpus) {
      const auto r = certify_all(eq);
      bool stable = false, positive = false;
      for (const auto& c : r.certificates) {
        stable = stable || (c.passed() && c.claim == Claim::ExpStable);
        positive = positive || (c.passed() && c.claim == Claim::NonoscillationPositivity);
      }
      if (stable) CHECK(empirical_decay_rate(eq).rate >= 1e-3);
      if (positive) CHECK(positivity_scan(eq, 10.0).positive);
    }
  }
}
