#include <doctest.h>

#include "helpers.hpp"
#include "oscillint/criteria.hpp"
#include "oscillint/floquet.hpp"
#include "oscillint/integrator.hpp"
#include "oscillint/oracle.hpp"

using namespace oscillint;
using namespace oscillint::test;

TEST_SUITE("oracle") {
  TEST_CASE("decay rate") {
    const auto d = empirical_decay_rate(constant_eq(3, 2));
    CHECK(std::abs(d.rate - 1.0) <= 0.02);
    CHECK(d.residual <= 1e-6);
    CHECK(std::abs(empirical_decay_rate(constant_eq(0, 1)).rate) <= 1e-3);
    CHECK(std::abs(empirical_decay_rate(real_multipliers()).rate) <= 1e-3);
  }

  TEST_CASE("decay rate on overflow") {
    CHECK(empirical_decay_rate(constant_eq(-2, 2)).rate == doctest::Approx(-1.0).epsilon(0.02));
    const auto d = empirical_decay_rate(constant_eq(-10, 0));
    CHECK(d.method == "overflow");
    CHECK(d.rate == -INFINITY);
  }

  TEST_CASE("positivity scan") {
    CHECK(positivity_scan(constant_eq(3, 2), 10).positive);
    const auto osc = positivity_scan(constant_eq(0, 1), 10);
    CHECK_FALSE(osc.positive);
    CHECK(osc.t > osc.s);
    // With a = 2, X(., 0) vanishes near t = 3.5, so the scan reports false on [0, 30].
    const auto e1 = positivity_scan(damping_family(2.0), 30);
    CHECK_FALSE(e1.positive);
    CHECK(e1.t == doctest::Approx(3.507).epsilon(1e-3));
  }

  TEST_CASE("eq34 integral") {
    const auto r = check_eq34(constant_eq(3, 2), 10);
    CHECK(r.min >= -1e-8);
    CHECK(r.max <= 1 + 1e-8);
    bool seen = false;
    for (const auto& [t, v] : r.samples)
      if (std::abs(t - 5.0) < 1e-12) {
        seen = true;
        CHECK(std::abs(v - (1 - 2 * std::exp(-5.0) + std::exp(-10.0))) <= 1e-6);
      }
    CHECK(seen);
    const auto zero = check_eq34(constant_eq(1, 0), 10);
    CHECK(zero.min == 0.0);
    CHECK(zero.max == 0.0);
    const auto crit = check_eq34(constant_eq(2, 1), 10);
    for (const auto& [t, v] : crit.samples) CHECK(std::abs(v - (1 - std::exp(-t) * (1 + t))) <= 1e-6);
  }

  TEST_CASE("comparison") {
    // Pointwise ordering of x2 and X fails for a1 > a; see the README.
    const auto r = comparison_check(constant_eq(3, 2), constant_eq(4, 1), 10);
    CHECK(r.status == ComparisonStatus::Violated);
    CHECK(r.x1.worst <= kComparisonTol);
    CHECK(r.x2.worst > 0.03);
    CHECK(r.X.worst > kComparisonTol);
    CHECK(r.Y.worst <= kComparisonTol);
    const auto same = comparison_check(constant_eq(3, 2), constant_eq(3, 2), 10);
    CHECK(same.status == ComparisonStatus::Holds);
    CHECK(same.worst == 0.0);
    CHECK(comparison_check(constant_eq(3, 2), constant_eq(2, 1), 10).status == ComparisonStatus::Inapplicable);
  }

  TEST_CASE("comparison with equal damping holds") {
    const auto r = comparison_check(constant_eq(3, 2), constant_eq(3, 1), 10);
    CHECK(r.status == ComparisonStatus::Holds);
  }

  TEST_CASE("forced ordering") {
    const auto base = make_equation(c(3), c(2), c(1.0) + Expr::sine(0.5));
    const auto dom = make_equation(c(3), c(2), c(0.2));
    const auto r = comparison_check(base, dom, 10);
    CHECK(r.forced_checked);
    CHECK(r.forced.worst <= kComparisonTol);
  }

  TEST_CASE("integro-differential identities") {
    CHECK(lemma6_consistency(constant_eq(0, 1), 10) <= 1e-8);
    CHECK(lemma6_consistency(constant_eq(3, 2), 10) <= 1e-8);
    CHECK(lemma6_consistency(damping_family(2.0), 10) <= 1e-6);
  }

  TEST_CASE("bounded response") {
    const auto br = bounded_response(constant_eq(3, 2));
    CHECK(br.bounded);
    CHECK(br.max_second_half == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(bounded_response(constant_eq(0, 1)).bounded);
    CHECK_FALSE(bounded_response(constant_eq(-0.1, 1)).bounded);
  }

  TEST_CASE("property: positivity on one period implies the Green kernel and zero count") {
    const EquationSpec corpus[] = {constant_eq(3, 2), constant_eq(2, 1), make_equation(c(2.5), c(1) + Expr::sine(0.5))};
    const double omega = 1.0;
    for (const auto& eq : corpus) {
      REQUIRE(positivity_scan(eq, omega).positive);
      const GreenKernel g(eq, omega);
      for (int i = 1; i < 20; ++i)
        for (int j = 1; j < 20; ++j) CHECK(g(i / 20.0, j / 20.0) < 0.0);
      for (int k = 0; k < 16; ++k) {
        const double phi = pi * k / 16;
        const auto tr = solve_ivp(eq, 0.0, std::cos(phi), std::sin(phi), omega);
        CHECK(find_zeros(tr, true).size() <= 1);
      }
    }
  }

  TEST_CASE("property: positivity from the b+ comparison") {
    const auto signed_b = make_equation(c(3), Expr::sine(2.0));
    const auto plus = make_equation(c(3), Expr::pw_const({pi}, {1.0, 0.0}, 2 * pi) * Expr::sine(2.0));
    REQUIRE(cert_thm3(plus, 0, 10).passed());
    CHECK(positivity_scan(signed_b, 10).positive);
  }
}
