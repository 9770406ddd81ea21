#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "oscillint/error.hpp"
#include "oscillint/expr.hpp"
#include "oscillint/quadrature.hpp"

using namespace oscillint;
using namespace oscillint::test;

TEST_SUITE("coefficients") {
  TEST_CASE("eval") {
    CHECK((c(1.0) + Expr::sine(0.99))(pi / 2) == doctest::Approx(1.99).epsilon(1e-15));
    CHECK(c(26.0)(7.3) == 26.0);
    CHECK((c(10.0) + Expr::sine(1.0))(0.0) == 10.0);
    CHECK(Expr::poly({1.0, 2.0, 3.0})(2.0) == 17.0);
    CHECK(Expr::cosine(2.0, 3.0, 0.5)(1.0) == doctest::Approx(2.0 * std::cos(3.5)));
  }

  TEST_CASE("breakpoints need a side") {
    const Expr p = Expr::pw_const({1.0, 2.0}, {0.0, 5.0, -1.0});
    CHECK(p(0.5) == 0.0);
    CHECK(p(1.5) == 5.0);
    CHECK_THROWS_AS(p(1.0), Error);
    CHECK(p(1.0, Side::Left) == 0.0);
    CHECK(p(1.0, Side::Right) == 5.0);
    const auto sides = eval_sides(p, 2.0);
    CHECK(sides.left == 5.0);
    CHECK(sides.right == -1.0);
    CHECK(p.breakpoints(0.0, 10.0) == std::vector<double>{1.0, 2.0});
  }

  TEST_CASE("periodic piecewise constant repeats") {
    const Expr p = Expr::pw_const({1.0}, {2.0, 3.0}, 2.0);
    CHECK(p(0.5) == 2.0);
    CHECK(p(2.5) == 2.0);
    CHECK(p(3.5) == 3.0);
    CHECK(p.breakpoints(0.0, 4.5) == std::vector<double>{0.0, 1.0, 2.0, 3.0, 4.0});
  }

  TEST_CASE("quotient rejects a vanishing denominator") {
    CHECK_THROWS_AS(Expr::quot(c(1.0), Expr::sine(1.0)), Error);
  }

  TEST_CASE("derivative") {
    const Expr d1 = derivative(c(10.0) + Expr::sine(1.0));
    for (double t : {0.0, 0.7, 2.0}) CHECK(d1(t) == doctest::Approx(std::cos(t)));
    CHECK(derivative(c(5.0))(3.0) == 0.0);
    const Expr d3 = derivative(Expr::poly({0.0, 2.0, 1.0}));
    CHECK(d3(1.5) == doctest::Approx(5.0));
    const Expr q = Expr::quot(Expr::sine(1.0), c(2.0) + Expr::cosine(1.0));
    const Expr dq = derivative(q);
    for (double t : {0.3, 1.1, 4.0}) {
      const double h = 1e-5;
      CHECK(dq(t) == doctest::Approx((q(t + h) - q(t - h)) / (2 * h)).epsilon(1e-8));
    }
  }

  TEST_CASE("integrate") {
    CHECK(integrate(Expr::sine(1.0), 0.0, pi) == doctest::Approx(2.0).epsilon(1e-12));
    const auto rm = real_multipliers();
    CHECK(std::abs(integrate(rm.a, 0.0, pi) - pi) <= 1e-10);
    CHECK(integrate(c(10.0) + Expr::sine(1.0), 0.0, 2 * pi) == doctest::Approx(20 * pi).epsilon(1e-14));
    const Expr p = Expr::pw_const({1.0}, {2.0, -1.0});
    CHECK(integrate(p, 0.0, 3.0) == doctest::Approx(0.0).scale(1.0));
  }

  TEST_CASE("adaptive quadrature reports exhaustion") {
    auto f = [](double t) { return std::sin(1.0 / (t + 1e-9)); };
    try {
      integrate_adaptive(f, 0.0, 1.0, 1e-14, {}, 20);
      FAIL("expected a QuadratureError");
    } catch (const QuadratureError& e) {
      CHECK(std::isfinite(e.estimate()));
      CHECK(e.error_bound() > 1e-14);
    }
  }

  TEST_CASE("ess_bounds") {
    const auto b1 = ess_bounds(c(1.0) + Expr::sine(0.99), 0.0, 2 * pi);
    CHECK(b1.inf == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(b1.sup == doctest::Approx(1.99).epsilon(1e-12));
    const auto b2 = ess_bounds(c(26.0), 3.0, 9.0);
    CHECK(b2.inf == 26.0);
    CHECK(b2.sup == 26.0);
    CHECK(b2.rigorous);
    const Expr a = c(2.0);
    const auto b3 = ess_bounds(c(2.0) - Expr::scale(0.25, a * a), 0.0, 1.0);
    CHECK(b3.inf == doctest::Approx(1.0));
    CHECK(b3.sup == doctest::Approx(1.0));
  }

  TEST_CASE("positive and negative parts") {
    const auto s = positive_part(Expr::sine(1.0));
    CHECK(s.positive(3 * pi / 2) == 0.0);
    CHECK(s.positive(pi / 2) == 1.0);
    const auto m = positive_part(c(-3.0));
    CHECK(m.positive(1.0) == 0.0);
    CHECK(m.negative(1.0) == 3.0);
  }

  TEST_CASE("validate_period") {
    CHECK(validate_period(Expr::sine(1.0), 2 * pi, 64));
    CHECK_FALSE(validate_period(Expr::sine(1.0), pi, 64));
    CHECK(validate_period(c(1.0) + Expr::sine(0.99), 2 * pi, 64));
  }

  TEST_CASE("property: parts recombine, integrals add, bounds nest") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    for (int k = 0; k < 20; ++k) {
      const Expr e = c(U(rng)) + Expr::sine(U(rng), 1.0 + std::abs(U(rng)), U(rng)) +
                     Expr::prod({Expr::cosine(1.0, 0.5), Expr::poly({U(rng), 0.1 * U(rng)})});
      const auto parts = positive_part(e);
      const double lo = 0.0, hi = 6.0 + std::abs(U(rng));
      const double mid = lo + (hi - lo) * (0.5 + 0.1 * U(rng));
      for (double t : {0.1, 1.3, 2.9, 5.5}) CHECK(parts.positive(t) - parts.negative(t) == e(t));
      const double whole = integrate(e, lo, hi);
      CHECK(std::abs(integrate(e, lo, mid) + integrate(e, mid, hi) - whole) <= 2e-10);
      const double h = 1e-4;
      const double fd = (integrate(e, lo, mid + h) - integrate(e, lo, mid - h)) / (2 * h);
      CHECK(fd == doctest::Approx(e(mid)).epsilon(1e-6).scale(1.0));
      // Sampled bounds: nesting holds up to the grid resolution.
      const auto outer = ess_bounds(e, lo, hi);
      const auto inner = ess_bounds(e, mid - 0.5, mid + 0.5);
      CHECK(outer.inf <= inner.inf + 1e-7);
      CHECK(inner.sup <= outer.sup + 1e-7);
    }
  }
}
