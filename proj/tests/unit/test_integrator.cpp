#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "oscillint/error.hpp"
#include "oscillint/integrator.hpp"
#include "oscillint/quadrature.hpp"

using namespace oscillint;
using namespace oscillint::test;

namespace {

double max_error(const Trajectory& tr, double lo, double hi, double (*exact)(double)) {
  double err = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double t = lo + (hi - lo) * i / 2000.0;
    err = std::max(err, std::abs(tr.x(t) - exact(t)));
  }
  return err;
}

}  // namespace

TEST_SUITE("integrator") {
  TEST_CASE("solve_ivp closed forms") {
    const auto osc = solve_ivp(constant_eq(0, 1), 0.0, 0.0, 1.0, 20.0);
    CHECK(max_error(osc, 0.0, 20.0, [](double t) { return std::sin(t); }) <= 1e-8);
    const auto rm = solve_ivp(real_multipliers(), 0.0, 0.0, 1.0, 20.0);
    CHECK(max_error(rm, 0.0, 20.0, [](double t) { return std::sin(t); }) <= 1e-8);
    const auto d = solve_ivp(constant_eq(3, 2), 0.0, 1.0, -1.0, 10.0);
    CHECK(max_error(d, 0.0, 10.0, [](double t) { return std::exp(-t); }) <= 1e-8);
  }

  TEST_CASE("dense output reproduces nodes") {
    const auto tr = solve_ivp(damping_family(2.0), 0.0, 1.0, 0.0, 15.0);
    const auto& sol = tr.solution();
    for (std::size_t k = 0; k + 1 < sol.t.size(); k += 7) {
      CHECK(tr.state(sol.t[k])[0] == sol.y[k][0]);
      CHECK(sol.t[k + 1] > sol.t[k]);
    }
  }

  TEST_CASE("steps never straddle a breakpoint") {
    const Expr b = Expr::pw_const({1.234, 2.5}, {1.0, 4.0, 2.0});
    const auto tr = solve_ivp(make_equation(c(0.5), b), 0.0, 1.0, 0.0, 4.0);
    const auto& t = tr.solution().t;
    for (double bp : {1.234, 2.5}) CHECK(std::find(t.begin(), t.end(), bp) != t.end());
  }

  TEST_CASE("halving tol reduces the error") {
    struct Case {
      EquationSpec eq;
      double x0, v0, T;
      double (*exact)(double);
    };
    const Case cases[] = {
        {constant_eq(0, 1), 0.0, 1.0, 20.0, [](double t) { return std::sin(t); }},
        {real_multipliers(), 0.0, 1.0, 20.0, [](double t) { return std::sin(t); }},
        {constant_eq(3, 2), 1.0, -1.0, 10.0, [](double t) { return std::exp(-t); }},
    };
    for (const auto& k : cases) {
      SolveOptions opt;
      opt.max_step = 100.0;  // let the error controller alone set the step
      opt.tol = 1e-6;
      const double coarse = max_error(solve_ivp(k.eq, 0.0, k.x0, k.v0, k.T, opt), 0.0, k.T, k.exact);
      opt.tol = 5e-7;
      const double fine = max_error(solve_ivp(k.eq, 0.0, k.x0, k.v0, k.T, opt), 0.0, k.T, k.exact);
      CHECK(coarse / fine >= 2.0);
    }
  }

  TEST_CASE("overflow and growth errors") {
    CHECK_THROWS_AS(solve_ivp(constant_eq(-40, 0), 0.0, 1.0, 1.0, 100.0), SolverError);
    CHECK_THROWS_AS(solve_ivp(constant_eq(1, 1), 1.0, 1.0, 0.0, 0.5), Error);
  }

  TEST_CASE("fundamental system and Wronskian") {
    const auto fp = fundamental_system(constant_eq(0, 1), 0.0, pi);
    for (double t : {0.5, 2.0, pi}) {
      CHECK(fp.x1.x(t) == doctest::Approx(std::cos(t)).scale(1.0).epsilon(1e-9));
      CHECK(fp.x2.x(t) == doctest::Approx(std::sin(t)).scale(1.0).epsilon(1e-9));
      CHECK(fp.wronskian_direct(t) == doctest::Approx(1.0).epsilon(1e-9));
    }
    const auto f4 = fundamental_system(real_multipliers(), 0.0, pi);
    CHECK(f4.wronskian_direct(pi) == doctest::Approx(std::exp(-pi)).epsilon(1e-8));
    CHECK(f4.wronskian_liouville(pi) == doctest::Approx(std::exp(-pi)).epsilon(1e-9));
    const auto f3 = fundamental_system(constant_eq(3, 2), 0.0, 1.0);
    CHECK(f3.wronskian_direct(1.0) == doctest::Approx(std::exp(-3.0)).epsilon(1e-9));
    CHECK(f3.wronskian_liouville(1.0) == doctest::Approx(std::exp(-3.0)).epsilon(1e-12));
  }

  TEST_CASE("property: Liouville agrees with the direct Wronskian") {
    for (const auto& eq : {damping_family(2.0), near_constant(), stiffness_family(4.3), constant_eq(-1, 3)}) {
      const auto fp = fundamental_system(eq, 0.0, 6.0);
      for (double t : {1.0, 3.0, 6.0})
        CHECK(std::abs(fp.wronskian_direct(t) / fp.wronskian_liouville(t) - 1.0) <= 1e-8);
    }
  }

  TEST_CASE("fundamental function closed forms") {
    const double s = 1.5;
    const auto X32 = fundamental_function(constant_eq(3, 2), s, 12.0);
    const auto X21 = fundamental_function(constant_eq(2, 1), s, 12.0);
    const auto X01 = fundamental_function(constant_eq(0, 1), s, 12.0);
    for (double t : {2.0, 4.0, 11.0}) {
      const double u = t - s;
      CHECK(std::abs(X32.x(t) - (std::exp(-u) - std::exp(-2 * u))) <= 1e-9);
      CHECK(std::abs(X21.x(t) - u * std::exp(-u)) <= 1e-9);
      CHECK(std::abs(X01.x(t) - std::sin(u)) <= 1e-9);
    }
    CHECK(X32.x(1.0) == 0.0);
    CHECK(X32.causal());
  }

  TEST_CASE("integro fundamental function") {
    const auto Y01 = integro_fundamental(constant_eq(0, 1), 0.0, 10.0);
    const auto Y32 = integro_fundamental(constant_eq(3, 2), 0.0, 10.0);
    for (double t : {0.5, 3.0, 9.0}) {
      CHECK(std::abs(Y01.x(t) - std::cos(t)) <= 1e-9);
      CHECK(std::abs(Y32.x(t) - (2 * std::exp(-t) - std::exp(-2 * t))) <= 1e-9);
    }
    const auto eq = damping_family(2.0);
    const auto Y = integro_fundamental(eq, 0.0, 10.0);
    const auto fp = fundamental_system(eq, 0.0, 10.0);
    for (double t : {1.0, 5.0, 10.0}) CHECK(std::abs(Y.x(t) - fp.x1.x(t)) <= 1e-9);
  }

  TEST_CASE("green kernel") {
    const GreenKernel g0(constant_eq(0, 0), 1.0);
    for (double t : {0.2, 0.5, 0.9})
      for (double s : {0.1, 0.5, 0.7}) {
        const double exact = s <= t ? -s * (1 - t) : -t * (1 - s);
        CHECK(std::abs(g0(t, s) - exact) <= 1e-9);
      }
    const GreenKernel g32(constant_eq(3, 2), 1.0);
    for (int i = 1; i < 50; ++i)
      for (int j = 1; j < 50; ++j) CHECK(g32(i / 50.0, j / 50.0) < 0.0);
    CHECK_THROWS_AS(green_kernel(constant_eq(0, 1), pi, 1.0, 0.5), Error);
    try {
      green_kernel(constant_eq(0, 1), pi, 1.0, 0.5);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BvpNotSolvable);
    }
  }

  TEST_CASE("find_zeros") {
    const auto sn = solve_ivp(constant_eq(0, 1), 0.0, 0.0, 1.0, 10.0);
    const auto z = find_zeros(sn);
    REQUIRE(z.size() == 3);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(z[k] - (k + 1) * pi) <= 1e-10);
    CHECK(find_zeros(fundamental_function(constant_eq(3, 2), 0.0, 10.0)).empty());
    const auto x2 = solve_ivp(real_multipliers(), 0.1, std::sin(0.1), std::cos(0.1), 10.0);
    const auto z4 = find_zeros(x2);
    REQUIRE(z4.size() == 3);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(z4[k] - (k + 1) * pi) <= 1e-9);
  }

  TEST_CASE("tangential zeros are flagged") {
    // x = (t - 2)^2 solves x'' = 2 from x(0) = 4, x'(0) = -4.
    const auto tr = solve_ivp(make_equation(c(0), c(0), c(2)), 0.0, 4.0, -4.0, 4.0);
    const auto z = find_zeros(tr, true);
    REQUIRE(z.size() == 1);
    CHECK(std::abs(z[0] - 2.0) <= 1e-4);
    CHECK(find_zeros(tr).empty());
  }

  TEST_CASE("property: Cauchy representation of forced solutions") {
    const auto eq = make_equation(c(1.0), c(2.0) + Expr::sine(0.5), Expr::cosine(1.0, 2.0));
    const double T = 4.0;
    const auto x = solve_ivp(eq, 0.0, 0.0, 0.0, T);
    const int n = 400;
    std::vector<double> y(n + 1);
    for (int k = 0; k <= n; ++k) {
      const double s = T * k / n;
      y[k] = k == n ? 0.0 : fundamental_function(eq, s, T).x(T) * (*eq.f)(s);
    }
    CHECK(std::abs(simpson_uniform(y, T / n) - x.x(T)) <= 1e-8);
  }
}
