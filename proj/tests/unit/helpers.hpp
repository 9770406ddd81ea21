#pragma once

#include <cmath>
#include <numbers>

#include "oscillint/equation.hpp"

namespace oscillint::test {

inline constexpr double pi = std::numbers::pi;

inline Expr c(double v) { return Expr::constant(v); }

inline EquationSpec constant_eq(double a, double b) { return make_equation(c(a), c(b)); }

// x'' + a x' + (1 + 0.99 sin t) x = 0, period 2 pi.
inline EquationSpec damping_family(double a) {
  return make_equation(c(a), c(1.0) + Expr::sine(0.99), std::nullopt, 2.0 * pi);
}

// x'' + (10 + sin t) x' + (26 + cos t) x = 0.
inline EquationSpec near_constant() {
  return make_equation(c(10.0) + Expr::sine(1.0), c(26.0) + Expr::cosine(1.0), std::nullopt, 2.0 * pi);
}

// x'' + x' + (b + sin t) x = 0.
inline EquationSpec stiffness_family(double b) { return make_equation(c(1.0), c(b) + Expr::sine(1.0), std::nullopt, 2.0 * pi); }

// pi-periodic equation with fundamental system x1 = e^{-t} cos t, x2 = sin t.
inline EquationSpec real_multipliers() {
  const Expr sc = Expr::prod({Expr::sine(1.0), Expr::cosine(1.0)});
  const Expr s2 = Expr::prod({Expr::sine(1.0), Expr::sine(1.0)});
  const Expr den = c(1.0) + sc;
  return make_equation(Expr::quot(Expr::scale(2.0, s2) + sc, den), Expr::quot(s2 - sc, den), std::nullopt, pi);
}

}  // namespace oscillint::test
