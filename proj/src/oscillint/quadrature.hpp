#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "oscillint/expr.hpp"

namespace oscillint {

inline constexpr double kDefaultQuadTol = 1e-10;
inline constexpr std::size_t kPanelBudget = 1'000'000;

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t panels = 0;
};

/// Global adaptive Gauss-Kronrod (21-point) quadrature of f over [a, b].
/// Panels are split at `breaks` and never straddle one. `tol` is absolute.
/// Throws QuadratureError (with the current estimate and error) when the
/// panel budget runs out.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                              std::span<const double> breaks = {}, std::size_t panel_budget = kPanelBudget);

/// Integral of a coefficient over [s, t], s <= t. Closed form for constants,
/// polynomials, sinusoids, piecewise constants and linear combinations of
/// those; adaptive otherwise.
double integrate(const Expr& expr, double s, double t, double tol = kDefaultQuadTol);

/// Composite Simpson on uniformly spaced samples (3/8 rule on the last three
/// intervals when the interval count is odd).
double simpson_uniform(std::span<const double> y, double h);

}  // namespace oscillint
