#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oscillint/expr.hpp"

namespace oscillint {

/// x'' + a(t) x' + b(t) x = f(t), homogeneous when f is absent.
struct EquationSpec {
  Expr a;
  Expr b;
  std::optional<Expr> f;
  double t_start = 0.0;
  std::optional<double> period;
  std::string label;

  bool homogeneous() const { return !f.has_value(); }
  bool periodic() const { return period.has_value(); }

  /// Union of the coefficient breakpoints in [lo, hi].
  std::vector<double> breakpoints(double lo, double hi) const;

  /// Throws Error(InvalidArgument) on t_start < 0, a non-positive period, or
  /// coefficients that fail the period check on [t_start, t_start + 3*period].
  void validate() const;

  /// Same equation with f dropped.
  EquationSpec homogeneous_part() const;
};

EquationSpec make_equation(Expr a, Expr b, std::optional<Expr> f = std::nullopt,
                           std::optional<double> period = std::nullopt, std::string label = {});

}  // namespace oscillint
