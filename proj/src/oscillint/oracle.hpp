#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "oscillint/equation.hpp"

namespace oscillint {

struct DecayEstimate {
  /// -slope of log E(t) on the fit window; E is the largest state norm over
  /// unit initial states. -inf when the state overflowed.
  double rate = 0.0;
  double K = 0.0;
  /// RMS residual of the log fit.
  double residual = 0.0;
  double horizon = 0.0;
  /// "fan_envelope", "truncated" (stopped at tiny amplitude) or "overflow".
  std::string method;
};

DecayEstimate empirical_decay_rate(const EquationSpec& eq, double horizon = 200.0, double tol = 1e-10);

struct PositivityResult {
  bool positive = true;
  /// First violation found (s, t); meaningful only when !positive.
  double s = 0.0;
  double t = 0.0;
};

/// X(t, s) > 0 for s on `grid` points of [t_start, T) and t on the same
/// grid plus every sign change. With `integro`, Y(t, s) is scanned instead.
PositivityResult positivity_scan(const EquationSpec& eq, double T, int grid = 50, double tol = 1e-10,
                                 bool integro = false);

struct Eq34Result {
  double min = 0.0;
  double max = 0.0;
  /// (t, I(t)) on the output grid.
  std::vector<std::pair<double, double>> samples;
};

/// I(t) = int_{t_start}^t X(t, s) b(s) ds by Simpson over a uniform s fan
/// with `s_per_unit` points per unit time, at `grid` + 1 output times.
Eq34Result check_eq34(const EquationSpec& eq, double T, int grid = 50, double tol = 1e-10, int s_per_unit = 100);

enum class ComparisonStatus { Holds, Violated, Inapplicable };
const char* to_string(ComparisonStatus s);

inline constexpr double kComparisonTol = 1e-8;

/// Largest scaled excess (lhs - rhs) / max(1, |lhs|, |rhs|) and where it occurred.
struct ComparisonPart {
  double worst = -INFINITY;
  double t = 0.0;
  double s = 0.0;
  void update(double lhs, double rhs, double t, double s);
};

struct ComparisonResult {
  ComparisonStatus status = ComparisonStatus::Inapplicable;
  /// Max over the decisive parts; > kComparisonTol means a violation.
  double worst = 0.0;
  ComparisonPart x1;  // x1 - v1
  ComparisonPart x2;  // x2 - v2
  ComparisonPart X;   // X - V
  /// Y - Y1 for the integro-differential form; reported, not decisive.
  ComparisonPart Y;
  /// v - x for the forced pair on the base coefficients.
  ComparisonPart forced;
  bool forced_checked = false;
  std::string note;
};

/// Base (a, b) against dominated (a1, b1) with a1 >= a >= 0 and b >= b1 >= 0:
/// x1 <= v1, x2 <= v2 and X <= V on a grid x grid sample of [t_start, T].
/// When both carry f, also checks that on the base coefficients the solution
/// with the larger forcing dominates (zero initial data).
ComparisonResult comparison_check(const EquationSpec& base, const EquationSpec& dominated, double T, int grid = 50,
                                  double tol = 1e-10);

/// Largest violation of x1(t) = Y(t,0), x2(t) = int_0^t Y(t,tau) E(tau) dtau and
/// X(t,s) = int_s^t Y(t,tau) E(tau)/E(s) dtau, E(tau) = exp(-int_0^tau a).
double lemma6_consistency(const EquationSpec& eq, double T, int grid = 10, double tol = 1e-10,
                          int s_per_unit = 100);

struct BoundedResponse {
  double max_first_half = 0.0;
  double max_second_half = 0.0;
  bool bounded = false;
};

/// Response to f = 1 from rest; a diagnostic only.
BoundedResponse bounded_response(const EquationSpec& eq, double horizon = 200.0, double tol = 1e-10);

}  // namespace oscillint
