#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "oscillint/equation.hpp"

namespace oscillint {

enum class FloquetClass { ExpStable, UnstableGrowing, BoundedMarginal, RealRootGuardFailed, Undecided };
const char* to_string(FloquetClass c);

struct Multiplier {
  double re = 0.0;
  double im = 0.0;
  double mod() const;
  double arg() const;
};

struct MultiplierPair {
  Multiplier first;   // larger modulus when real
  Multiplier second;
  bool real = true;
};

/// Roots of lambda^2 - trace*lambda + W = 0. A slightly negative
/// discriminant (above -1e-9 * 4W) is treated as a double real root.
MultiplierPair multipliers(double trace, double W);

struct ZoneCheck {
  bool applicable = false;  // false when P <= 0
  bool in_zone = false;
  std::optional<int> k;
  /// omega within 1e-6 (relative) of an endpoint of some admissible zone.
  bool near_boundary = false;
};

/// Admissible omega ranges for constant bounds P <= p(t) <= Q: (0, pi/(2 sqrt Q)]
/// and, for j >= 2 with (j-1)/j < sqrt(P/Q), ((j-1) pi/(2 sqrt P), j pi/(2 sqrt Q)).
ZoneCheck zone_check(double P, double Q, double omega, int kmax = 8);

struct ZeroSpacing {
  double min_gap = 0.0;
  double max_gap = 0.0;
  bool oscillatory = false;
  std::size_t gaps = 0;
  std::vector<double> gap_values;  // ascending
  /// Fanned solution whose state norm grew most from omega to the horizon.
  double max_growth = 0.0;
};

/// Fan of `fan` solutions started at (cos phi, sin phi), phi = pi k / fan.
ZeroSpacing zero_spacing(const EquationSpec& eq, double horizon, int fan = 32, double tol = 1e-10);

struct FloquetConfig {
  double tol = 1e-10;
  /// Zero-spacing horizon; 0 means 20 periods. Raised to at least 10 periods.
  double horizon = 0.0;
  int fan = 32;
  int kmax = 8;
  double guard_margin = 0.01;
  double sample_density = 1e4;
};

struct FloquetResult {
  double omega = 0.0;
  double x1 = 0.0, x2 = 0.0, x1p = 0.0, x2p = 0.0;
  double W_direct = 0.0;
  double W_liouville = 0.0;
  double trace = 0.0;
  MultiplierPair lambda;
  double int_a = 0.0;
  FloquetClass classification = FloquetClass::Undecided;

  // Guard evidence (filled by classify).
  double P = 0.0, Q = 0.0;
  ZoneCheck zone;
  ZeroSpacing spacing;
  bool analytic_guard = false;
  bool empirical_guard = false;
  std::string note;
};

/// Fundamental pair over one period: entries, trace, both Wronskians, multipliers.
FloquetResult monodromy(const EquationSpec& eq, double tol = 1e-10);

FloquetResult classify(const EquationSpec& eq, const FloquetConfig& cfg = {});

}  // namespace oscillint
