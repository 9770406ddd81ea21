#pragma once

#include <functional>
#include <vector>

#include "oscillint/equation.hpp"
#include "oscillint/ode.hpp"

namespace oscillint {

inline constexpr double kDefaultTol = 1e-10;

struct Zero {
  double t;
  bool tangential;
};

/// Solution (x, x') of a second-order problem with dense output.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(Solution<2> sol, double tol, bool causal);

  double t0() const { return sol_.t0(); }
  double t1() const { return sol_.t1(); }
  double tol() const { return tol_; }
  /// Fundamental functions X(t, s) vanish for t < s; other trajectories throw there.
  bool causal() const { return causal_; }

  State<2> state(double t) const;
  double x(double t) const { return state(t)[0]; }
  double xdot(double t) const { return state(t)[1]; }

  const Solution<2>& solution() const { return sol_; }
  const std::vector<Zero>& zeros() const { return zeros_; }

 private:
  Solution<2> sol_;
  double tol_ = kDefaultTol;
  bool causal_ = false;
  std::vector<Zero> zeros_;
};

/// Zeros of x in (t0, t1], ascending, located to 1e-10 by bisection on the
/// dense output. Sign changes only unless `include_tangential`.
std::vector<double> find_zeros(const Trajectory& traj, bool include_tangential = false);

struct SolveOptions {
  double tol = kDefaultTol;
  double max_step = 0.1;
  std::function<bool(double, const State<2>&)> stop;
};

Trajectory solve_ivp(const EquationSpec& eq, double t0, double x0, double v0, double T, double tol = kDefaultTol);
Trajectory solve_ivp(const EquationSpec& eq, double t0, double x0, double v0, double T, const SolveOptions& opt);

struct FundamentalPair {
  Trajectory x1;
  Trajectory x2;
  double t0 = 0.0;
  Expr a;

  double wronskian_direct(double t) const;
  /// exp(-int_{t0}^t a).
  double wronskian_liouville(double t) const;
};

FundamentalPair fundamental_system(const EquationSpec& eq, double t0, double T, double tol = kDefaultTol);

/// X(., s): started at (s, 0, 1), homogeneous, zero before s.
Trajectory fundamental_function(const EquationSpec& eq, double s, double T, double tol = kDefaultTol);

/// Y(., s) via y' = -z, z' = b y - a z, y(s) = 1, z(s) = 0. The trajectory
/// stores (y, y'), i.e. x = y and x' = -z, and is zero before s.
Trajectory integro_fundamental(const EquationSpec& eq, double s, double T, double tol = kDefaultTol);

/// G(t, s) = X(t, s) - x2(t) X(w, s) / x2(w) for the problem x(0) = x(w) = 0,
/// started at eq.t_start. Holds the X fan so repeated evaluation is cheap.
class GreenKernel {
 public:
  GreenKernel(const EquationSpec& eq, double omega, double tol = kDefaultTol);
  double operator()(double t, double s) const;
  double omega() const { return omega_; }

 private:
  EquationSpec eq_;
  double omega_;
  double tol_;
  Trajectory x2_;
  double x2_omega_;
};

double green_kernel(const EquationSpec& eq, double omega, double t, double s, double tol = kDefaultTol);

/// Scalar m' = g(t) - h(t) m, m(t0) = 0, on [t0, T]; breakpoints as given.
/// `stop` ends the run early.
Solution<1> solve_scalar(const std::function<double(double, Side)>& g, const std::function<double(double, Side)>& h,
                         double t0, double T, const std::vector<double>& breaks, double tol = kDefaultTol,
                         std::function<bool(double, double)> stop = {});

}  // namespace oscillint
