#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <sstream>
#include <vector>

#include <boost/numeric/odeint/stepper/runge_kutta_dopri5.hpp>

#include "oscillint/error.hpp"
#include "oscillint/expr.hpp"

namespace oscillint {

template <std::size_t N>
using State = std::array<double, N>;

inline constexpr double kOverflow = 1e300;

template <std::size_t N>
double inf_norm(const State<N>& y) {
  double m = 0.0;
  for (double v : y) m = std::max(m, std::abs(v));
  return m;
}

/// Piecewise quartic Hermite dense output. Step k spans [t[k], t[k+1]]; d0[k]
/// and d1[k] are the derivatives at its two ends (they differ from the
/// neighbouring step's at coefficient breakpoints) and mid[k] is the
/// continuous-extension value at the step midpoint.
template <std::size_t N>
struct Solution {
  std::vector<double> t;
  std::vector<State<N>> y;
  std::vector<State<N>> d0;
  std::vector<State<N>> d1;
  std::vector<State<N>> mid;

  double t0() const { return t.front(); }
  double t1() const { return t.back(); }
  std::size_t steps() const { return t.size() - 1; }

  std::size_t step_of(double tau) const {
    auto it = std::upper_bound(t.begin(), t.end(), tau);
    std::size_t k = it == t.begin() ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
    return std::min(k, steps() - 1);
  }

  State<N> eval_in_step(std::size_t k, double tau) const {
    const double h = t[k + 1] - t[k];
    const double s = (tau - t[k]) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    const double bump = 16.0 * s * s * (1 - s) * (1 - s);
    State<N> out{};
    for (std::size_t i = 0; i < N; ++i) {
      const double cubic_mid = 0.5 * (y[k][i] + y[k + 1][i]) + 0.125 * h * (d0[k][i] - d1[k][i]);
      out[i] = h00 * y[k][i] + h * h10 * d0[k][i] + h01 * y[k + 1][i] + h * h11 * d1[k][i] +
               bump * (mid[k][i] - cubic_mid);
    }
    return out;
  }

  State<N> operator()(double tau) const {
    const double slack = 1e-12 * std::max(1.0, std::abs(t1()));
    if (tau < t0() - slack || tau > t1() + slack) {
      std::ostringstream os;
      os.precision(17);
      os << "dense output requested at t = " << tau << " outside [" << t0() << ", " << t1() << "]";
      throw Error(ErrorCode::InvalidArgument, os.str());
    }
    if (t.size() == 1) return y.front();
    return eval_in_step(step_of(tau), std::clamp(tau, t0(), t1()));
  }
};

template <std::size_t N>
struct SolverOptions {
  double tol = 1e-10;
  double max_step = 0.1;
  /// Lower bound of the error scale; tiny for homogeneous problems so that
  /// control stays relative to a decaying state.
  double abs_floor = 1e-200;
  /// Checked after every accepted step; returning true ends the run there.
  std::function<bool(double, const State<N>&)> stop;
};

/// Adaptive Dormand-Prince 5(4) over [t0, T]. Steps end exactly on every
/// breakpoint in `breaks`. `rhs(t, y, side)` must return y'. Accepts a step
/// when its error estimate per unit step is at most tol * max(|y|, floor).
template <std::size_t N, class Rhs>
Solution<N> integrate_system(const Rhs& rhs, double t0, const State<N>& y0, double T,
                             const std::vector<double>& breaks, const SolverOptions<N>& opt) {
  if (!(t0 < T)) throw Error(ErrorCode::InvalidArgument, "integrate_system needs t0 < T");
  if (!(opt.tol >= 1e-14 && opt.tol <= 1e-4)) throw Error(ErrorCode::InvalidArgument, "tol outside [1e-14, 1e-4]");

  std::vector<double> edges{t0};
  for (double b : breaks)
    if (b > t0 && b < T) edges.push_back(b);
  edges.push_back(T);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  Solution<N> sol;
  sol.t.push_back(t0);
  sol.y.push_back(y0);

  boost::numeric::odeint::runge_kutta_dopri5<State<N>> stepper;
  State<N> y = y0;
  double t = t0;
  double dt = std::min(opt.max_step, 1e-2);

  for (std::size_t seg = 0; seg + 1 < edges.size(); ++seg) {
    const double lo = edges[seg];
    const double hi = edges[seg + 1];
    const double mid = 0.5 * (lo + hi);
    auto sys = [&](const State<N>& x, State<N>& dxdt, double tau) {
      dxdt = rhs(tau, x, tau > mid ? Side::Left : Side::Right);
    };
    State<N> dydt{};
    sys(y, dydt, t);
    const double min_step = 1e-14 * std::max(1.0, std::abs(hi));
    while (t < hi) {
      bool last = false;
      double h = std::min(dt, opt.max_step);
      if (t + h >= hi || hi - (t + h) < min_step) {
        h = hi - t;
        last = true;
      }
      State<N> y_new{}, dy_new{}, err{};
      stepper.do_step(sys, y, dydt, t, y_new, dy_new, h, err);
      const double ynorm = inf_norm<N>(y_new);
      if (!std::isfinite(ynorm)) {
        std::ostringstream os;
        os.precision(17);
        os << "non-finite state after t = " << t;
        throw SolverError(os.str(), t);
      }
      const double scale = std::max({inf_norm<N>(y), ynorm, opt.abs_floor});
      const double e = inf_norm<N>(err) / (scale * h);
      if (e <= opt.tol) {
        const double t_new = last ? hi : t + h;
        State<N> y_mid{};
        stepper.calc_state(t + 0.5 * h, y_mid, y, dydt, t, y_new, dy_new, t + h);
        sol.mid.push_back(y_mid);
        sol.d0.push_back(dydt);
        sol.d1.push_back(dy_new);
        sol.t.push_back(t_new);
        sol.y.push_back(y_new);
        t = t_new;
        y = y_new;
        dydt = dy_new;
        const double grow = e == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(opt.tol / e, 0.25), 0.2, 5.0);
        if (!last || h >= dt) dt = h * grow;
        if (ynorm > kOverflow) {
          std::ostringstream os;
          os.precision(17);
          os << "state norm exceeded " << kOverflow << " at t = " << t;
          throw OverflowError(os.str(), t);
        }
        if (opt.stop && opt.stop(t, y)) return sol;
      } else {
        dt = h * std::clamp(0.9 * std::pow(opt.tol / e, 0.25), 0.1, 0.9);
        if (dt < min_step) {
          std::ostringstream os;
          os.precision(17);
          os << "step size underflow at t = " << t;
          throw SolverError(os.str(), t);
        }
      }
    }
  }
  return sol;
}

}  // namespace oscillint
