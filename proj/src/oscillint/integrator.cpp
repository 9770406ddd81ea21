#include "oscillint/integrator.hpp"

#include <cmath>
#include <sstream>

#include "oscillint/quadrature.hpp"

namespace oscillint {

namespace {

constexpr int kZeroSubsamples = 4;
constexpr int kTangentSubsamples = 8;
constexpr double kZeroTol = 1e-10;

double sgn(double v) { return (v > 0) - (v < 0); }

std::vector<Zero> locate_zeros(const Solution<2>& sol) {
  std::vector<Zero> out;
  if (sol.t.size() < 2) return out;
  double last_sign = sgn(sol.y[0][0]);
  double last_t = sol.t[0];
  for (std::size_t k = 0; k < sol.steps(); ++k) {
    const double a = sol.t[k];
    const double b = sol.t[k + 1];
    double step_max = 0.0;
    for (int j = 0; j <= kTangentSubsamples; ++j)
      step_max = std::max(step_max, std::abs(sol.eval_in_step(k, a + (b - a) * j / kTangentSubsamples)[0]));

    for (int j = 1; j <= kZeroSubsamples; ++j) {
      const double tj = j == kZeroSubsamples ? b : a + (b - a) * j / kZeroSubsamples;
      const double v = sol.eval_in_step(k, tj)[0];
      const double s = sgn(v);
      if (s == 0.0) continue;
      if (last_sign != 0.0 && s != last_sign) {
        double lo = last_t;
        double hi = tj;
        while (hi - lo > 0.1 * kZeroTol) {
          const double mid = 0.5 * (lo + hi);
          const double vm = sol(mid)[0];
          if (vm == 0.0) {
            lo = hi = mid;
            break;
          }
          (sgn(vm) == last_sign ? lo : hi) = mid;
        }
        out.push_back({0.5 * (lo + hi), false});
      }
      last_sign = s;
      last_t = tj;
    }

    // Touching zeros: a small local minimum of |x| with no sign change,
    // refined by ternary search on the dense output.
    const double thresh = kZeroTol * std::max(1.0, step_max);
    const double h = (b - a) / kTangentSubsamples;
    const auto absx = [&](double t) { return std::abs(sol(t)[0]); };
    for (int j = 0; j < kTangentSubsamples; ++j) {
      const double tj = a + h * j;
      if (tj - h < sol.t.front() || tj + h > sol.t.back()) continue;
      const double prev = absx(tj - h), cur = absx(tj), next = absx(tj + h);
      if (!(cur <= prev && cur <= next && (cur < prev || cur < next))) continue;
      double lo = tj - h, hi = tj + h;
      for (int it = 0; it < 100 && hi - lo > 0.1 * kZeroTol; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (absx(m1) <= absx(m2))
          hi = m2;
        else
          lo = m1;
      }
      const double tm = 0.5 * (lo + hi);
      if (absx(tm) > thresh || tm <= sol.t.front() + kZeroTol) continue;
      bool seen = false;
      for (const auto& z : out)
        if (std::abs(z.t - tm) <= (b - a)) seen = true;
      if (!seen) out.push_back({tm, true});
    }
  }
  std::sort(out.begin(), out.end(), [](const Zero& x, const Zero& y) { return x.t < y.t; });
  return out;
}

struct EqRhs {
  const EquationSpec* eq;
  bool forced;
  State<2> operator()(double t, const State<2>& y, Side side) const {
    const double a = eq->a(t, side);
    const double b = eq->b(t, side);
    const double f = forced ? (*eq->f)(t, side) : 0.0;
    return {y[1], f - a * y[1] - b * y[0]};
  }
};

Solution<2> run(const EquationSpec& eq, bool forced, double t0, State<2> y0, double T, const SolveOptions& opt) {
  SolverOptions<2> so;
  so.tol = opt.tol;
  so.max_step = opt.max_step;
  so.abs_floor = forced ? 1.0 : 1e-200;
  so.stop = opt.stop;
  return integrate_system<2>(EqRhs{&eq, forced}, t0, y0, T, eq.breakpoints(t0, T), so);
}

}  // namespace

Trajectory::Trajectory(Solution<2> sol, double tol, bool causal)
    : sol_(std::move(sol)), tol_(tol), causal_(causal), zeros_(locate_zeros(sol_)) {}

State<2> Trajectory::state(double t) const {
  if (causal_ && t < sol_.t0()) return {0.0, 0.0};
  return sol_(t);
}

std::vector<double> find_zeros(const Trajectory& traj, bool include_tangential) {
  std::vector<double> out;
  for (const auto& z : traj.zeros())
    if (!z.tangential || include_tangential) out.push_back(z.t);
  return out;
}

Trajectory solve_ivp(const EquationSpec& eq, double t0, double x0, double v0, double T, double tol) {
  SolveOptions opt;
  opt.tol = tol;
  return solve_ivp(eq, t0, x0, v0, T, opt);
}

Trajectory solve_ivp(const EquationSpec& eq, double t0, double x0, double v0, double T, const SolveOptions& opt) {
  return Trajectory(run(eq, eq.f.has_value(), t0, {x0, v0}, T, opt), opt.tol, false);
}

double FundamentalPair::wronskian_direct(double t) const {
  const auto u = x1.state(t);
  const auto v = x2.state(t);
  return u[0] * v[1] - v[0] * u[1];
}

double FundamentalPair::wronskian_liouville(double t) const { return std::exp(-integrate(a, t0, t)); }

FundamentalPair fundamental_system(const EquationSpec& eq, double t0, double T, double tol) {
  SolveOptions opt;
  opt.tol = tol;
  FundamentalPair fp;
  fp.x1 = Trajectory(run(eq, false, t0, {1.0, 0.0}, T, opt), tol, false);
  fp.x2 = Trajectory(run(eq, false, t0, {0.0, 1.0}, T, opt), tol, false);
  fp.t0 = t0;
  fp.a = eq.a;
  return fp;
}

Trajectory fundamental_function(const EquationSpec& eq, double s, double T, double tol) {
  SolveOptions opt;
  opt.tol = tol;
  return Trajectory(run(eq, false, s, {0.0, 1.0}, T, opt), tol, true);
}

Trajectory integro_fundamental(const EquationSpec& eq, double s, double T, double tol) {
  // In (y, y') coordinates the local system is the homogeneous equation itself.
  SolveOptions opt;
  opt.tol = tol;
  return Trajectory(run(eq, false, s, {1.0, 0.0}, T, opt), tol, true);
}

GreenKernel::GreenKernel(const EquationSpec& eq, double omega, double tol)
    : eq_(eq.homogeneous_part()), omega_(omega), tol_(tol) {
  if (!(omega > 0.0)) throw Error(ErrorCode::InvalidArgument, "green_kernel needs omega > 0");
  const double origin = eq_.t_start;
  SolveOptions opt;
  opt.tol = tol;
  x2_ = Trajectory(run(eq_, false, origin, {0.0, 1.0}, origin + omega, opt), tol, false);
  x2_omega_ = x2_.x(origin + omega);
  double peak = 0.0;
  for (const auto& y : x2_.solution().y) peak = std::max(peak, std::abs(y[0]));
  if (std::abs(x2_omega_) < 1e-8 * peak) {
    std::ostringstream os;
    os.precision(17);
    os << "BVP not uniquely solvable: x2(" << omega << ") = " << x2_omega_;
    throw Error(ErrorCode::BvpNotSolvable, os.str());
  }
}

double GreenKernel::operator()(double t, double s) const {
  const double origin = eq_.t_start;
  const double end = origin + omega_;
  if (!(s > origin && s < end) || !(t >= origin && t <= end))
    throw Error(ErrorCode::InvalidArgument, "green_kernel needs 0 < s < omega and 0 <= t <= omega");
  const Trajectory X = fundamental_function(eq_, s, end, tol_);
  return X.x(t) - x2_.x(t) * X.x(end) / x2_omega_;
}

double green_kernel(const EquationSpec& eq, double omega, double t, double s, double tol) {
  return GreenKernel(eq, omega, tol)(t, s);
}

Solution<1> solve_scalar(const std::function<double(double, Side)>& g, const std::function<double(double, Side)>& h,
                         double t0, double T, const std::vector<double>& breaks, double tol,
                         std::function<bool(double, double)> stop) {
  SolverOptions<1> so;
  so.tol = tol;
  so.abs_floor = 1.0;
  if (stop) so.stop = [stop](double t, const State<1>& y) { return stop(t, y[0]); };
  auto rhs = [&](double t, const State<1>& y, Side side) -> State<1> { return {g(t, side) - h(t, side) * y[0]}; };
  return integrate_system<1>(rhs, t0, State<1>{0.0}, T, breaks, so);
}

}  // namespace oscillint
