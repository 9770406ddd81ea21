#include "oscillint/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "oscillint/error.hpp"
#include "oscillint/integrator.hpp"
#include "oscillint/parallel.hpp"
#include "oscillint/quadrature.hpp"

namespace oscillint {

const char* to_string(FloquetClass c) {
  switch (c) {
    case FloquetClass::ExpStable: return "EXP_STABLE";
    case FloquetClass::UnstableGrowing: return "UNSTABLE_GROWING";
    case FloquetClass::BoundedMarginal: return "BOUNDED_MARGINAL";
    case FloquetClass::RealRootGuardFailed: return "REAL_ROOT_GUARD_FAILED";
    case FloquetClass::Undecided: return "UNDECIDED";
  }
  return "?";
}

double Multiplier::mod() const { return std::hypot(re, im); }
double Multiplier::arg() const { return std::atan2(im, re); }

MultiplierPair multipliers(double trace, double W) {
  if (!(W > 0.0)) throw Error(ErrorCode::Domain, "multipliers need W > 0");
  const double disc = trace * trace - 4.0 * W;
  MultiplierPair out;
  if (disc >= -1e-9 * 4.0 * W) {
    const double sq = std::sqrt(std::max(disc, 0.0));
    const double big = 0.5 * (trace + (trace >= 0.0 ? sq : -sq));
    out.first = {big, 0.0};
    out.second = {W / big, 0.0};
    out.real = true;
  } else {
    const double r = std::sqrt(W);
    const double theta = std::acos(std::clamp(trace / (2.0 * r), -1.0, 1.0));
    out.first = {r * std::cos(theta), r * std::sin(theta)};
    out.second = {r * std::cos(theta), -r * std::sin(theta)};
    out.real = false;
  }
  return out;
}

ZoneCheck zone_check(double P, double Q, double omega, int kmax) {
  ZoneCheck z;
  if (!(P > 0.0)) return z;
  if (!(Q >= P)) throw Error(ErrorCode::InvalidArgument, "zone_check needs P <= Q");
  if (!(omega > 0.0)) throw Error(ErrorCode::InvalidArgument, "zone_check needs omega > 0");
  z.applicable = true;
  const double pi = std::numbers::pi;
  const double ratio = std::sqrt(P / Q);
  auto near = [&](double edge) { return std::abs(omega - edge) <= 1e-6 * edge; };
  for (int j = 1; j <= kmax; ++j) {
    const double hi = j * pi / (2.0 * std::sqrt(Q));
    if (j == 1) {
      if (near(hi)) z.near_boundary = true;
      if (omega <= hi && !z.in_zone) {
        z.in_zone = true;
        z.k = 1;
      }
      continue;
    }
    if (!(static_cast<double>(j - 1) / j < ratio)) break;
    const double lo = (j - 1) * pi / (2.0 * std::sqrt(P));
    if (near(lo) || near(hi)) z.near_boundary = true;
    if (omega > lo && omega < hi && !z.in_zone) {
      z.in_zone = true;
      z.k = j;
    }
  }
  return z;
}

namespace {

double state_norm(const State<2>& y) { return std::hypot(y[0], y[1]); }

}  // namespace

ZeroSpacing zero_spacing(const EquationSpec& eq, double horizon, int fan, double tol) {
  if (!eq.periodic()) throw Error(ErrorCode::InvalidArgument, "zero_spacing needs a periodic equation");
  const double omega = *eq.period;
  if (!(horizon >= 10.0 * omega * (1.0 - 1e-12)))
    throw Error(ErrorCode::InvalidArgument, "zero_spacing needs horizon >= 10 periods");
  const EquationSpec h = eq.homogeneous_part();
  const double t0 = eq.t_start;
  const double T = t0 + horizon;

  struct One {
    std::vector<double> zeros;
    double end = 0.0;
    double growth = 0.0;
  };
  std::vector<One> runs(static_cast<std::size_t>(fan));
  parallel_for(runs.size(), [&](std::size_t k) {
    const double phi = std::numbers::pi * static_cast<double>(k) / fan;
    SolveOptions opt;
    opt.tol = tol;
    opt.stop = [](double, const State<2>& y) { return state_norm(y) > 1e250; };
    const auto tr = solve_ivp(h, t0, std::cos(phi), std::sin(phi), T, opt);
    runs[k].zeros = find_zeros(tr);
    runs[k].end = tr.t1();
    const double at_omega = state_norm(tr.state(std::min(t0 + omega, tr.t1())));
    runs[k].growth = state_norm(tr.state(tr.t1())) / at_omega;
  });

  ZeroSpacing out;
  out.min_gap = INFINITY;
  out.max_gap = 0.0;
  bool enough = true;
  for (const auto& r : runs) {
    out.max_growth = std::max(out.max_growth, r.growth);
    if (r.zeros.size() < 2) enough = false;
    for (std::size_t i = 1; i < r.zeros.size(); ++i) {
      const double g = r.zeros[i] - r.zeros[i - 1];
      out.min_gap = std::min(out.min_gap, g);
      out.max_gap = std::max(out.max_gap, g);
      out.gap_values.push_back(g);
      ++out.gaps;
    }
  }
  if (out.gaps == 0) out.min_gap = 0.0;
  std::sort(out.gap_values.begin(), out.gap_values.end());

  if (enough) {
    const double L = std::max(2.0 * omega, 2.0 * out.max_gap);
    for (const auto& r : runs) {
      for (double lo = t0; lo + L <= r.end; lo += L) {
        const auto first = std::lower_bound(r.zeros.begin(), r.zeros.end(), lo);
        const auto last = std::upper_bound(r.zeros.begin(), r.zeros.end(), lo + L);
        if (last - first < 2) enough = false;
      }
    }
  }
  out.oscillatory = enough;
  return out;
}

FloquetResult monodromy(const EquationSpec& eq, double tol) {
  if (!eq.periodic()) throw Error(ErrorCode::InvalidArgument, "monodromy needs a periodic equation");
  FloquetResult r;
  r.omega = *eq.period;
  const double t0 = eq.t_start;
  const auto fp = fundamental_system(eq.homogeneous_part(), t0, t0 + r.omega, tol);
  const auto u = fp.x1.state(t0 + r.omega);
  const auto v = fp.x2.state(t0 + r.omega);
  r.x1 = u[0];
  r.x1p = u[1];
  r.x2 = v[0];
  r.x2p = v[1];
  r.trace = r.x1 + r.x2p;
  r.W_direct = r.x1 * r.x2p - r.x2 * r.x1p;
  r.int_a = integrate(eq.a, t0, t0 + r.omega, tol);
  r.W_liouville = std::exp(-r.int_a);
  r.lambda = multipliers(r.trace, r.W_liouville);
  return r;
}

FloquetResult classify(const EquationSpec& eq, const FloquetConfig& cfg) {
  FloquetResult r = monodromy(eq, cfg.tol);
  const double omega = r.omega;
  const double t0 = eq.t_start;
  const double horizon = std::max(10.0 * omega, cfg.horizon > 0.0 ? cfg.horizon : 20.0 * omega);

  const Expr p = eq.b - Expr::scale(0.25, eq.a * eq.a) - Expr::scale(0.5, derivative(eq.a));
  const auto pb = ess_bounds(p, t0, t0 + omega, cfg.sample_density);
  r.P = pb.inf;
  r.Q = pb.sup;
  r.zone = zone_check(r.P, r.Q, omega, cfg.kmax);
  r.analytic_guard = r.zone.applicable && r.zone.in_zone;

  r.spacing = zero_spacing(eq, horizon, cfg.fan, cfg.tol);
  const double band = cfg.guard_margin * 2.0 * omega;
  auto clear_of = [&](double target) {
    const auto& g = r.spacing.gap_values;
    const auto it = std::lower_bound(g.begin(), g.end(), target - band);
    return it == g.end() || *it > target + band;
  };
  r.empirical_guard = r.spacing.oscillatory && r.spacing.gaps > 0 && clear_of(omega) && clear_of(2.0 * omega);

  const double zero_tol = 1e-9 * (1.0 + std::abs(r.int_a));
  if (r.lambda.real || !(r.analytic_guard || r.empirical_guard)) {
    r.classification = FloquetClass::RealRootGuardFailed;
    r.note = r.lambda.real
                 ? "real multipliers: the sign of the integral of a does not decide stability here"
                 : "zero spacing not shown to differ from 2*omega: the sign of the integral of a does not decide "
                   "stability here";
    if (r.int_a > zero_tol)
      r.note += " (a positive integral of a does not imply decay without this guard)";
    return r;
  }
  if (r.int_a > zero_tol)
    r.classification = FloquetClass::ExpStable;
  else if (r.int_a < -zero_tol)
    r.classification = FloquetClass::UnstableGrowing;
  else
    r.classification = FloquetClass::BoundedMarginal;

  if (r.classification == FloquetClass::ExpStable && r.spacing.max_growth > 1.0) {
    r.classification = FloquetClass::Undecided;
    r.note = "a fanned solution grew between omega and the horizon";
  }
  return r;
}

}  // namespace oscillint
