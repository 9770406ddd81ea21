#include "oscillint/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oscillint/error.hpp"
#include "oscillint/integrator.hpp"
#include "oscillint/parallel.hpp"
#include "oscillint/quadrature.hpp"

namespace oscillint {

namespace {

constexpr double kHuge = 1e250;
constexpr double kTiny = 1e-250;

double state_norm(const State<2>& y) { return std::hypot(y[0], y[1]); }

// Largest singular value of [[p, q], [r, s]].
double sigma_max(double p, double q, double r, double s) {
  const double m = std::max({std::abs(p), std::abs(q), std::abs(r), std::abs(s)});
  if (m == 0.0) return 0.0;
  p /= m;
  q /= m;
  r /= m;
  s /= m;
  const double sum = p * p + q * q + r * r + s * s;
  const double det = p * s - q * r;
  const double disc = std::max(sum * sum - 4.0 * det * det, 0.0);
  return m * std::sqrt(0.5 * (sum + std::sqrt(disc)));
}

// n + 1 uniform points of [lo, hi] with spacing close to 1/per_unit.
struct UniformGrid {
  double lo = 0.0;
  double h = 0.0;
  std::size_t n = 0;
  double at(std::size_t k) const { return lo + static_cast<double>(k) * h; }
  std::size_t index_of(double t) const {
    const double k = std::round((t - lo) / h);
    return static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(n)));
  }
};

UniformGrid make_grid(double lo, double hi, int per_unit) {
  if (!(hi > lo)) throw Error(ErrorCode::InvalidArgument, "grid needs T > t_start");
  if (per_unit < 1) throw Error(ErrorCode::InvalidArgument, "s_per_unit must be positive");
  UniformGrid g;
  g.lo = lo;
  g.n = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil((hi - lo) * per_unit)));
  g.h = (hi - lo) / static_cast<double>(g.n);
  return g;
}

// Value of a coefficient just to the right of t (well defined at breakpoints).
double right_value(const Expr& e, double t) { return eval_sides(e, t).right; }

}  // namespace

DecayEstimate empirical_decay_rate(const EquationSpec& eq, double horizon, double tol) {
  if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidArgument, "decay horizon must be positive");
  const EquationSpec h = eq.homogeneous_part();
  const double t0 = eq.t_start;
  SolveOptions opt;
  opt.tol = tol;
  opt.stop = [](double, const State<2>& y) {
    const double n = state_norm(y);
    return n > kHuge || n < kTiny;
  };
  Trajectory runs[2];
  parallel_for(2, [&](std::size_t k) {
    runs[k] = solve_ivp(h, t0, k == 0 ? 1.0 : 0.0, k == 0 ? 0.0 : 1.0, t0 + horizon, opt);
  });

  DecayEstimate out;
  out.horizon = horizon;
  out.method = "fan_envelope";
  const double t_end = std::min(runs[0].t1(), runs[1].t1());
  if (t_end < t0 + horizon) {
    const auto u = runs[0].state(t_end);
    const auto v = runs[1].state(t_end);
    if (std::max(state_norm(u), state_norm(v)) > 1.0) {
      out.rate = -std::numeric_limits<double>::infinity();
      out.K = std::numeric_limits<double>::infinity();
      out.method = "overflow";
      return out;
    }
    out.method = "truncated";
  }

  const double lo = t0 + 0.5 * (t_end - t0);
  const int m = 400;
  std::vector<double> ts(m + 1), ls(m + 1);
  for (int i = 0; i <= m; ++i) {
    const double t = lo + (t_end - lo) * i / m;
    const auto u = runs[0].state(t);
    const auto v = runs[1].state(t);
    ts[i] = t;
    ls[i] = std::log(sigma_max(u[0], v[0], u[1], v[1]));
  }
  double mt = 0.0, ml = 0.0;
  for (int i = 0; i <= m; ++i) {
    mt += ts[i];
    ml += ls[i];
  }
  mt /= m + 1;
  ml /= m + 1;
  double stt = 0.0, stl = 0.0;
  for (int i = 0; i <= m; ++i) {
    stt += (ts[i] - mt) * (ts[i] - mt);
    stl += (ts[i] - mt) * (ls[i] - ml);
  }
  const double slope = stl / stt;
  const double icpt = ml - slope * mt;
  double ss = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double r = ls[i] - (icpt + slope * ts[i]);
    ss += r * r;
  }
  out.rate = -slope;
  out.K = std::exp(icpt + slope * t0);
  out.residual = std::sqrt(ss / (m + 1));
  return out;
}

PositivityResult positivity_scan(const EquationSpec& eq, double T, int grid, double tol, bool integro) {
  if (grid < 1) throw Error(ErrorCode::InvalidArgument, "positivity grid must be positive");
  const double t0 = eq.t_start;
  if (!(T > t0)) throw Error(ErrorCode::InvalidArgument, "positivity scan needs T > t_start");
  const EquationSpec h = eq.homogeneous_part();
  const double step = (T - t0) / grid;

  std::vector<PositivityResult> res(static_cast<std::size_t>(grid));
  parallel_for(res.size(), [&](std::size_t j) {
    const double s = t0 + static_cast<double>(j) * step;
    const Trajectory tr = integro ? integro_fundamental(h, s, T, tol) : fundamental_function(h, s, T, tol);
    PositivityResult& r = res[j];
    r.s = s;
    const auto zs = find_zeros(tr, true);
    if (!zs.empty()) {
      r.positive = false;
      r.t = zs.front();
      return;
    }
    for (int i = static_cast<int>(j) + 1; i <= grid; ++i) {
      const double t = t0 + i * step;
      if (!(tr.x(t) > 0.0)) {
        r.positive = false;
        r.t = t;
        return;
      }
    }
  });
  for (const auto& r : res)
    if (!r.positive) return r;
  return {};
}

Eq34Result check_eq34(const EquationSpec& eq, double T, int grid, double tol, int s_per_unit) {
  if (grid < 1) throw Error(ErrorCode::InvalidArgument, "eq34 grid must be positive");
  const EquationSpec h = eq.homogeneous_part();
  const UniformGrid sg = make_grid(eq.t_start, T, s_per_unit);
  std::vector<Trajectory> fan(sg.n + 1);
  std::vector<double> bs(sg.n + 1);
  parallel_for(fan.size(), [&](std::size_t k) {
    const double s = sg.at(k);
    bs[k] = right_value(eq.b, s);
    if (k < sg.n) fan[k] = fundamental_function(h, s, T, tol);
  });

  Eq34Result out;
  out.min = INFINITY;
  out.max = -INFINITY;
  std::vector<double> y;
  for (int i = 0; i <= grid; ++i) {
    const std::size_t m = sg.index_of(eq.t_start + (T - eq.t_start) * i / grid);
    const double t = sg.at(m);
    y.assign(m + 1, 0.0);
    for (std::size_t k = 0; k < m; ++k) y[k] = fan[k].x(t) * bs[k];
    const double I = simpson_uniform(y, sg.h);
    out.samples.emplace_back(t, I);
    out.min = std::min(out.min, I);
    out.max = std::max(out.max, I);
  }
  return out;
}

const char* to_string(ComparisonStatus s) {
  switch (s) {
    case ComparisonStatus::Holds: return "HOLDS";
    case ComparisonStatus::Violated: return "VIOLATED";
    case ComparisonStatus::Inapplicable: return "INAPPLICABLE";
  }
  return "?";
}

void ComparisonPart::update(double x, double v, double t_, double s_) {
  const double scale = std::max({1.0, std::abs(x), std::abs(v)});
  const double d = (x - v) / scale;
  if (d > worst) {
    worst = d;
    t = t_;
    s = s_;
  }
}

ComparisonResult comparison_check(const EquationSpec& base, const EquationSpec& dominated, double T, int grid,
                                  double tol) {
  if (grid < 1) throw Error(ErrorCode::InvalidArgument, "comparison grid must be positive");
  const double t0 = base.t_start;
  if (dominated.t_start != t0) throw Error(ErrorCode::InvalidArgument, "comparison needs a common t_start");
  if (!(T > t0)) throw Error(ErrorCode::InvalidArgument, "comparison needs T > t_start");
  ComparisonResult out;

  const double slack = -1e-12;
  const auto nonneg = [&](const Expr& e) { return ess_bounds(e, t0, T).inf >= slack; };
  if (!nonneg(base.a) || !nonneg(dominated.a - base.a)) {
    out.note = "hypothesis a1 >= a >= 0 fails";
    return out;
  }
  if (!nonneg(dominated.b) || !nonneg(base.b - dominated.b)) {
    out.note = "hypothesis b >= b1 >= 0 fails";
    return out;
  }
  if (!positivity_scan(base, T, grid, tol, true).positive) {
    out.note = "Y of the base equation is not positive on the scan grid";
    return out;
  }

  const EquationSpec bh = base.homogeneous_part();
  const EquationSpec dh = dominated.homogeneous_part();
  const double step = (T - t0) / grid;
  const auto bfs = fundamental_system(bh, t0, T, tol);
  const auto dfs = fundamental_system(dh, t0, T, tol);
  for (int i = 1; i <= grid; ++i) {
    const double t = t0 + i * step;
    out.x1.update(bfs.x1.x(t), dfs.x1.x(t), t, t0);
    out.x2.update(bfs.x2.x(t), dfs.x2.x(t), t, t0);
  }

  struct Row {
    ComparisonPart X, Y;
  };
  std::vector<Row> rows(static_cast<std::size_t>(grid));
  parallel_for(rows.size(), [&](std::size_t j) {
    const double s = t0 + static_cast<double>(j) * step;
    const auto X = fundamental_function(bh, s, T, tol);
    const auto V = fundamental_function(dh, s, T, tol);
    const auto Y = integro_fundamental(bh, s, T, tol);
    const auto Y1 = integro_fundamental(dh, s, T, tol);
    for (int i = static_cast<int>(j) + 1; i <= grid; ++i) {
      const double t = t0 + i * step;
      rows[j].X.update(X.x(t), V.x(t), t, s);
      rows[j].Y.update(Y.x(t), Y1.x(t), t, s);
    }
  });
  for (const auto& r : rows) {
    if (r.X.worst > out.X.worst) out.X = r.X;
    if (r.Y.worst > out.Y.worst) out.Y = r.Y;
  }

  // Same coefficients, ordered forcing, zero initial data: larger f gives larger x.
  if (base.f && dominated.f) {
    if (nonneg(*base.f - *dominated.f)) {
      const auto xf = solve_ivp(base, t0, 0.0, 0.0, T, tol);
      EquationSpec lower = base;
      lower.f = dominated.f;
      const auto vf = solve_ivp(lower, t0, 0.0, 0.0, T, tol);
      for (int i = 1; i <= grid; ++i) {
        const double t = t0 + i * step;
        out.forced.update(vf.x(t), xf.x(t), t, t0);
      }
      out.forced_checked = true;
    } else {
      out.note = "forcings not ordered; forced comparison skipped";
    }
  }

  out.worst = std::max({out.x1.worst, out.x2.worst, out.X.worst, out.forced.worst});
  out.status = out.worst <= kComparisonTol ? ComparisonStatus::Holds : ComparisonStatus::Violated;
  return out;
}

double lemma6_consistency(const EquationSpec& eq, double T, int grid, double tol, int s_per_unit) {
  if (grid < 1) throw Error(ErrorCode::InvalidArgument, "lemma6 grid must be positive");
  const EquationSpec h = eq.homogeneous_part();
  const double t0 = eq.t_start;
  const UniformGrid g = make_grid(t0, T, s_per_unit);

  // E(tau) = exp(-int_{t0}^tau a) on the grid, accumulated panel by panel.
  std::vector<double> panel(g.n);
  parallel_for(g.n, [&](std::size_t k) { panel[k] = integrate(eq.a, g.at(k), g.at(k + 1), tol); });
  std::vector<double> E(g.n + 1, 1.0);
  double acc = 0.0;
  for (std::size_t k = 0; k < g.n; ++k) {
    acc += panel[k];
    E[k + 1] = std::exp(-acc);
  }

  std::vector<Trajectory> Y(g.n);
  parallel_for(Y.size(), [&](std::size_t k) { Y[k] = integro_fundamental(h, g.at(k), T, tol); });
  const auto fs = fundamental_system(h, t0, T, tol);

  // int_{tau_j}^{tau_m} Y(tau_m, tau) E(tau) dtau / E(tau_j).
  std::vector<double> y;
  const auto tail = [&](std::size_t j, std::size_t m) {
    const double t = g.at(m);
    y.assign(m - j + 1, 0.0);
    for (std::size_t k = j; k < m; ++k) y[k - j] = Y[k].x(t) * E[k];
    y[m - j] = E[m];
    return simpson_uniform(y, g.h) / E[j];
  };

  std::vector<std::size_t> sj(static_cast<std::size_t>(grid));
  std::vector<Trajectory> X(sj.size());
  parallel_for(sj.size(), [&](std::size_t j) {
    sj[j] = g.index_of(t0 + (T - t0) * static_cast<double>(j) / grid);
    X[j] = fundamental_function(h, g.at(sj[j]), T, tol);
  });

  double worst = 0.0;
  for (int i = 1; i <= grid; ++i) {
    const std::size_t m = g.index_of(t0 + (T - t0) * i / grid);
    const double t = g.at(m);
    worst = std::max(worst, std::abs(fs.x1.x(t) - Y[0].x(t)));
    worst = std::max(worst, std::abs(fs.x2.x(t) - tail(0, m)));
    for (int j = 1; j < i; ++j) {
      if (sj[j] >= m) continue;
      worst = std::max(worst, std::abs(X[j].x(t) - tail(sj[j], m)));
    }
  }
  return worst;
}

BoundedResponse bounded_response(const EquationSpec& eq, double horizon, double tol) {
  if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidArgument, "response horizon must be positive");
  EquationSpec forced = eq;
  forced.f = Expr::constant(1.0);
  const double t0 = eq.t_start;
  SolveOptions opt;
  opt.tol = tol;
  opt.stop = [](double, const State<2>& y) { return state_norm(y) > kHuge; };
  const auto tr = solve_ivp(forced, t0, 0.0, 0.0, t0 + horizon, opt);
  BoundedResponse out;
  const auto& sol = tr.solution();
  const double mid = t0 + 0.5 * horizon;
  for (std::size_t k = 0; k < sol.t.size(); ++k) {
    const double n = state_norm(sol.y[k]);
    if (sol.t[k] <= mid)
      out.max_first_half = std::max(out.max_first_half, n);
    else
      out.max_second_half = std::max(out.max_second_half, n);
  }
  out.bounded = tr.t1() >= t0 + horizon && out.max_second_half <= 1.5 * out.max_first_half + 1e-12;
  return out;
}

}  // namespace oscillint
