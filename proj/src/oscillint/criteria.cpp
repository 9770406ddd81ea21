#include "oscillint/criteria.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "oscillint/error.hpp"
#include "oscillint/integrator.hpp"
#include "oscillint/optimize.hpp"
#include "oscillint/parallel.hpp"
#include "oscillint/quadrature.hpp"

namespace oscillint {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Inapplicable: return "INAPPLICABLE";
  }
  return "?";
}

const char* to_string(Claim c) {
  switch (c) {
    case Claim::None: return "UNDECIDED";
    case Claim::NonoscillationPositivity: return "NONOSCILLATION_POSITIVITY";
    case Claim::ExpStable: return "EXP_STABLE";
    case Claim::Bounded: return "BOUNDED";
    case Claim::TendsToZero: return "TENDS_TO_ZERO";
  }
  return "?";
}

const char* to_string(Lemma2Case c) {
  switch (c) {
    case Lemma2Case::Overdamped: return "a^2>4b";
    case Lemma2Case::Underdamped: return "a^2<4b";
    case Lemma2Case::Critical: return "a^2=4b";
  }
  return "?";
}

std::optional<double> Certificate::witness(const std::string& name) const {
  for (const auto& [k, v] : witnesses)
    if (k == name) return v;
  return std::nullopt;
}

void Certificate::set(const std::string& name, double value) {
  for (auto& [k, v] : witnesses)
    if (k == name) {
      v = value;
      return;
    }
  witnesses.emplace_back(name, value);
}

Lemma2Bounds lemma2_bounds(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "lemma2_bounds needs a > 0 and b > 0, got a = " << a << ", b = " << b;
    throw Error(ErrorCode::Domain, os.str());
  }
  const double d = a * a - 4.0 * b;
  if (d > 0.0) {
    const double r = std::sqrt(d);
    return {1.0 / b, 2.0 * a / (r * (a - r)), Lemma2Case::Overdamped};
  }
  if (d < 0.0) {
    const double r = std::sqrt(-d);
    return {4.0 / (a * r), 2.0 * (a + r) / (a * r), Lemma2Case::Underdamped};
  }
  return {1.0 / b, 2.0 / std::sqrt(b), Lemma2Case::Critical};
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Grid {
  std::vector<double> t;
  std::vector<Side> side;
};

Grid make_grid(const EquationSpec& eq, double lo, double hi, double density) {
  Grid g;
  const auto n = static_cast<std::size_t>(std::max(1000.0, std::ceil((hi - lo) * density)));
  g.t.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    g.t.push_back(i == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n));
    g.side.push_back(i == n ? Side::Left : Side::Right);
  }
  for (double b : eq.breakpoints(lo, hi)) {
    if (b > lo) {
      g.t.push_back(b);
      g.side.push_back(Side::Left);
    }
    if (b < hi) {
      g.t.push_back(b);
      g.side.push_back(Side::Right);
    }
  }
  return g;
}

std::vector<double> sample(const Expr& e, const Grid& g) {
  std::vector<double> out(g.t.size());
  for (std::size_t i = 0; i < g.t.size(); ++i) out[i] = e(g.t[i], g.side[i]);
  return out;
}

double vmin(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }
double vmax(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }
double vabsmax(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Window period_window(const EquationSpec& eq) { return {eq.t_start, eq.t_start + *eq.period, "period"}; }

Window horizon_window(const EquationSpec& eq, double lo, double hi) {
  if (eq.periodic()) return period_window(eq);
  return {lo, hi, "horizon"};
}

Window tail_window(const EquationSpec& eq, double T) {
  if (eq.periodic()) return period_window(eq);
  return {0.5 * T, T, "tail"};
}

double bplus(const EquationSpec& eq, double t, Side s) { return std::max(eq.b(t, s), 0.0); }

double min_sides(const Expr& e, double t, bool at_break) {
  if (!at_break) return e(t, Side::Right);
  return std::min(e(t, Side::Left), e(t, Side::Right));
}

/// m' = g - (a - shift) m from lo; returns the solution (possibly cut short by stop).
Solution<1> aux_run(const EquationSpec& eq, const std::function<double(double, Side)>& g,
                    const std::function<double(double, Side)>& shift, double lo, double hi, double tol,
                    std::function<bool(double, double)> stop) {
  auto h = [&](double t, Side s) { return eq.a(t, s) - shift(t, s); };
  return solve_scalar(g, h, lo, hi, eq.breakpoints(lo, hi), std::max(tol, 1e-12), std::move(stop));
}

/// Visits the nodes and step midpoints of a scalar solution; at breakpoint
/// nodes `at_break` is set so callers can take both one-sided limits.
template <class Fn>
void visit(const Solution<1>& sol, const std::vector<double>& breaks, Fn&& fn) {
  std::size_t bi = 0;
  for (std::size_t k = 0; k < sol.t.size(); ++k) {
    const double t = sol.t[k];
    while (bi < breaks.size() && breaks[bi] < t) ++bi;
    const bool at_break = bi < breaks.size() && breaks[bi] == t;
    fn(t, sol.y[k][0], at_break);
    if (k + 1 < sol.t.size()) fn(0.5 * (t + sol.t[k + 1]), sol.mid[k][0], false);
  }
}

/// min over [lo, hi] of a(t) - int_lo^t b+.
double cumulative_margin(const EquationSpec& eq, double lo, double hi, double tol, double a_sup) {
  auto g = [&](double t, Side s) { return bplus(eq, t, s); };
  auto same_as_a = [&](double t, Side s) { return eq.a(t, s); };  // m' = b+
  const double cap = a_sup + 1.0;
  auto sol = aux_run(eq, g, same_as_a, lo, hi, tol, [cap](double, double m) { return m > cap; });
  double worst = kInf;
  const auto breaks = eq.breakpoints(lo, hi);
  visit(sol, breaks, [&](double t, double m, bool at_break) { worst = std::min(worst, min_sides(eq.a, t, at_break) - m); });
  if (sol.t1() < hi) worst = std::min(worst, -1.0);
  return worst;
}

struct RatioResult {
  double R;
  double t0_hold;  // earliest node from which m / lambda < 1 holds to the end (NaN if never)
};

/// sup over [tail_lo, hi] of m_lambda(t) / lambda, m' = b+ - (a - lambda) m, m(lo) = 0.
RatioResult ratio_sup(const EquationSpec& eq, double lambda, double lo, double hi, double tail_lo, double tol,
                      double cap_ratio, bool want_t0 = false) {
  auto g = [&](double t, Side s) { return bplus(eq, t, s); };
  auto shift = [lambda](double, Side) { return lambda; };
  const double cap = cap_ratio * lambda;
  auto sol = aux_run(eq, g, shift, lo, hi, tol, [cap](double, double m) { return m > cap; });
  if (sol.t1() < hi) return {sol.y.back()[0] / lambda, kNaN};
  double sup = 0.0;
  double t0 = kNaN;
  bool holding = true;
  for (std::size_t k = sol.t.size(); k-- > 0;) {
    const double r = sol.y[k][0] / lambda;
    const double rm = k + 1 < sol.t.size() ? sol.mid[k][0] / lambda : 0.0;
    if (sol.t[k] >= tail_lo) sup = std::max({sup, r, rm});
    if (want_t0 && holding) {
      if (r < 1.0 && rm < 1.0)
        t0 = sol.t[k];
      else
        holding = false;
    }
  }
  return {sup, t0};
}

struct LambdaSearch {
  double lambda;
  double R;
};

/// Log-grid (10 per decade on [1e-4, 1e4]) then golden refinement of R(lambda).
LambdaSearch search_lambda(const std::function<double(double)>& R) {
  std::vector<double> grid;
  for (int k = -40; k <= 40; ++k) grid.push_back(std::pow(10.0, k / 10.0));
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = R(grid[i]);
  const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  const double lo = std::log(grid[best == 0 ? 0 : best - 1]);
  const double hi = std::log(grid[std::min(best + 1, grid.size() - 1)]);
  auto m = golden_section([&](double u) { return R(std::exp(u)); }, lo, hi, 1e-6, 60);
  if (m.f <= vals[best]) return {std::exp(m.x), m.f};
  return {grid[best], vals[best]};
}

bool nonstrict_ok(double slack, double scale, const CertConfig& cfg) { return slack >= -cfg.margin * scale; }

Certificate base(const std::string& id, const Window& w, const std::string& condition) {
  Certificate c;
  c.criterion = id;
  c.window = w;
  c.condition = condition;
  c.margin = kNaN;
  return c;
}

}  // namespace

Certificate cert_quadratic_lambda(const EquationSpec& eq, double horizon, const CertConfig& cfg) {
  if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon must be > 0");
  auto c = base("C1", horizon_window(eq, eq.t_start, eq.t_start + horizon),
                "exists real lambda with lambda^2 + a(t) lambda + b(t) <= 0 for all t");
  const Grid g = make_grid(eq, c.window.lo, c.window.hi, cfg.sample_density);
  const auto A = sample(eq.a, g);
  const auto B = sample(eq.b, g);
  c.rigorous = eq.a.is_constant() && eq.b.is_constant();
  const double amax = vabsmax(A);
  const double bmax = vabsmax(B);
  const double L = 1.0 + std::max(amax, bmax);
  auto gfun = [&](double lam) {
    double s = -kInf;
    for (std::size_t i = 0; i < A.size(); ++i) s = std::max(s, lam * lam + A[i] * lam + B[i]);
    return s;
  };
  const auto m = golden_section(gfun, -L, L, 1e-12 * L);
  const double binf = vmin(B);
  c.set("lambda", m.x);
  c.set("g_min", m.f);
  c.set("inf_b", binf);
  c.margin = -m.f;
  const double scale = 1.0 + m.x * m.x + amax * std::abs(m.x) + bmax;
  if (nonstrict_ok(-m.f, scale, cfg)) {
    c.verdict = Verdict::Pass;
    c.claim = (m.x < -cfg.margin && binf > cfg.margin) ? Claim::ExpStable : Claim::NonoscillationPositivity;
  } else {
    c.verdict = Verdict::Fail;
  }
  return c;
}

Certificate cert_levin(const EquationSpec& eq, double horizon, const CertConfig& cfg) {
  if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon must be > 0");
  auto c = base("C2_LEVIN", horizon_window(eq, eq.t_start, eq.t_start + horizon),
                "a^2/4 - b >= 0 and sup lambda1(t) < inf lambda2(t), lambda1,2 = -a/2 -+ sqrt(a^2/4 - b)");
  const Grid g = make_grid(eq, c.window.lo, c.window.hi, cfg.sample_density);
  const auto A = sample(eq.a, g);
  const auto B = sample(eq.b, g);
  c.rigorous = eq.a.is_constant() && eq.b.is_constant();
  std::vector<double> l1(A.size()), l2(A.size());
  double dmin = kInf;
  double scale = 1.0;
  for (std::size_t i = 0; i < A.size(); ++i) {
    const double d = 0.25 * A[i] * A[i] - B[i];
    dmin = std::min(dmin, d);
    scale = std::max(scale, 0.25 * A[i] * A[i] + std::abs(B[i]));
    const double r = std::sqrt(std::max(d, 0.0));
    l1[i] = -0.5 * A[i] - r;
    l2[i] = -0.5 * A[i] + r;
  }
  c.set("min_discriminant", dmin);
  if (!nonstrict_ok(dmin, scale, cfg)) {
    c.verdict = Verdict::Inapplicable;
    c.margin = dmin;
    c.note = "a^2/4 - b is negative somewhere in the window";
    return c;
  }
  const double nu0 = vmin(l1);
  const double sup1 = vmax(l1);
  const double inf2 = vmin(l2);
  const double nu2 = vmax(l2);
  const double gap = inf2 - sup1;
  c.set("nu0", nu0);
  c.set("nu1", 0.5 * (sup1 + inf2));
  c.set("nu2", nu2);
  c.set("gap", gap);
  c.margin = gap;
  if (gap > cfg.margin) {
    c.verdict = Verdict::Pass;
    c.claim = nu2 < -cfg.margin ? Claim::ExpStable : Claim::NonoscillationPositivity;
  } else {
    c.verdict = Verdict::Fail;
  }
  return c;
}

Certificate cert_thm3(const EquationSpec& eq, double t0, double horizon, const CertConfig& cfg) {
  if (!(horizon > t0)) throw Error(ErrorCode::InvalidArgument, "cert_thm3 needs horizon > t0");
  const Window w{t0, horizon, "horizon"};
  auto c = base("T3_1", w, "a(t) >= int_{t0}^t b+(s) ds");
  c.claim = Claim::NonoscillationPositivity;
  // Pointwise sups need only one period.
  const bool one_cell = eq.periodic() && w.hi - w.lo >= *eq.period;
  const Grid g = make_grid(eq, w.lo, one_cell ? w.lo + *eq.period : w.hi, cfg.sample_density);
  const auto A = sample(eq.a, g);
  std::vector<double> Bp = sample(eq.b, g);
  for (double& v : Bp) v = std::max(v, 0.0);
  c.rigorous = false;
  const double asup = vabsmax(A);
  const double ainf = vmin(A);

  const double m1 = cumulative_margin(eq, w.lo, w.hi, cfg.tol, asup);
  c.set("margin1", m1);
  if (nonstrict_ok(m1, 1.0 + asup, cfg)) {
    c.verdict = Verdict::Pass;
    c.margin = m1;
    return c;
  }

  auto F = [&](double u) {
    const double lam = std::exp(u);
    double s = -kInf;
    for (std::size_t i = 0; i < A.size(); ++i) s = std::max(s, lam * Bp[i] + 1.0 / lam - A[i]);
    return s;
  };
  const auto m2 = golden_section(F, std::log(1e-6), std::log(1e6), 1e-10);
  const double lam2 = std::exp(m2.x);
  c.set("lambda2", lam2);
  c.set("margin2", -m2.f);
  if (nonstrict_ok(-m2.f, 1.0 + asup + lam2 * vmax(Bp) + 1.0 / lam2, cfg)) {
    c.criterion = "T3_2";
    c.condition = "exists lambda > 0 with a(t) >= lambda b+(t) + 1/lambda";
    c.verdict = Verdict::Pass;
    c.margin = -m2.f;
    c.set("lambda", lam2);
    return c;
  }

  c.criterion = "T3_3";
  c.condition = "a >= 0 and exists lambda > 0 with int_{t0}^t exp(-int_s^t (a - lambda)) b+(s) ds <= lambda";
  c.set("inf_a", ainf);
  if (!nonstrict_ok(ainf, 1.0 + asup, cfg)) {
    c.verdict = Verdict::Fail;
    c.margin = std::max(m1, -m2.f);
    c.note = "a takes negative values; condition 3 not applicable";
    return c;
  }
  auto R = [&](double lam) { return ratio_sup(eq, lam, w.lo, w.hi, w.lo, cfg.tol, 2.0).R; };
  const auto s3 = search_lambda(R);
  c.set("lambda3", s3.lambda);
  c.set("ratio3", s3.R);
  c.set("margin3", 1.0 - s3.R);
  c.margin = 1.0 - s3.R;
  if (nonstrict_ok(1.0 - s3.R, 1.0, cfg)) {
    c.verdict = Verdict::Pass;
    c.set("lambda", s3.lambda);
  } else {
    c.verdict = Verdict::Fail;
    c.margin = std::max({m1, -m2.f, 1.0 - s3.R});
  }
  return c;
}

Certificate cert_cor7(const EquationSpec& eq, double search_T, const CertConfig& cfg) {
  if (!(search_T > eq.t_start)) throw Error(ErrorCode::InvalidArgument, "search_T must exceed t_start");
  const Window w = tail_window(eq, search_T);
  auto c = base("C7_1", w, "inf a > 0 and int_0^inf b+ < inf");
  c.claim = Claim::NonoscillationPositivity;
  const Grid g = make_grid(eq, w.lo, w.hi, cfg.sample_density);
  const auto A = sample(eq.a, g);
  std::vector<double> Bp = sample(eq.b, g);
  for (double& v : Bp) v = std::max(v, 0.0);
  const double ainf = vmin(A);
  const double asup = vabsmax(A);
  const double Bsup = vmax(Bp);
  c.set("inf_a", ainf);
  c.set("B", Bsup);

  // Earliest t0 scans run on the full range at check density.
  const double full_hi = eq.periodic() ? w.hi : search_T;
  const Grid gc = make_grid(eq, eq.t_start, full_hi, cfg.check_density);
  std::vector<std::size_t> order(gc.t.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return gc.t[x] < gc.t[y]; });
  auto earliest = [&](auto&& holds) {
    double t0 = kNaN;
    for (std::size_t k = order.size(); k-- > 0;) {
      const std::size_t i = order[k];
      if (!holds(gc.t[i], gc.side[i])) break;
      t0 = gc.t[i];
    }
    return t0;
  };

  // Condition 1.
  auto bp_fn = [&](double t) { return bplus(eq, t, Side::Right); };
  double head = 0.0, tail = 0.0;
  bool summable;
  if (eq.periodic()) {
    tail = integrate_adaptive(bp_fn, w.lo, w.hi, 1e-9, eq.b.breakpoints(w.lo, w.hi)).value;
    summable = tail <= 1e-12;
  } else {
    head = integrate_adaptive(bp_fn, eq.t_start, w.lo, 1e-8, eq.b.breakpoints(eq.t_start, w.lo)).value;
    tail = integrate_adaptive(bp_fn, w.lo, w.hi, 1e-8, eq.b.breakpoints(w.lo, w.hi)).value;
    summable = tail <= 1e-2 * std::max(1.0, head);
  }
  c.set("bplus_mass_head", head);
  c.set("bplus_mass_tail", tail);
  c.set("margin1", ainf);
  if (ainf > cfg.margin && summable) {
    c.verdict = Verdict::Pass;
    c.margin = ainf;
    c.set("t0", earliest([&](double t, Side s) { return eq.a(t, s) > cfg.margin; }));
    c.note = "summability judged from the tail mass of b+";
    return c;
  }

  // Condition 2.
  double a2 = kInf;
  for (double v : A) a2 = std::min(a2, v * v);
  const double m2 = a2 - 4.0 * Bsup;
  c.set("margin2", m2);
  if (nonstrict_ok(m2, 1.0 + asup * asup, cfg) && nonstrict_ok(ainf, 1.0 + asup, cfg)) {
    c.criterion = "C7_2";
    c.condition = "a(t) >= 0 and a(t)^2 >= 4B, B = limsup b+(t)";
    c.verdict = Verdict::Pass;
    c.margin = m2;
    c.set("t0", earliest([&](double t, Side s) {
      const double a = eq.a(t, s);
      return a >= 0.0 && a * a - 4.0 * Bsup >= -cfg.margin * (1.0 + asup * asup);
    }));
    return c;
  }

  // Condition 3.
  c.criterion = "C7_3";
  c.condition = "inf over lambda > 0 of limsup (1/lambda) int_0^t exp(-int_s^t (a - lambda)) b+(s) ds < 1";
  const double run_hi = eq.periodic() ? eq.t_start + std::max(50.0 * *eq.period, w.hi - w.lo) : search_T;
  const double tail_lo = eq.periodic() ? run_hi - *eq.period : w.lo;
  auto R = [&](double lam) { return ratio_sup(eq, lam, eq.t_start, run_hi, tail_lo, cfg.tol, 1e8).R; };
  const auto s3 = search_lambda(R);
  c.set("lambda", s3.lambda);
  c.set("ratio3", s3.R);
  c.set("margin3", 1.0 - s3.R);
  c.margin = 1.0 - s3.R;
  if (1.0 - s3.R > cfg.margin) {
    c.verdict = Verdict::Pass;
    c.set("t0", ratio_sup(eq, s3.lambda, eq.t_start, run_hi, tail_lo, cfg.tol, 1e8, true).t0_hold);
  } else {
    c.verdict = Verdict::Fail;
    c.margin = std::max({ainf, m2, 1.0 - s3.R});
  }
  return c;
}

Certificate cert_thm6(const EquationSpec& eq, const std::vector<Certificate>& positivity, const CertConfig& cfg) {
  auto c = base("T6", horizon_window(eq, eq.t_start, eq.t_start + cfg.horizon),
                "inf a > 0, inf b > 0 and a positive fundamental function");
  const auto ba = ess_bounds(eq.a, c.window.lo, c.window.hi, cfg.sample_density);
  const auto bb = ess_bounds(eq.b, c.window.lo, c.window.hi, cfg.sample_density);
  c.rigorous = ba.rigorous && bb.rigorous;
  c.set("alpha", ba.inf);
  c.set("beta", bb.inf);
  c.margin = std::min(ba.inf, bb.inf);
  std::string via;
  for (const auto& p : positivity)
    if (p.passed() && (p.claim == Claim::NonoscillationPositivity || p.claim == Claim::ExpStable)) {
      via = p.criterion;
      break;
    }
  c.claim = Claim::ExpStable;
  if (!(ba.inf > cfg.margin && bb.inf > cfg.margin)) {
    c.verdict = Verdict::Fail;
    c.note = "needs inf a > 0 and inf b > 0";
  } else if (via.empty()) {
    c.verdict = Verdict::Fail;
    c.note = "no positivity certificate passed";
  } else {
    c.verdict = Verdict::Pass;
    c.note = "positivity via " + via;
  }
  return c;
}

Certificate cert_thm7(const EquationSpec& eq, double search_T, const CertConfig& cfg) {
  const Window w = tail_window(eq, search_T);
  auto c = base("T7", w, "0 < liminf b <= limsup b < (liminf a)^2 / 2");
  const auto ba = ess_bounds(eq.a, w.lo, w.hi, cfg.sample_density);
  const auto bb = ess_bounds(eq.b, w.lo, w.hi, cfg.sample_density);
  c.rigorous = ba.rigorous && bb.rigorous;
  const double alpha = ba.inf, beta = bb.inf, B = bb.sup;
  c.set("alpha", alpha);
  c.set("beta", beta);
  c.set("B", B);
  c.claim = Claim::ExpStable;
  const double upper = 0.5 * alpha * alpha - B;
  c.margin = std::min(beta, upper);
  if (alpha > 0.0) c.set("epsilon", std::min(4.0 * beta / (alpha * alpha), 2.0 - 4.0 * B / (alpha * alpha)));
  if (beta > cfg.margin && upper > cfg.margin && alpha > cfg.margin) {
    c.verdict = Verdict::Pass;
  } else {
    c.verdict = Verdict::Fail;
    if (!(alpha > cfg.margin)) c.note = "liminf a must be positive";
  }
  return c;
}

namespace {

Window norm_window(const EquationSpec& eq, double t0, const CertConfig& cfg) {
  if (eq.periodic()) return period_window(eq);
  return {t0, std::max(cfg.search_T, t0 + 1.0), "horizon"};
}

}  // namespace

Thm8Norms thm8_norms(const EquationSpec& eq, double t0, const CertConfig& cfg) {
  const Window w = norm_window(eq, t0, cfg);
  const auto ba = ess_bounds(eq.a, w.lo, w.hi, cfg.sample_density);
  const auto bb = ess_bounds(eq.b, w.lo, w.hi, cfg.sample_density);
  Thm8Norms n{ba.inf, ba.sup, bb.inf, bb.sup, 0.0};
  if (eq.a.is_constant() && eq.b.is_constant()) {
    n.b_over_a = std::abs(bb.sup / ba.sup);
  } else {
    const Grid g = make_grid(eq, w.lo, w.hi, cfg.sample_density);
    const auto A = sample(eq.a, g);
    const auto B = sample(eq.b, g);
    for (std::size_t i = 0; i < A.size(); ++i) n.b_over_a = std::max(n.b_over_a, std::abs(B[i] / A[i]));
  }
  return n;
}

double thm8_margin(const Thm8Norms& n, double A, double B) {
  if (!(A > 0.0) || !(B > 0.0)) return -kInf;
  const double na = std::max(A - n.a_lo, n.a_hi - A);
  const double nb = std::max(B - n.b_lo, n.b_hi - B);
  const double rhs = A * A >= 4.0 * B ? B : A * std::sqrt(4.0 * B - A * A) / 4.0;
  return rhs - (na * n.b_over_a + nb);
}

double thm9_margin(double a_lo, double a_hi, double b_lo, double b_hi, double a0, double b0) {
  if (!(a0 > 0.0) || !(b0 > 0.0)) return -kInf;
  const auto K = lemma2_bounds(a0, b0);
  const double na = std::max(a0 - a_lo, a_hi - a0);
  const double nb = std::max(b0 - b_lo, b_hi - b0);
  return 1.0 - (na * K.K1 + nb * K.K0);
}

Certificate cert_thm8(const EquationSpec& eq, double t0, const CertConfig& cfg) {
  const Window w = norm_window(eq, t0, cfg);
  auto c = base("T8", w, "|a - A| |b/a| + |b - B| < (B if A^2 >= 4B, else A sqrt(4B - A^2) / 4)");
  c.claim = Claim::ExpStable;
  const auto ba = ess_bounds(eq.a, w.lo, w.hi, cfg.sample_density);
  const auto bb = ess_bounds(eq.b, w.lo, w.hi, cfg.sample_density);
  c.rigorous = ba.rigorous && bb.rigorous && eq.a.is_constant() && eq.b.is_constant();
  if (!(ba.inf > 0.0) || bb.inf < 0.0) {
    c.verdict = Verdict::Inapplicable;
    c.note = "needs ess inf a > 0 and b >= 0";
    c.set("inf_a", ba.inf);
    c.set("inf_b", bb.inf);
    return c;
  }
  const auto n = thm8_norms(eq, t0, cfg);
  const double A0 = 0.5 * (n.a_lo + n.a_hi);
  const double B0 = 0.5 * (n.b_lo + n.b_hi);
  const double natural = thm8_margin(n, A0, B0);
  NelderMeadOptions opt;
  opt.restarts = cfg.nm_restarts;
  const auto best = nelder_mead_box([&](double A, double B) { return -thm8_margin(n, A, B); }, {A0, B0},
                                    {1e-6, 1e-6}, {2.0 * n.a_hi + 1.0, 2.0 * n.b_hi + 1.0}, opt);
  c.set("A", A0);
  c.set("B", B0);
  c.set("margin", natural);
  c.set("norm_b_over_a", n.b_over_a);
  double margin = natural;
  double As = A0, Bs = B0;
  if (-best.f > natural) {
    margin = -best.f;
    As = best.x[0];
    Bs = best.x[1];
  }
  c.set("A_search", As);
  c.set("B_search", Bs);
  c.set("margin_search", margin);
  c.margin = margin;
  c.verdict = margin > cfg.margin ? Verdict::Pass : Verdict::Fail;
  return c;
}

Certificate cert_thm9(const EquationSpec& eq, double t0, const CertConfig& cfg) {
  const Window w = norm_window(eq, t0, cfg);
  auto c = base("T9_2", w, "|a(t) - a| K1(a, b) + |b(t) - b| K0(a, b) < 1");
  c.claim = Claim::ExpStable;
  const auto ba = ess_bounds(eq.a, w.lo, w.hi, cfg.sample_density);
  const auto bb = ess_bounds(eq.b, w.lo, w.hi, cfg.sample_density);
  c.rigorous = ba.rigorous && bb.rigorous;
  if (!(ba.inf > 0.0) || bb.inf < 0.0) {
    c.verdict = Verdict::Inapplicable;
    c.note = "needs ess inf a > 0 and b >= 0";
    c.set("inf_a", ba.inf);
    c.set("inf_b", bb.inf);
    return c;
  }
  auto margin_at = [&](double a0, double b0) { return thm9_margin(ba.inf, ba.sup, bb.inf, bb.sup, a0, b0); };
  const double a0 = 0.5 * (ba.inf + ba.sup);
  const double b0 = 0.5 * (bb.inf + bb.sup);
  const double natural = margin_at(a0, b0);
  NelderMeadOptions opt;
  opt.restarts = cfg.nm_restarts;
  const auto best = nelder_mead_box([&](double x, double y) { return -margin_at(x, y); }, {a0, b0}, {1e-6, 1e-6},
                                    {2.0 * ba.sup + 1.0, 2.0 * bb.sup + 1.0}, opt);
  double margin = natural;
  double as = a0, bs = b0;
  if (-best.f > natural) {
    margin = -best.f;
    as = best.x[0];
    bs = best.x[1];
  }
  c.set("a", a0);
  c.set("b", b0);
  c.set("margin", natural);
  c.set("a_search", as);
  c.set("b_search", bs);
  c.set("margin_search", margin);
  if (as > 0.0 && bs > 0.0) {
    const auto K = lemma2_bounds(as, bs);
    c.set("K0", K.K0);
    c.set("K1", K.K1);
    c.criterion = K.kind == Lemma2Case::Overdamped ? "T9_1" : K.kind == Lemma2Case::Underdamped ? "T9_2" : "T9_3";
  }
  c.margin = margin;
  c.verdict = margin > cfg.margin ? Verdict::Pass : Verdict::Fail;
  return c;
}

Certificate cert_thm10(const EquationSpec& eq, const CertConfig& cfg) {
  if (!eq.periodic()) {
    auto c = base("T10", {eq.t_start, eq.t_start, "period"}, "needs a declared period");
    c.verdict = Verdict::Inapplicable;
    c.note = "equation has no declared period";
    return c;
  }
  const Window w = period_window(eq);
  const double omega = *eq.period;
  auto c = base("T10", w,
                "int_0^w p > 0 with p = b - a^2/4 - a'/2, and one of: a(t) >= int_0^t b+; "
                "a >= 0 and the lambda test; int_0^w p+ <= 4/w");
  const Expr p = eq.b - Expr::scale(0.25, eq.a * eq.a) - Expr::scale(0.5, derivative(eq.a));
  const double int_a = integrate(eq.a, w.lo, w.hi, cfg.tol);
  const double int_p = integrate(p, w.lo, w.hi, cfg.tol);
  const auto ba = ess_bounds(eq.a, w.lo, w.hi, cfg.sample_density);
  c.rigorous = ba.rigorous;
  c.set("int_a", int_a);
  c.set("int_p", int_p);
  const double zero_tol = 1e-9 * (1.0 + omega * ba.abs_max());
  if (int_a < -zero_tol) {
    c.verdict = Verdict::Inapplicable;
    c.note = "integral of a over a period is negative";
    return c;
  }
  c.claim = std::abs(int_a) <= zero_tol ? Claim::Bounded : Claim::TendsToZero;
  if (!(int_p > cfg.margin)) {
    c.verdict = Verdict::Fail;
    c.margin = int_p;
    c.note = "integral of p over a period is not positive";
    return c;
  }

  const double m1 = cumulative_margin(eq, w.lo, w.hi, cfg.tol, ba.abs_max());
  c.set("margin1", m1);
  if (nonstrict_ok(m1, 1.0 + ba.abs_max(), cfg)) {
    c.verdict = Verdict::Pass;
    c.margin = m1;
    c.set("condition", 1);
    return c;
  }

  double m2 = -kInf;
  if (nonstrict_ok(ba.inf, 1.0 + ba.abs_max(), cfg)) {
    auto R = [&](double lam) { return ratio_sup(eq, lam, w.lo, w.hi, w.lo, cfg.tol, 2.0).R; };
    const auto s = search_lambda(R);
    m2 = 1.0 - s.R;
    c.set("lambda", s.lambda);
    c.set("margin2", m2);
    if (nonstrict_ok(m2, 1.0, cfg)) {
      c.verdict = Verdict::Pass;
      c.margin = m2;
      c.set("condition", 2);
      return c;
    }
  }

  auto pplus = [&](double t) { return std::max(p(t, Side::Right), 0.0); };
  const double int_pp = integrate_adaptive(pplus, w.lo, w.hi, cfg.tol, p.breakpoints(w.lo, w.hi)).value;
  const double m3 = 4.0 / omega - int_pp;
  c.set("int_p_plus", int_pp);
  c.set("margin3", m3);
  if (nonstrict_ok(m3, 1.0 + 4.0 / omega, cfg)) {
    c.verdict = Verdict::Pass;
    c.margin = m3;
    c.set("condition", 3);
  } else {
    c.verdict = Verdict::Fail;
    c.margin = std::max({m1, m2, m3});
  }
  return c;
}

Certificate cert_witness_u(const EquationSpec& eq, const Expr& u, double horizon, const CertConfig& cfg) {
  const double lo = eq.t_start, hi = eq.t_start + horizon;
  if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon must be > 0");
  auto c = base("WITNESS_U", {lo, hi, "horizon"}, "u(t) >= int_0^t exp(-int_s^t (a - u)) b(s) ds");
  c.claim = Claim::NonoscillationPositivity;
  const auto bu = ess_bounds(u, lo, hi, cfg.sample_density);
  const auto ba = ess_bounds(eq.a, lo, hi, cfg.sample_density);
  const auto bb = ess_bounds(eq.b, lo, hi, cfg.sample_density);
  c.rigorous = bu.rigorous && ba.rigorous && bb.rigorous;
  c.set("inf_u", bu.inf);
  if (bu.inf < 0.0 || ba.inf < 0.0 || bb.inf < 0.0) {
    c.verdict = Verdict::Inapplicable;
    c.note = "needs u >= 0, a >= 0 and b >= 0";
    return c;
  }
  auto g = [&](double t, Side s) { return eq.b(t, s); };
  auto shift = [&](double t, Side s) { return u(t, s); };
  const double cap = 2.0 * bu.sup + 1.0;
  std::vector<double> breaks = eq.breakpoints(lo, hi);
  for (double b : u.breakpoints(lo, hi)) breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  auto h = [&](double t, Side s) { return eq.a(t, s) - shift(t, s); };
  const auto sol = solve_scalar(g, h, lo, hi, breaks, std::max(cfg.tol, 1e-12), [cap](double, double m) { return m > cap; });
  double worst = kInf;
  visit(sol, breaks, [&](double t, double m, bool at_break) { worst = std::min(worst, min_sides(u, t, at_break) - m); });
  if (sol.t1() < hi) worst = std::min(worst, -1.0);
  c.set("margin", worst);
  c.margin = worst;
  c.verdict = nonstrict_ok(worst, 1.0 + bu.sup, cfg) ? Verdict::Pass : Verdict::Fail;
  return c;
}

bool verify_witness_u(const EquationSpec& eq, const Expr& u, double horizon, const CertConfig& cfg) {
  return cert_witness_u(eq, u, horizon, cfg).passed();
}

namespace {

int rank(Claim c) {
  switch (c) {
    case Claim::ExpStable: return 4;
    case Claim::TendsToZero: return 3;
    case Claim::Bounded: return 2;
    case Claim::NonoscillationPositivity: return 1;
    case Claim::None: return 0;
  }
  return 0;
}

}  // namespace

const std::vector<std::string>& criterion_families() {
  static const std::vector<std::string> names{"C1", "C2_LEVIN", "T3", "C7", "T6", "T7", "T8", "T9", "T10"};
  return names;
}

CertifyReport certify_all(const EquationSpec& eq, const CertConfig& cfg, const std::vector<std::string>& only) {
  const auto& names = criterion_families();
  for (const auto& o : only)
    if (std::find(names.begin(), names.end(), o) == names.end())
      throw Error(ErrorCode::InvalidArgument, "unknown criterion '" + o + "'");
  const auto wanted = [&](const std::string& n) {
    return only.empty() || std::find(only.begin(), only.end(), n) != only.end();
  };
  const bool t6 = wanted("T6");
  // Slot i of `first` holds family names[i < 4 ? i : i + 1].
  std::vector<bool> run(8);
  for (std::size_t i = 0; i < 8; ++i) run[i] = wanted(names[i < 4 ? i : i + 1]) || (i < 4 && t6);

  const EquationSpec h = eq.homogeneous_part();
  std::vector<Certificate> first(8);
  parallel_for(first.size(), [&](std::size_t i) {
    if (!run[i]) return;
    switch (i) {
      case 0: first[i] = cert_quadratic_lambda(h, cfg.horizon, cfg); break;
      case 1: first[i] = cert_levin(h, cfg.horizon, cfg); break;
      case 2: first[i] = cert_thm3(h, cfg.t0, cfg.t0 + cfg.horizon, cfg); break;
      case 3: first[i] = cert_cor7(h, cfg.search_T, cfg); break;
      case 4: first[i] = cert_thm7(h, cfg.search_T, cfg); break;
      case 5: first[i] = cert_thm8(h, cfg.t0, cfg); break;
      case 6: first[i] = cert_thm9(h, cfg.t0, cfg); break;
      case 7: first[i] = cert_thm10(h, cfg); break;
    }
  });
  CertifyReport r;
  for (std::size_t i = 0; i < 4; ++i)
    if (wanted(names[i])) r.certificates.push_back(first[i]);
  if (t6) r.certificates.push_back(cert_thm6(h, {first[0], first[1], first[2], first[3]}, cfg));
  for (std::size_t i = 4; i < 8; ++i)
    if (wanted(names[i + 1])) r.certificates.push_back(first[i]);

  for (const auto& c : r.certificates)
    if (c.passed() && rank(c.claim) > rank(r.summary)) r.summary = c.claim;
  if (r.summary != Claim::None)
    for (const auto& c : r.certificates)
      if (c.passed() && c.claim == r.summary) r.summary_criteria.push_back(c.criterion);
  return r;
}

}  // namespace oscillint
