#include "oscillint/expr.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "oscillint/error.hpp"

namespace oscillint {

struct Expr::Node {
  Kind kind = Kind::Const;
  double a = 0.0;  // value | amp | factor
  double b = 0.0;  // freq
  double c = 0.0;  // phase
  std::vector<double> coeffs;
  std::vector<double> breaks;
  std::vector<double> values;
  std::optional<double> period;
  std::vector<Expr> args;
};

namespace {

constexpr double kPi = std::numbers::pi;

// Range check of a denominator before a quotient node is admitted.
constexpr double kQuotCheckSpan = 200.0;
constexpr int kQuotCheckSamples = 20000;

double sided_tolerance(double t) { return 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)); }

std::string fmt_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Expr::Expr() : Expr(constant(0.0)) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->a = value;
  return Expr(std::move(n));
}

Expr Expr::sine(double amp, double freq, double phase) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sin;
  n->a = amp;
  n->b = freq;
  n->c = phase;
  return Expr(std::move(n));
}

Expr Expr::cosine(double amp, double freq, double phase) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Cos;
  n->a = amp;
  n->b = freq;
  n->c = phase;
  return Expr(std::move(n));
}

Expr Expr::poly(std::vector<double> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  auto n = std::make_shared<Node>();
  n->kind = Kind::Poly;
  n->coeffs = std::move(coeffs);
  return Expr(std::move(n));
}

Expr Expr::pw_const(std::vector<double> breaks, std::vector<double> values, std::optional<double> period) {
  if (values.size() != breaks.size() + 1)
    throw Error(ErrorCode::InvalidArgument, "pw_const needs exactly one more value than breaks");
  if (!std::is_sorted(breaks.begin(), breaks.end()) ||
      std::adjacent_find(breaks.begin(), breaks.end()) != breaks.end())
    throw Error(ErrorCode::InvalidArgument, "pw_const breaks must be strictly increasing");
  if (period) {
    if (!(*period > 0.0)) throw Error(ErrorCode::InvalidArgument, "pw_const period must be positive");
    for (double b : breaks)
      if (!(b > 0.0 && b < *period))
        throw Error(ErrorCode::InvalidArgument, "periodic pw_const breaks must lie in (0, period)");
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::PwConst;
  n->breaks = std::move(breaks);
  n->values = std::move(values);
  n->period = period;
  return Expr(std::move(n));
}

Expr Expr::sum(std::vector<Expr> args) {
  if (args.empty()) return constant(0.0);
  if (args.size() == 1) return args.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sum;
  n->args = std::move(args);
  return Expr(std::move(n));
}

Expr Expr::prod(std::vector<Expr> args) {
  if (args.empty()) return constant(1.0);
  if (args.size() == 1) return args.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Prod;
  n->args = std::move(args);
  return Expr(std::move(n));
}

Expr Expr::quot(Expr num, Expr den) {
  int sign = 0;
  auto check = [&](double t, double v) {
    if (!(std::abs(v) > 1e-12) || (sign != 0 && (v > 0 ? 1 : -1) != sign))
      throw Error(ErrorCode::Domain, "quotient denominator vanishes near t = " + fmt_real(t));
    sign = v > 0 ? 1 : -1;
  };
  for (int k = 0; k <= kQuotCheckSamples; ++k) {
    const double t = kQuotCheckSpan * k / kQuotCheckSamples;
    check(t, den(t, k == kQuotCheckSamples ? Side::Left : Side::Right));
  }
  for (double bp : den.breakpoints(0.0, kQuotCheckSpan)) {
    const auto s = eval_sides(den, bp);
    check(bp, s.left);
    check(bp, s.right);
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Quot;
  n->args = {std::move(num), std::move(den)};
  return Expr(std::move(n));
}

Expr Expr::scale(double factor, Expr arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Scale;
  n->a = factor;
  n->args = {std::move(arg)};
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
double Expr::value() const { return node_->a; }
double Expr::amp() const { return node_->a; }
double Expr::freq() const { return node_->b; }
double Expr::phase() const { return node_->c; }
const std::vector<double>& Expr::coeffs() const { return node_->coeffs; }
const std::vector<double>& Expr::breaks() const { return node_->breaks; }
const std::vector<double>& Expr::values() const { return node_->values; }
std::optional<double> Expr::period() const { return node_->period; }
double Expr::factor() const { return node_->a; }
const std::vector<Expr>& Expr::args() const { return node_->args; }

namespace {

double eval_pw_const(const std::vector<double>& breaks, const std::vector<double>& values,
                     std::optional<double> period, double t, Side side) {
  double tau = t;
  if (period) {
    tau = t - std::floor(t / *period) * *period;
    if (tau >= *period) tau = 0.0;
  }
  const double eps = sided_tolerance(t);
  // Periodic wrap point acts as a breakpoint when the pattern does not close up.
  if (period && values.front() != values.back()) {
    const double dist = std::min(tau, *period - tau);
    if (dist == 0.0 && side == Side::None)
      throw Error(ErrorCode::Breakpoint, "coefficient evaluated at breakpoint t = " + fmt_real(t) +
                                             " without a side flag");
    if (dist <= eps && side != Side::None) return side == Side::Left ? values.back() : values.front();
  }
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    const double d = std::abs(tau - breaks[i]);
    if (d == 0.0 && side == Side::None)
      throw Error(ErrorCode::Breakpoint, "coefficient evaluated at breakpoint t = " + fmt_real(t) +
                                             " without a side flag");
    if (d <= eps && side != Side::None) return side == Side::Left ? values[i] : values[i + 1];
  }
  const auto idx = std::upper_bound(breaks.begin(), breaks.end(), tau) - breaks.begin();
  return values[static_cast<std::size_t>(idx)];
}

}  // namespace

double Expr::operator()(double t, Side side) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Const:
      return n.a;
    case Kind::Sin:
      return n.a * std::sin(n.b * t + n.c);
    case Kind::Cos:
      return n.a * std::cos(n.b * t + n.c);
    case Kind::Poly: {
      double acc = 0.0;
      for (auto it = n.coeffs.rbegin(); it != n.coeffs.rend(); ++it) acc = acc * t + *it;
      return acc;
    }
    case Kind::PwConst:
      return eval_pw_const(n.breaks, n.values, n.period, t, side);
    case Kind::Sum: {
      double acc = 0.0;
      for (const auto& e : n.args) acc += e(t, side);
      return acc;
    }
    case Kind::Prod: {
      double acc = 1.0;
      for (const auto& e : n.args) acc *= e(t, side);
      return acc;
    }
    case Kind::Quot:
      return n.args[0](t, side) / n.args[1](t, side);
    case Kind::Scale:
      return n.a * n.args[0](t, side);
  }
  return 0.0;
}

bool Expr::has_breakpoints() const {
  const Node& n = *node_;
  if (n.kind == Kind::PwConst)
    return !n.breaks.empty() || (n.period && n.values.front() != n.values.back());
  for (const auto& e : n.args)
    if (e.has_breakpoints()) return true;
  return false;
}

std::vector<double> Expr::breakpoints(double lo, double hi) const {
  std::vector<double> out;
  const Node& n = *node_;
  if (n.kind == Kind::PwConst) {
    if (!n.period) {
      for (double b : n.breaks)
        if (b >= lo && b <= hi) out.push_back(b);
    } else {
      const double p = *n.period;
      const bool wrap = n.values.front() != n.values.back();
      for (double k = std::floor(lo / p); k * p <= hi; k += 1.0) {
        if (wrap && k * p >= lo) out.push_back(k * p);
        for (double b : n.breaks) {
          const double t = k * p + b;
          if (t >= lo && t <= hi) out.push_back(t);
        }
      }
    }
  } else {
    for (const auto& e : n.args) {
      auto sub = e.breakpoints(lo, hi);
      out.insert(out.end(), sub.begin(), sub.end());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double x, double y) { return std::abs(x - y) <= sided_tolerance(x); }),
            out.end());
  return out;
}

bool Expr::is_constant() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Const:
      return true;
    case Kind::Sin:
    case Kind::Cos:
      return n.a == 0.0 || n.b == 0.0;
    case Kind::Poly:
      return std::all_of(n.coeffs.begin() + 1, n.coeffs.end(), [](double c) { return c == 0.0; });
    case Kind::PwConst:
      return std::adjacent_find(n.values.begin(), n.values.end(), std::not_equal_to<>()) == n.values.end();
    default:
      return std::all_of(n.args.begin(), n.args.end(), [](const Expr& e) { return e.is_constant(); });
  }
}

std::string Expr::describe() const {
  const Node& n = *node_;
  std::ostringstream os;
  os.precision(6);
  auto join = [&](const char* op) {
    os << '(';
    for (std::size_t i = 0; i < n.args.size(); ++i) os << (i ? op : "") << n.args[i].describe();
    os << ')';
  };
  switch (n.kind) {
    case Kind::Const: os << n.a; break;
    case Kind::Sin: os << n.a << "*sin(" << n.b << "*t+" << n.c << ")"; break;
    case Kind::Cos: os << n.a << "*cos(" << n.b << "*t+" << n.c << ")"; break;
    case Kind::Poly:
      os << "poly[";
      for (std::size_t i = 0; i < n.coeffs.size(); ++i) os << (i ? "," : "") << n.coeffs[i];
      os << "]";
      break;
    case Kind::PwConst: os << "pw_const[" << n.values.size() << " pieces]"; break;
    case Kind::Sum: join(" + "); break;
    case Kind::Prod: join(" * "); break;
    case Kind::Quot: join(" / "); break;
    case Kind::Scale: os << n.a << "*" << n.args[0].describe(); break;
  }
  return os.str();
}

namespace {

bool is_zero(const Expr& e) { return e.kind() == Expr::Kind::Const && e.value() == 0.0; }
bool is_one(const Expr& e) { return e.kind() == Expr::Kind::Const && e.value() == 1.0; }

Expr make_sum(std::vector<Expr> terms) {
  std::erase_if(terms, is_zero);
  return Expr::sum(std::move(terms));
}

Expr make_prod(std::vector<Expr> factors) {
  if (std::any_of(factors.begin(), factors.end(), is_zero)) return Expr::constant(0.0);
  std::erase_if(factors, is_one);
  return Expr::prod(std::move(factors));
}

}  // namespace

Expr operator+(const Expr& lhs, const Expr& rhs) { return make_sum({lhs, rhs}); }
Expr operator-(const Expr& lhs, const Expr& rhs) { return make_sum({lhs, Expr::scale(-1.0, rhs)}); }
Expr operator*(const Expr& lhs, const Expr& rhs) { return make_prod({lhs, rhs}); }
Expr operator*(double lhs, const Expr& rhs) { return lhs == 0.0 ? Expr::constant(0.0) : Expr::scale(lhs, rhs); }
Expr operator/(const Expr& lhs, const Expr& rhs) { return Expr::quot(lhs, rhs); }

Expr derivative(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Const:
    case K::PwConst:
      return Expr::constant(0.0);
    case K::Sin:
      if (e.freq() == 0.0) return Expr::constant(0.0);
      return Expr::cosine(e.amp() * e.freq(), e.freq(), e.phase());
    case K::Cos:
      if (e.freq() == 0.0) return Expr::constant(0.0);
      return Expr::sine(-e.amp() * e.freq(), e.freq(), e.phase());
    case K::Poly: {
      const auto& c = e.coeffs();
      if (c.size() <= 1) return Expr::constant(0.0);
      std::vector<double> d(c.size() - 1);
      for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
      return Expr::poly(std::move(d));
    }
    case K::Sum: {
      std::vector<Expr> terms;
      for (const auto& a : e.args()) terms.push_back(derivative(a));
      return make_sum(std::move(terms));
    }
    case K::Prod: {
      const auto& f = e.args();
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < f.size(); ++i) {
        std::vector<Expr> factors;
        for (std::size_t j = 0; j < f.size(); ++j) factors.push_back(i == j ? derivative(f[j]) : f[j]);
        terms.push_back(make_prod(std::move(factors)));
      }
      return make_sum(std::move(terms));
    }
    case K::Quot: {
      const Expr& num = e.args()[0];
      const Expr& den = e.args()[1];
      Expr top = derivative(num) * den - num * derivative(den);
      if (is_zero(top)) return Expr::constant(0.0);
      return Expr::quot(top, den * den);
    }
    case K::Scale: {
      Expr d = derivative(e.args()[0]);
      return is_zero(d) ? d : Expr::scale(e.factor(), d);
    }
  }
  return Expr::constant(0.0);
}

double Bounds::abs_max() const { return std::max(std::abs(inf), std::abs(sup)); }

namespace {

// Range of sin over [lo, hi] (radians).
std::pair<double, double> sin_range(double lo, double hi) {
  auto contains = [&](double center) {
    const double k = std::ceil((lo - center) / (2.0 * kPi));
    return center + 2.0 * kPi * k <= hi;
  };
  double mn = std::min(std::sin(lo), std::sin(hi));
  double mx = std::max(std::sin(lo), std::sin(hi));
  if (contains(kPi / 2.0)) mx = 1.0;
  if (contains(-kPi / 2.0)) mn = -1.0;
  return {mn, mx};
}

std::optional<Bounds> exact_bounds(const Expr& e, double lo, double hi) {
  using K = Expr::Kind;
  if (e.is_constant()) {
    const double v = e(0.5 * (lo + hi), Side::Right);
    return Bounds{v, v, true};
  }
  switch (e.kind()) {
    case K::Sin:
    case K::Cos: {
      const double shift = e.kind() == K::Cos ? kPi / 2.0 : 0.0;
      const double x0 = e.freq() * lo + e.phase() + shift;
      const double x1 = e.freq() * hi + e.phase() + shift;
      auto [mn, mx] = sin_range(std::min(x0, x1), std::max(x0, x1));
      const double a = e.amp();
      return a >= 0.0 ? Bounds{a * mn, a * mx, true} : Bounds{a * mx, a * mn, true};
    }
    case K::Poly: {
      const auto& c = e.coeffs();
      std::size_t deg = c.size() - 1;
      while (deg > 0 && c[deg] == 0.0) --deg;
      if (deg > 3) return std::nullopt;
      std::vector<double> cand{lo, hi};
      // Critical points: roots of c1 + 2 c2 t + 3 c3 t^2.
      const double q0 = deg >= 1 ? c[1] : 0.0;
      const double q1 = deg >= 2 ? 2.0 * c[2] : 0.0;
      const double q2 = deg >= 3 ? 3.0 * c[3] : 0.0;
      if (q2 != 0.0) {
        const double disc = q1 * q1 - 4.0 * q2 * q0;
        if (disc >= 0.0) {
          const double r = std::sqrt(disc);
          cand.push_back((-q1 + r) / (2.0 * q2));
          cand.push_back((-q1 - r) / (2.0 * q2));
        }
      } else if (q1 != 0.0) {
        cand.push_back(-q0 / q1);
      }
      Bounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), true};
      for (double t : cand) {
        if (t < lo || t > hi) continue;
        const double v = e(t);
        b.inf = std::min(b.inf, v);
        b.sup = std::max(b.sup, v);
      }
      return b;
    }
    case K::PwConst: {
      auto pts = e.breakpoints(lo, hi);
      pts.insert(pts.begin(), lo);
      pts.push_back(hi);
      Bounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), true};
      for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (!(pts[i + 1] > pts[i])) continue;
        const double v = e(0.5 * (pts[i] + pts[i + 1]), Side::Right);
        b.inf = std::min(b.inf, v);
        b.sup = std::max(b.sup, v);
      }
      return b;
    }
    case K::Scale: {
      auto inner = exact_bounds(e.args()[0], lo, hi);
      if (!inner) return std::nullopt;
      const double f = e.factor();
      return f >= 0.0 ? Bounds{f * inner->inf, f * inner->sup, true} : Bounds{f * inner->sup, f * inner->inf, true};
    }
    case K::Sum:
    case K::Prod: {
      // Exact only when every argument but one is constant.
      std::optional<std::size_t> varying;
      for (std::size_t i = 0; i < e.args().size(); ++i) {
        if (e.args()[i].is_constant()) continue;
        if (varying) return std::nullopt;
        varying = i;
      }
      auto inner = exact_bounds(e.args()[*varying], lo, hi);
      if (!inner) return std::nullopt;
      double k = e.kind() == K::Sum ? 0.0 : 1.0;
      for (std::size_t i = 0; i < e.args().size(); ++i) {
        if (i == *varying) continue;
        const double v = e.args()[i](lo, Side::Right);
        k = e.kind() == K::Sum ? k + v : k * v;
      }
      if (e.kind() == K::Sum) return Bounds{inner->inf + k, inner->sup + k, true};
      return k >= 0.0 ? Bounds{k * inner->inf, k * inner->sup, true} : Bounds{k * inner->sup, k * inner->inf, true};
    }
    default:
      return std::nullopt;
  }
}

}  // namespace

Bounds ess_bounds(const Expr& e, double lo, double hi, double samples_per_unit) {
  if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "ess_bounds needs lo < hi");
  if (auto b = exact_bounds(e, lo, hi)) return *b;

  Bounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), false};
  auto take = [&](double v) {
    b.inf = std::min(b.inf, v);
    b.sup = std::max(b.sup, v);
  };
  const auto n = static_cast<std::size_t>(std::max(1000.0, std::ceil((hi - lo) * samples_per_unit)));
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n);
    take(e(t, k == n ? Side::Left : Side::Right));
  }
  for (double bp : e.breakpoints(lo, hi)) {
    if (bp > lo) take(e(bp, Side::Left));
    if (bp < hi) take(e(bp, Side::Right));
  }
  return b;
}

double SignedParts::positive(double t, Side side) const { return std::max(expr_(t, side), 0.0); }
double SignedParts::negative(double t, Side side) const { return std::max(-expr_(t, side), 0.0); }

SignedParts positive_part(const Expr& expr) { return SignedParts(expr); }

SidedValue eval_sides(const Expr& expr, double t) { return {expr(t, Side::Left), expr(t, Side::Right)}; }

bool validate_period(const Expr& expr, double omega, int samples, double origin) {
  if (!(omega > 0.0) || samples < 16)
    throw Error(ErrorCode::InvalidArgument, "validate_period needs omega > 0 and samples >= 16");
  for (int k = 0; k < samples; ++k) {
    const double t = origin + 2.0 * omega * k / (samples - 1);
    const auto here = eval_sides(expr, t);
    const auto there = eval_sides(expr, t + omega);
    const double tol = 1e-9 * (1.0 + std::abs(here.right));
    if (std::abs(there.right - here.right) > tol || std::abs(there.left - here.left) > tol) return false;
  }
  return true;
}

}  // namespace oscillint
