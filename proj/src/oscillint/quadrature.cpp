#include "oscillint/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "oscillint/error.hpp"

namespace oscillint {

namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 21>;

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel eval_panel(const std::function<double(double)>& f, double a, double b) {
  double err = 0.0;
  const double v = Rule::integrate(f, a, b, 0, 0.0, &err);
  return {a, b, v, err};
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                              std::span<const double> breaks, std::size_t panel_budget) {
  if (!(a <= b)) throw Error(ErrorCode::InvalidArgument, "integrate_adaptive needs a <= b");
  if (a == b) return {};

  std::vector<double> edges{a};
  for (double x : breaks)
    if (x > a && x < b) edges.push_back(x);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());

  std::priority_queue<Panel> heap;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i + 1] > edges[i])) continue;
    Panel p = eval_panel(f, edges[i], edges[i + 1]);
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }
  std::size_t panels = heap.size();

  while (total_err > tol) {
    if (panels >= panel_budget) {
      std::ostringstream os;
      os.precision(17);
      os << "quadrature did not converge within " << panel_budget << " panels on [" << a << ", " << b
         << "]: estimate " << total << ", error bound " << total_err;
      throw QuadratureError(os.str(), total, total_err);
    }
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Panel cannot be split further in double precision.
      std::ostringstream os;
      os.precision(17);
      os << "quadrature stalled near t = " << mid << ": estimate " << total << ", error bound " << total_err;
      throw QuadratureError(os.str(), total, total_err);
    }
    Panel left = eval_panel(f, worst.a, mid);
    Panel right = eval_panel(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }

  // Re-sum to shed the drift of incremental updates.
  double value = 0.0;
  double err = 0.0;
  std::vector<Panel> all;
  all.reserve(heap.size());
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const auto& p : all) {
    value += p.value;
    err += p.error;
  }
  return {value, err, panels};
}

namespace {

std::optional<double> closed_form(const Expr& e, double s, double t) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Const:
      return e.value() * (t - s);
    case K::Sin:
      if (e.freq() == 0.0) return e.amp() * std::sin(e.phase()) * (t - s);
      return -e.amp() / e.freq() * (std::cos(e.freq() * t + e.phase()) - std::cos(e.freq() * s + e.phase()));
    case K::Cos:
      if (e.freq() == 0.0) return e.amp() * std::cos(e.phase()) * (t - s);
      return e.amp() / e.freq() * (std::sin(e.freq() * t + e.phase()) - std::sin(e.freq() * s + e.phase()));
    case K::Poly: {
      const auto& c = e.coeffs();
      auto anti = [&](double x) {
        double acc = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i] / static_cast<double>(i + 1);
        return acc * x;
      };
      return anti(t) - anti(s);
    }
    case K::PwConst: {
      auto pts = e.breakpoints(s, t);
      pts.insert(pts.begin(), s);
      pts.push_back(t);
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double w = pts[i + 1] - pts[i];
        if (w > 0.0) acc += w * e(0.5 * (pts[i] + pts[i + 1]), Side::Right);
      }
      return acc;
    }
    case K::Scale: {
      auto inner = closed_form(e.args()[0], s, t);
      if (!inner) return std::nullopt;
      return e.factor() * *inner;
    }
    case K::Sum: {
      double acc = 0.0;
      for (const auto& a : e.args()) {
        auto part = closed_form(a, s, t);
        if (!part) return std::nullopt;
        acc += *part;
      }
      return acc;
    }
    default:
      if (e.is_constant()) return e(s, Side::Right) * (t - s);
      return std::nullopt;
  }
}

}  // namespace

double integrate(const Expr& expr, double s, double t, double tol) {
  if (!(s <= t)) throw Error(ErrorCode::InvalidArgument, "integrate needs s <= t");
  if (auto v = closed_form(expr, s, t)) return *v;
  const auto breaks = expr.breakpoints(s, t);
  return integrate_adaptive([&](double x) { return expr(x); }, s, t, tol, breaks).value;
}

double simpson_uniform(std::span<const double> y, double h) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * h * (y[0] + y[1]);
  const std::size_t intervals = n - 1;
  std::size_t simpson_end = intervals % 2 == 0 ? n - 1 : n - 4;  // last index covered by 1/3 rule
  double acc = 0.0;
  if (intervals == 3) simpson_end = 0;
  for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) acc += h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
  if (intervals % 2 == 1) {
    const std::size_t j = simpson_end;
    acc += 3.0 * h / 8.0 * (y[j] + 3.0 * y[j + 1] + 3.0 * y[j + 2] + y[j + 3]);
  }
  return acc;
}

}  // namespace oscillint
