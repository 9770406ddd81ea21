#include "oscillint/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace oscillint {

Min1D golden_section(const std::function<double(double)>& f, double lo, double hi, double xtol, int max_iter) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  int evals = 2;
  for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  Min1D best = fc <= fd ? Min1D{c, fc, evals} : Min1D{d, fd, evals};
  // The ends are cheap to check and catch monotone objectives.
  for (double x : {lo, hi}) {
    const double fx = f(x);
    ++evals;
    if (fx < best.f) best = {x, fx, evals};
  }
  best.evaluations = evals;
  return best;
}

namespace {

using P = std::array<double, 2>;

Min2D nm_run(const std::function<double(double, double)>& f, P start, P lo, P hi, const NelderMeadOptions& opt) {
  auto clamp = [&](P p) {
    for (int i = 0; i < 2; ++i) p[i] = std::clamp(p[i], lo[i], hi[i]);
    return p;
  };
  int evals = 0;
  auto eval = [&](const P& p) {
    ++evals;
    const double v = f(p[0], p[1]);
    return std::isnan(v) ? INFINITY : v;
  };
  std::array<P, 3> s;
  std::array<double, 3> fv;
  s[0] = clamp(start);
  for (int i = 0; i < 2; ++i) {
    P p = s[0];
    const double span = hi[i] - lo[i];
    const double step = span > 0 ? 0.1 * span : 0.1 * std::max(1.0, std::abs(p[i]));
    p[i] = p[i] + step <= hi[i] ? p[i] + step : p[i] - step;
    s[i + 1] = clamp(p);
  }
  for (int i = 0; i < 3; ++i) fv[i] = eval(s[i]);

  for (int it = 0; it < opt.max_iter; ++it) {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int x, int y) { return fv[x] < fv[y]; });
    std::array<P, 3> s2{s[idx[0]], s[idx[1]], s[idx[2]]};
    std::array<double, 3> f2{fv[idx[0]], fv[idx[1]], fv[idx[2]]};
    s = s2;
    fv = f2;
    if (std::abs(fv[2] - fv[0]) <= opt.ftol * (1.0 + std::abs(fv[0]))) {
      const double size = std::max(std::abs(s[2][0] - s[0][0]), std::abs(s[2][1] - s[0][1]));
      if (size < 1e-10) break;
    }
    const P c{0.5 * (s[0][0] + s[1][0]), 0.5 * (s[0][1] + s[1][1])};
    auto along = [&](double k) { return clamp(P{c[0] + k * (s[2][0] - c[0]), c[1] + k * (s[2][1] - c[1])}); };
    const P xr = along(-1.0);
    const double fr = eval(xr);
    if (fr < fv[0]) {
      const P xe = along(-2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        s[2] = xe;
        fv[2] = fe;
      } else {
        s[2] = xr;
        fv[2] = fr;
      }
    } else if (fr < fv[1]) {
      s[2] = xr;
      fv[2] = fr;
    } else {
      const P xc = fr < fv[2] ? along(-0.5) : along(0.5);
      const double fc = eval(xc);
      if (fc < std::min(fr, fv[2])) {
        s[2] = xc;
        fv[2] = fc;
      } else {
        for (int i = 1; i < 3; ++i) {
          s[i] = clamp(P{0.5 * (s[0][0] + s[i][0]), 0.5 * (s[0][1] + s[i][1])});
          fv[i] = eval(s[i]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i < 3; ++i)
    if (fv[i] < fv[best]) best = i;
  return {s[best], fv[best], evals};
}

double uniform01(std::mt19937_64& rng) {
  // Fixed mapping so results do not depend on the standard library's distributions.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Min2D nelder_mead_box(const std::function<double(double, double)>& f, P start, P lo, P hi,
                      const NelderMeadOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  Min2D best = nm_run(f, start, lo, hi, opt);
  int evals = best.evaluations;
  for (int r = 0; r < opt.restarts; ++r) {
    P p{lo[0] + uniform01(rng) * (hi[0] - lo[0]), lo[1] + uniform01(rng) * (hi[1] - lo[1])};
    Min2D m = nm_run(f, p, lo, hi, opt);
    evals += m.evaluations;
    if (m.f < best.f) best = m;
  }
  best.evaluations = evals;
  return best;
}

}  // namespace oscillint
