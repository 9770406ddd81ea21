#include "oscillint/equation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oscillint/error.hpp"

namespace oscillint {

std::vector<double> EquationSpec::breakpoints(double lo, double hi) const {
  std::vector<double> out = a.breakpoints(lo, hi);
  auto add = [&](const Expr& e) {
    auto more = e.breakpoints(lo, hi);
    out.insert(out.end(), more.begin(), more.end());
  };
  add(b);
  if (f) add(*f);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void EquationSpec::validate() const {
  if (!(t_start >= 0.0) || !std::isfinite(t_start))
    throw Error(ErrorCode::InvalidArgument, "t_start must be finite and >= 0");
  if (!period) return;
  const double w = *period;
  if (!(w > 0.0) || !std::isfinite(w)) throw Error(ErrorCode::InvalidArgument, "period must be finite and > 0");
  auto check = [&](const Expr& e, const char* name) {
    if (!validate_period(e, w, 64, t_start)) {
      std::ostringstream os;
      os.precision(17);
      os << "coefficient " << name << " is not periodic with period " << w;
      throw Error(ErrorCode::InvalidArgument, os.str());
    }
  };
  check(a, "a");
  check(b, "b");
}

EquationSpec EquationSpec::homogeneous_part() const {
  EquationSpec out = *this;
  out.f.reset();
  return out;
}

EquationSpec make_equation(Expr a, Expr b, std::optional<Expr> f, std::optional<double> period, std::string label) {
  EquationSpec eq;
  eq.a = std::move(a);
  eq.b = std::move(b);
  eq.f = std::move(f);
  eq.period = period;
  eq.label = std::move(label);
  eq.validate();
  return eq;
}

}  // namespace oscillint
