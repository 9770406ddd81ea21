#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace oscillint {

/// Which one-sided limit to take when evaluating at a breakpoint.
/// Side::None at a breakpoint is an error; away from breakpoints the flag is ignored.
enum class Side { None, Left, Right };

/// Immutable expression tree for a coefficient a(t), b(t) or f(t).
///
/// Leaves are constants, sinusoids A*sin(nu*t + phi) / A*cos(nu*t + phi),
/// polynomials in t (ascending coefficients) and right-continuous piecewise
/// constants, optionally repeated with a period. Interior nodes are sum,
/// product, quotient and scalar multiple. Copies share the underlying tree.
class Expr {
 public:
  enum class Kind { Const, Sin, Cos, Poly, PwConst, Sum, Prod, Quot, Scale };

  Expr();  // constant 0

  static Expr constant(double value);
  static Expr sine(double amp, double freq = 1.0, double phase = 0.0);
  static Expr cosine(double amp, double freq = 1.0, double phase = 0.0);
  static Expr poly(std::vector<double> coeffs);
  /// `values` has one more entry than `breaks`; values[i] holds on [breaks[i-1], breaks[i]).
  /// With a period, breaks must lie in (0, period) and the pattern repeats from t = 0.
  static Expr pw_const(std::vector<double> breaks, std::vector<double> values,
                       std::optional<double> period = std::nullopt);
  static Expr sum(std::vector<Expr> args);
  static Expr prod(std::vector<Expr> args);
  /// Throws Domain if the denominator vanishes or changes sign on the check grid.
  static Expr quot(Expr num, Expr den);
  static Expr scale(double factor, Expr arg);

  double operator()(double t, Side side = Side::None) const;

  Kind kind() const;
  double value() const;  // Const
  double amp() const;    // Sin, Cos
  double freq() const;
  double phase() const;
  const std::vector<double>& coeffs() const;  // Poly
  const std::vector<double>& breaks() const;  // PwConst
  const std::vector<double>& values() const;
  std::optional<double> period() const;
  double factor() const;  // Scale
  const std::vector<Expr>& args() const;

  /// Sorted, deduplicated breakpoints in [lo, hi].
  std::vector<double> breakpoints(double lo, double hi) const;
  bool has_breakpoints() const;

  /// True when the tree contains no t-dependent leaf.
  bool is_constant() const;

  std::string describe() const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& lhs, const Expr& rhs);
Expr operator-(const Expr& lhs, const Expr& rhs);
Expr operator*(const Expr& lhs, const Expr& rhs);
Expr operator*(double lhs, const Expr& rhs);
Expr operator/(const Expr& lhs, const Expr& rhs);

/// Almost-everywhere derivative; piecewise-constant leaves differentiate to zero.
Expr derivative(const Expr& expr);

/// ess inf / ess sup over [lo, hi]. `rigorous` is set when an analytic path
/// produced the values; otherwise they come from a dense sample grid.
struct Bounds {
  double inf = 0.0;
  double sup = 0.0;
  bool rigorous = false;

  double abs_max() const;
};

inline constexpr double kDefaultSampleDensity = 1e4;

Bounds ess_bounds(const Expr& expr, double lo, double hi,
                  double samples_per_unit = kDefaultSampleDensity);

/// b = b+ - b- with b+ = max(b, 0), b- = max(-b, 0).
class SignedParts {
 public:
  explicit SignedParts(Expr expr) : expr_(std::move(expr)) {}
  double positive(double t, Side side = Side::None) const;
  double negative(double t, Side side = Side::None) const;
  const Expr& expr() const { return expr_; }

 private:
  Expr expr_;
};

SignedParts positive_part(const Expr& expr);

/// Spot check of expr(t + omega) == expr(t) at `samples` points of [origin, origin + 2*omega].
bool validate_period(const Expr& expr, double omega, int samples = 64, double origin = 0.0);

/// Evaluates both one-sided limits at t (identical away from breakpoints).
struct SidedValue {
  double left;
  double right;
  double min() const { return left < right ? left : right; }
  double max() const { return left < right ? right : left; }
};
SidedValue eval_sides(const Expr& expr, double t);

}  // namespace oscillint
