#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oscillint/equation.hpp"

namespace oscillint {

enum class Verdict { Pass, Fail, Inapplicable };
enum class Claim { None, NonoscillationPositivity, ExpStable, Bounded, TendsToZero };

const char* to_string(Verdict v);
/// Claim::None prints as "UNDECIDED".
const char* to_string(Claim c);

struct Window {
  double lo = 0.0;
  double hi = 0.0;
  /// "period", "horizon" or "tail".
  std::string kind;
};

struct Certificate {
  std::string criterion;
  Verdict verdict = Verdict::Fail;
  Claim claim = Claim::None;
  std::vector<std::pair<std::string, double>> witnesses;
  /// Slack of the deciding inequality (positive means satisfied); NaN if none.
  double margin = 0.0;
  Window window;
  /// True when every coefficient bound used came from an analytic path.
  bool rigorous = false;
  /// Text of the inequality that was checked.
  std::string condition;
  std::string note;

  bool passed() const { return verdict == Verdict::Pass; }
  std::optional<double> witness(const std::string& name) const;
  void set(const std::string& name, double value);
};

struct CertConfig {
  double tol = 1e-10;
  double horizon = 200.0;
  double search_T = 500.0;
  /// Strict inequalities must clear this; non-strict ones may miss by it (relative).
  double margin = 1e-9;
  double sample_density = 1e4;
  /// Dense checks of ODE-based quantities, points per unit time.
  double check_density = 200.0;
  double t0 = 0.0;
  int nm_restarts = 5;
};

enum class Lemma2Case { Overdamped, Underdamped, Critical };
const char* to_string(Lemma2Case c);

struct Lemma2Bounds {
  double K0;
  double K1;
  Lemma2Case kind;
};

/// Bounds on int|Y(t,s)|ds and int|Y'_t(t,s)|ds for x'' + a x' + b x = 0.
/// Throws Error(Domain) unless a > 0 and b > 0.
Lemma2Bounds lemma2_bounds(double a, double b);

Certificate cert_quadratic_lambda(const EquationSpec& eq, double horizon, const CertConfig& cfg = {});
Certificate cert_levin(const EquationSpec& eq, double horizon, const CertConfig& cfg = {});
Certificate cert_thm3(const EquationSpec& eq, double t0, double horizon, const CertConfig& cfg = {});
Certificate cert_cor7(const EquationSpec& eq, double search_T, const CertConfig& cfg = {});
/// Needs the positivity certificates computed before it.
Certificate cert_thm6(const EquationSpec& eq, const std::vector<Certificate>& positivity, const CertConfig& cfg = {});
Certificate cert_thm7(const EquationSpec& eq, double search_T, const CertConfig& cfg = {});
Certificate cert_thm8(const EquationSpec& eq, double t0, const CertConfig& cfg = {});
Certificate cert_thm9(const EquationSpec& eq, double t0, const CertConfig& cfg = {});
Certificate cert_thm10(const EquationSpec& eq, const CertConfig& cfg = {});

/// margin = RHS - LHS of the constant-comparison inequality at (A, B), using
/// the measured norms. Exposed for fixed-witness evaluation.
struct Thm8Norms {
  double a_lo, a_hi, b_lo, b_hi, b_over_a;
};
double thm8_margin(const Thm8Norms& n, double A, double B);
Thm8Norms thm8_norms(const EquationSpec& eq, double t0, const CertConfig& cfg = {});
double thm9_margin(double a_lo, double a_hi, double b_lo, double b_hi, double a0, double b0);

/// Checks u(t) >= m(t) with m' = b - (a - u) m, m(t_start) = 0, on
/// [t_start, t_start + horizon].
bool verify_witness_u(const EquationSpec& eq, const Expr& u, double horizon, const CertConfig& cfg = {});
Certificate cert_witness_u(const EquationSpec& eq, const Expr& u, double horizon, const CertConfig& cfg = {});

struct CertifyReport {
  std::vector<Certificate> certificates;
  Claim summary = Claim::None;
  std::vector<std::string> summary_criteria;
};

/// Criterion family names in report order: C1, C2_LEVIN, T3, C7, T6, T7, T8, T9, T10.
const std::vector<std::string>& criterion_families();

/// Runs the certifiers in family order. A non-empty `only` restricts the
/// output to those families (T6 still computes the positivity criteria it needs).
CertifyReport certify_all(const EquationSpec& eq, const CertConfig& cfg = {}, const std::vector<std::string>& only = {});

}  // namespace oscillint
