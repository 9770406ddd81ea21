#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "oscillint/criteria.hpp"
#include "oscillint/equation.hpp"
#include "oscillint/floquet.hpp"

namespace oscillint {

using Json = nlohmann::ordered_json;

/// Numerical settings shared by all commands. Ranges are enforced on parse.
struct RunConfig {
  double tol = 1e-10;            // [1e-14, 1e-4]
  double horizon = 200.0;        // > 0
  int grid = 50;                 // >= 20
  double search_T = 500.0;       // > 0
  double margin = 1e-9;          // [0, 1e-3]
  double sample_density = 1e4;   // [100, 1e7]
  double check_density = 200.0;  // [10, 1e5]
  double t0 = 0.0;               // >= 0
  int nm_restarts = 5;           // [1, 100]
  int kmax = 8;                  // [1, 64]
  int fan = 32;                  // [4, 1024]
  double guard_margin = 0.01;    // (0, 0.5)
  double floquet_horizon = 0.0;  // >= 0, 0 means 20 periods
  int s_per_unit = 100;          // [10, 10000]
  double scan_T = 10.0;          // > 0, oracle scans run on [t_start, t_start + scan_T]

  CertConfig cert() const;
  FloquetConfig floquet() const;
  bool operator==(const RunConfig&) const = default;
};

struct SimulateSpec {
  double x0 = 0.0;
  double v0 = 1.0;
  double T = 20.0;
  double dt = 0.01;
  bool operator==(const SimulateSpec&) const = default;
};

struct SweepSpec {
  std::string param;
  double from = 0.0;
  double to = 0.0;
  int steps = 2;
  /// Criterion families to run per point; empty means all.
  std::vector<std::string> criteria;
  bool operator==(const SweepSpec&) const = default;

  double value(int i) const;
};

struct WitnessSpec {
  Json u;
  double horizon = 0.0;
  bool operator==(const WitnessSpec&) const = default;
};

struct ComparisonSpec {
  Json dominated;
  double T = 0.0;
  int grid = 0;
  bool operator==(const ComparisonSpec&) const = default;
};

/// A validated problem file. Expressions are kept in canonical JSON form and
/// built on demand, so parameters can be overridden for sweeps.
struct ProblemFile {
  std::string label;
  std::map<std::string, double> params;
  Json equation;
  RunConfig config;
  std::optional<SimulateSpec> simulate;
  std::optional<SweepSpec> sweep;
  std::optional<WitnessSpec> witness_u;
  std::optional<ComparisonSpec> comparison;

  bool operator==(const ProblemFile&) const = default;

  EquationSpec build(const std::map<std::string, double>& overrides = {}) const;
  EquationSpec build_dominated(const std::map<std::string, double>& overrides = {}) const;
  Expr build_witness(const std::map<std::string, double>& overrides = {}) const;
};

/// Throws SchemaError with a JSON pointer on any violation, Error(Io) if the
/// file cannot be read.
ProblemFile parse_problem(const std::string& path);
ProblemFile parse_problem_text(const std::string& text);
ProblemFile parse_problem_json(const Json& doc);

Json to_json(const ProblemFile& p);
/// Canonical text; parse_problem_text(serialize(p)) == p.
std::string serialize(const ProblemFile& p);

/// Reads a real from a number or a string such as "pi", "2*pi", "-pi/2", "1.5pi".
double parse_real(const Json& node, const std::string& pointer);

}  // namespace oscillint
