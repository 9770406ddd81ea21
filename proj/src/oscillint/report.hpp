#pragma once

#include <string>

#include "oscillint/criteria.hpp"
#include "oscillint/floquet.hpp"
#include "oscillint/integrator.hpp"
#include "oscillint/oracle.hpp"
#include "oscillint/problem.hpp"

namespace oscillint {

Json certificate_json(const Certificate& c);
Json certify_json(const CertifyReport& r, const std::string& label);
Json floquet_json(const FloquetResult& r);
Json decay_json(const DecayEstimate& d);
Json comparison_json(const ComparisonResult& r);

/// Columns t,x,xdot on t0, t0 + dt, ..., with T as the last row.
std::string trajectory_csv(const Trajectory& tr, double t0, double T, double dt);
/// Zeros of x as a JSON array of {t, tangential}.
Json zeros_json(const Trajectory& tr);

struct CommandResult {
  std::string output;
  /// Secondary artifact: the zero list for simulate, empty otherwise.
  std::string zeros;
  /// 0 on completion, 2 when every certificate is INAPPLICABLE.
  int exit_code = 0;
};

CommandResult run_certify(const ProblemFile& p);
CommandResult run_floquet(const ProblemFile& p);
/// Needs a simulate section.
CommandResult run_simulate(const ProblemFile& p);
CommandResult run_oracle(const ProblemFile& p);
/// Needs a sweep section. One CSV row per point, in point order.
CommandResult run_sweep(const ProblemFile& p);

/// Dispatches on certify, floquet, simulate, oracle or sweep. Throws on errors.
CommandResult run_command(const std::string& command, const ProblemFile& p);

}  // namespace oscillint
