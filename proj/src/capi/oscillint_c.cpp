#include "oscillint/oscillint.h"

#include <cmath>
#include <exception>
#include <new>
#include <string>

#include "oscillint/error.hpp"
#include "oscillint/problem.hpp"
#include "oscillint/report.hpp"

struct oscillint_problem {
  oscillint::ProblemFile file;
  std::string text;
};

struct oscillint_result {
  oscillint::CommandResult result;
};

namespace {

thread_local std::string last_error;

oscillint_status fail(oscillint_status s, const char* what) {
  last_error = what;
  return s;
}

// Runs body and maps exceptions to status codes.
template <class Body>
oscillint_status guarded(Body&& body) {
  try {
    last_error.clear();
    body();
    return OSCILLINT_OK;
  } catch (const oscillint::Error& e) {
    return fail(static_cast<oscillint_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(OSCILLINT_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(OSCILLINT_E_INTERNAL, e.what());
  } catch (...) {
    return fail(OSCILLINT_E_INTERNAL, "unknown error");
  }
}

}  // namespace

extern "C" {

const char* oscillint_version(void) { return OSCILLINT_VERSION; }

const char* oscillint_status_string(oscillint_status status) {
  switch (status) {
    case OSCILLINT_OK: return "ok";
    case OSCILLINT_E_INVALID_ARGUMENT: return "invalid argument";
    case OSCILLINT_E_BREAKPOINT: return "evaluation at a breakpoint";
    case OSCILLINT_E_DOMAIN: return "domain error";
    case OSCILLINT_E_QUADRATURE: return "quadrature failed";
    case OSCILLINT_E_SOLVER: return "solver failed";
    case OSCILLINT_E_BVP_NOT_SOLVABLE: return "boundary value problem not solvable";
    case OSCILLINT_E_SCHEMA: return "schema violation";
    case OSCILLINT_E_IO: return "i/o error";
    case OSCILLINT_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* oscillint_last_error(void) { return last_error.c_str(); }

oscillint_status oscillint_problem_load(const char* path, oscillint_problem** out) {
  if (!path || !out) return fail(OSCILLINT_E_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new oscillint_problem{oscillint::parse_problem(path), {}}; });
}

oscillint_status oscillint_problem_parse(const char* json_text, oscillint_problem** out) {
  if (!json_text || !out) return fail(OSCILLINT_E_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new oscillint_problem{oscillint::parse_problem_text(json_text), {}}; });
}

void oscillint_problem_free(oscillint_problem* problem) { delete problem; }

oscillint_status oscillint_problem_serialize(oscillint_problem* problem, const char** json_text) {
  if (!problem || !json_text) return fail(OSCILLINT_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    problem->text = oscillint::serialize(problem->file);
    *json_text = problem->text.c_str();
  });
}

oscillint_status oscillint_problem_set_simulate(oscillint_problem* problem, double x0, double v0, double T,
                                                double dt) {
  if (!problem) return fail(OSCILLINT_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto sim = problem->file.simulate.value_or(oscillint::SimulateSpec{});
    if (!std::isnan(x0)) sim.x0 = x0;
    if (!std::isnan(v0)) sim.v0 = v0;
    if (!std::isnan(T)) sim.T = T;
    if (!std::isnan(dt)) sim.dt = dt;
    if (!std::isfinite(sim.x0) || !std::isfinite(sim.v0) || !std::isfinite(sim.T))
      throw oscillint::Error(oscillint::ErrorCode::InvalidArgument, "simulate values must be finite");
    if (!(sim.dt > 0.0) || !std::isfinite(sim.dt))
      throw oscillint::Error(oscillint::ErrorCode::InvalidArgument, "dt must be positive");
    problem->file.simulate = sim;
  });
}

oscillint_status oscillint_problem_set_sweep(oscillint_problem* problem, const char* param, double from, double to,
                                             int steps) {
  if (!problem || !param) return fail(OSCILLINT_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    if (!problem->file.params.count(param))
      throw oscillint::Error(oscillint::ErrorCode::InvalidArgument, std::string("undeclared parameter '") + param + "'");
    if (!std::isfinite(from) || !std::isfinite(to))
      throw oscillint::Error(oscillint::ErrorCode::InvalidArgument, "sweep bounds must be finite");
    if (steps < 1) throw oscillint::Error(oscillint::ErrorCode::InvalidArgument, "sweep needs steps >= 1");
    auto sw = problem->file.sweep.value_or(oscillint::SweepSpec{});
    sw.param = param;
    sw.from = from;
    sw.to = to;
    sw.steps = steps;
    problem->file.sweep = sw;
  });
}

oscillint_status oscillint_run(const oscillint_problem* problem, const char* command, oscillint_result** out) {
  if (!problem || !command || !out) return fail(OSCILLINT_E_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new oscillint_result{oscillint::run_command(command, problem->file)}; });
}

const char* oscillint_result_output(const oscillint_result* result) { return result ? result->result.output.c_str() : ""; }

const char* oscillint_result_zeros(const oscillint_result* result) { return result ? result->result.zeros.c_str() : ""; }

int oscillint_result_exit_code(const oscillint_result* result) { return result ? result->result.exit_code : 1; }

void oscillint_result_free(oscillint_result* result) { delete result; }

}  // extern "C"
