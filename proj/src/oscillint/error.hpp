#pragma once

#include <stdexcept>
#include <string>

namespace oscillint {

/// Error categories surfaced through the C API as status codes.
enum class ErrorCode {
  InvalidArgument = 1,
  Breakpoint,
  Domain,
  Quadrature,
  Solver,
  BvpNotSolvable,
  Schema,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Adaptive quadrature ran out of panels. Carries what it had.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double estimate, double error_bound)
      : Error(ErrorCode::Quadrature, what), estimate_(estimate), error_bound_(error_bound) {}
  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

class SolverError : public Error {
 public:
  SolverError(const std::string& what, double last_good_t)
      : Error(ErrorCode::Solver, what), last_good_t_(last_good_t) {}
  double last_good_t() const noexcept { return last_good_t_; }

 private:
  double last_good_t_;
};

/// Problem file violates the schema; `pointer` names the offending key.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& pointer, const std::string& what)
      : Error(ErrorCode::Schema, (pointer.empty() ? std::string("/") : pointer) + ": " + what), pointer_(pointer) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

/// State norm exceeded the overflow threshold.
class OverflowError : public SolverError {
 public:
  using SolverError::SolverError;
};

}  // namespace oscillint
