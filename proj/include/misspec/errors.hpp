#pragma once

#include <stdexcept>
#include <string>

namespace misspec {

// Every domain failure carries a short machine-readable code next to the
// human message, so the CLI can map error classes to exit codes.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

private:
  std::string code_;
};

struct InvalidSpecError : Error {
  explicit InvalidSpecError(const std::string& what) : Error("invalid-spec", what) {}
};

struct NotDifferentiableError : Error {
  explicit NotDifferentiableError(const std::string& what) : Error("not-differentiable", what) {}
};

struct NotApplicableError : Error {
  explicit NotApplicableError(const std::string& what) : Error("not-applicable", what) {}
};

struct BoundaryMinimizerError : Error {
  explicit BoundaryMinimizerError(const std::string& what) : Error("boundary-minimizer", what) {}
};

struct NonUniqueMinimizerError : Error {
  explicit NonUniqueMinimizerError(const std::string& what) : Error("non-unique-minimizer", what) {}
};

struct ConditionM4ViolatedError : Error {
  explicit ConditionM4ViolatedError(const std::string& what) : Error("condition-M4-violated", what) {}
};

struct ConditionR4ViolatedError : Error {
  explicit ConditionR4ViolatedError(const std::string& what) : Error("condition-R4-violated", what) {}
};

struct AssumptionViolatedError : Error {
  explicit AssumptionViolatedError(const std::string& what) : Error("assumption-violated", what) {}
};

struct InternalConsistencyError : Error {
  explicit InternalConsistencyError(const std::string& what) : Error("internal-consistency", what) {}
};

struct NumericUnderflowError : Error {
  explicit NumericUnderflowError(const std::string& what) : Error("numeric-underflow", what) {}
};

struct TruncationTooSmallError : Error {
  explicit TruncationTooSmallError(const std::string& what) : Error("truncation-too-small", what) {}
};

struct UnknownNameError : Error {
  explicit UnknownNameError(const std::string& what) : Error("unknown-name", what) {}
};

}  // namespace misspec
