#pragma once

#include <stdexcept>
#include <string>

namespace tsdyn {

/// Machine-parsable failure categories. Every library error carries one of
/// these codes; the CLI prints them as `error[CodeName]: message`.
enum class ErrorCode {
  PointNotInScale,
  InsufficientSamples,
  UnboundedRequired,
  TruncatedTail,
  SingularMatrix,
  IllConditioned,
  DefectiveAmbiguity,
  DomainMismatch,
  NotRegressive,
  NonPositiveGapMatrix,
  SingularCoefficient,
  SingularLogFactor,
  BeyondHorizon,
  HorizonExceeded,
  NotHyperbolic,
  NonPeriodicUnsupported,
  ToleranceUnreachable,
  HypothesisViolated,
  GridPointTooLarge,
  NoConvergence,
  LipschitzWitness,
  InvalidInput,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }
  const char* code_name() const { return to_string(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace tsdyn
