#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace finfold {

// Every failure raised by the library carries one of these classes. The CLI
// prints error_kind_name() as a machine-parsable prefix.
enum class ErrorKind {
  kDomain,
  kArgument,
  kNumericalDivergence,
  kDegenerateData,
  kNoSteadyPhase,
  kCircleDegenerate,
  kCalibrationFailure,
  kParse,
  kValidation,
  kNonMonotonicTime,
  kTimeGap,
  kIo,
  kPrecondition,
};

std::string_view error_kind_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace finfold
