#include "finfold/error.hpp"

namespace finfold {

std::string_view error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kDomain: return "domain_error";
    case ErrorKind::kArgument: return "argument_error";
    case ErrorKind::kNumericalDivergence: return "numerical_divergence";
    case ErrorKind::kDegenerateData: return "degenerate_data";
    case ErrorKind::kNoSteadyPhase: return "no_steady_phase";
    case ErrorKind::kCircleDegenerate: return "circle_degenerate";
    case ErrorKind::kCalibrationFailure: return "calibration_failure";
    case ErrorKind::kParse: return "parse_error";
    case ErrorKind::kValidation: return "validation_error";
    case ErrorKind::kNonMonotonicTime: return "non_monotonic_time";
    case ErrorKind::kTimeGap: return "time_gap";
    case ErrorKind::kIo: return "io_error";
    case ErrorKind::kPrecondition: return "precondition_error";
  }
  return "error";
}

}  // namespace finfold
