#include "pccool/error.hpp"

namespace pccool {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidParams: return "invalid-params";
    case ErrorKind::kInvalidConfig: return "invalid-config";
    case ErrorKind::kInvalidGrid: return "invalid-grid";
    case ErrorKind::kUnknownPreset: return "unknown-preset";
    case ErrorKind::kDegenerateRates: return "degenerate-rates";
    case ErrorKind::kZeroCoupling: return "zero-coupling";
    case ErrorKind::kDimensionOverflow: return "dimension-overflow";
    case ErrorKind::kTruncationBreach: return "truncation-breach";
    case ErrorKind::kNoSteadyState: return "no-steady-state";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidParams:
    case ErrorKind::kInvalidConfig:
    case ErrorKind::kInvalidGrid:
    case ErrorKind::kUnknownPreset:
      return 1;
    case ErrorKind::kDegenerateRates:
    case ErrorKind::kZeroCoupling:
      return 2;
    case ErrorKind::kDimensionOverflow:
    case ErrorKind::kTruncationBreach:
    case ErrorKind::kNoSteadyState:
      return 3;
  }
  return 1;
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind) {}

}  // namespace pccool
