#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pccool {

enum class ErrorKind {
  kInvalidParams,
  kInvalidConfig,
  kInvalidGrid,
  kUnknownPreset,
  kDegenerateRates,
  kZeroCoupling,
  kDimensionOverflow,
  kTruncationBreach,
  kNoSteadyState,
};

/// Stable identifier used in output documents, e.g. "degenerate-rates".
std::string_view to_string(ErrorKind kind);

/// Process exit code for a failure of this kind: 1 for bad input, 2 for a
/// physics-domain failure, 3 for a numerical oracle failure.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pccool
