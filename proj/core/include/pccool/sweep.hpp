#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pccool/analytic.hpp"
#include "pccool/error.hpp"
#include "pccool/lindblad.hpp"
#include "pccool/params.hpp"

namespace pccool {

enum class SweepVariable { kDelta, kGammaRatio, kNu, kEta, kOmega };

std::string_view to_string(SweepVariable v);
SweepVariable parse_sweep_variable(std::string_view text);

/// How gamma_zero follows a gamma_ratio sweep (gamma_minus = x * gamma_plus).
enum class GammaZeroRule { kFixed, kEqualsGammaMinus };

std::string_view to_string(GammaZeroRule r);
GammaZeroRule parse_gamma_zero_rule(std::string_view text);

/// `count` evenly spaced points from `min` to `max` inclusive.
std::vector<double> linspace(double min, double max, int count);

/// Column names in output order.
inline constexpr std::string_view kSweepColumns[] = {
    "x", "n_s", "rz", "sz", "two_sz", "cooling_rate", "a_rate_plus", "valid", "oracle_n_s",
};

/// Serialised in place of n_s on rows without a stationary phonon number.
inline constexpr std::string_view kHeatingSentinel = "heating";

struct SweepSpec {
  std::string label;
  PhysicalParams base;
  SweepVariable variable = SweepVariable::kDelta;
  std::optional<GammaZeroRule> gamma_zero_rule;
  std::vector<double> grid;
  /// Subset of kSweepColumns to emit; empty means all. "x" is always emitted.
  std::vector<std::string> observables;
  double margin = 10.0;
  bool oracle = false;
  ConvergenceOptions oracle_options;
};

/// Throws Error(kInvalidGrid) for an empty or non-monotone grid and
/// Error(kInvalidConfig) for other inconsistencies.
void validate(const SweepSpec& spec);

/// Base parameters with the swept variable set to x.
PhysicalParams params_at(const SweepSpec& spec, double x);

struct SweepRow {
  double x = 0.0;
  PhononNumber n_s = Heating{};
  double rz = 0.0;
  double sz = 0.0;
  double two_sz = 0.0;
  double cooling_rate = 0.0;
  double a_rate_plus = 0.0;
  bool valid = false;
  std::optional<double> oracle_n_s;
  std::optional<int> oracle_n_max;
  std::optional<ErrorKind> error_kind;
  std::string error;

  bool ok() const { return !error_kind.has_value(); }
};

struct SweepTable {
  SweepSpec spec;
  std::vector<SweepRow> rows;

  bool has_errors() const;
  /// Most severe exit code among row errors, 0 when there are none.
  int exit_code() const;
};

enum class Execution { kSerial, kParallel };

/// Evaluates every grid point independently. Per-point failures become row
/// error markers; the sweep itself only throws for an invalid spec.
SweepTable run_sweep(const SweepSpec& spec, Execution execution = Execution::kParallel);

// ---------------------------------------------------------------------------

struct Preset {
  std::string name;
  std::string description;
  ReferenceRate reference_rate = ReferenceRate::kGamma;
  /// Inversion column matching the published panel: "two_sz" or "sz".
  std::string inversion_column;
  std::vector<SweepSpec> curves;
};

std::vector<Preset> list_presets();

/// Throws Error(kUnknownPreset) listing the available names.
Preset find_preset(std::string_view name);

}  // namespace pccool
