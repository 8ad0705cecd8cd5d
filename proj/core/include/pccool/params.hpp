#pragma once

#include <string_view>

namespace pccool {

/// Model inputs. Every rate and frequency is a dimensionless multiple of the
/// run's reference rate (gamma for free space, gamma_plus for a photonic
/// crystal).
struct PhysicalParams {
  double omega = 0.0;        ///< Rabi frequency, > 0
  double delta = 0.0;        ///< detuning omega_0 - omega_L, any sign
  double nu = 0.0;           ///< trap frequency, > 0
  double eta = 0.0;          ///< Lamb-Dicke parameter, >= 0
  double gamma_plus = 0.0;   ///< decay rate at omega_L + 2 omega_bar
  double gamma_minus = 0.0;  ///< decay rate at omega_L - 2 omega_bar
  double gamma_zero = 0.0;   ///< decay rate at omega_L

  bool operator==(const PhysicalParams&) const = default;
};

/// Throws Error(kInvalidParams) naming the first offending field.
void validate(const PhysicalParams& p);

/// True when all three reservoir rates coincide.
bool is_free_space(const PhysicalParams& p);

/// Trigonometry of the dressing angle. The angle itself is never stored:
/// every formula consumes only these functions of it.
struct DressedFrame {
  double omega_bar = 0.0;   ///< sqrt(omega^2 + (delta/2)^2)
  double cos2_theta = 0.0;  ///< cos^2(theta)
  double sin2_theta = 0.0;  ///< sin^2(theta) = 1 - cos^2(theta)
  double cos_2theta = 0.0;  ///< delta / (2 omega_bar)
  double sin_2theta = 0.0;  ///< omega / omega_bar

  double cos4_theta() const { return cos2_theta * cos2_theta; }
  double sin4_theta() const { return sin2_theta * sin2_theta; }
};

DressedFrame dressed_frame(const PhysicalParams& p);

/// Which physical rate the dimensionless numbers are measured against.
enum class ReferenceRate { kGamma, kGammaPlus };

std::string_view to_string(ReferenceRate r);
ReferenceRate parse_reference_rate(std::string_view text);

}  // namespace pccool
