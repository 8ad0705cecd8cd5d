#pragma once

#include <complex>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pccool/params.hpp"

namespace pccool {

/// Second moment of the dipole emission pattern w(x) = 3(1 + x^2)/4 over
/// [-1, 1], normalised by 1/2.
inline constexpr double kRecoilMoment = 2.0 / 5.0;

/// Steady dressed-state populations of the driven atom, ignoring the
/// vibrational mode.
struct SteadyAtom {
  double r11 = 0.0;  ///< lower dressed level
  double r22 = 0.0;  ///< upper dressed level
  double rz = 0.0;   ///< r22 - r11
  double sz = 0.0;   ///< bare inversion cos(2 theta) rz / 2
};

/// Throws Error(kDegenerateRates) when both dressed transitions are dark.
SteadyAtom steady_atom(const PhysicalParams& p);

struct RateSet {
  double gamma_perp = 0.0;   ///< dressed coherence decay
  double gamma_s = 0.0;      ///< inversion decays at 2 gamma_s
  double gamma_0_eff = 0.0;  ///< recoil diffusion Gamma_0
  std::complex<double> a_minus;  ///< conjugated cooling coefficient A_-^*
  std::complex<double> a_plus;   ///< conjugated heating coefficient A_+^*
  double a_rate_minus = 0.0;     ///< A^(-) = 2 Re A_-
  double a_rate_plus = 0.0;      ///< A^(+) = 2 Re A_+
  double cooling_rate = 0.0;     ///< A^(-) - A^(+)
};

RateSet rate_set(const PhysicalParams& p);

/// Closed-form cooling rate
///   C = -2 (eta Omega)^2 Gamma_perp <R_z> / (Gamma_perp^2 + (2 Omega_bar - nu)^2).
/// Positive means cooling.
double cooling_rate(const PhysicalParams& p);

/// Returned instead of a phonon number when the atom sits in the upper
/// dressed level (or is evenly split) and no stationary occupation exists.
struct Heating {
  bool operator==(const Heating&) const = default;
};

using PhononNumber = std::variant<double, Heating>;

inline bool is_heating(const PhononNumber& n) {
  return std::holds_alternative<Heating>(n);
}

/// Relative tolerance on r11 == r22 below which the sign of r11 - r22 is
/// treated as undetermined and the point is reported as Heating.
inline constexpr double kPopulationTieTolerance = 1e-14;

/// Stationary mean phonon number. Throws Error(kZeroCoupling) when
/// eta * omega == 0.
PhononNumber steady_phonon(const PhysicalParams& p);

// ---------------------------------------------------------------------------
// Time-dependent mean values.

struct DressedInitial {
  double rz0 = -1.0;
  std::complex<double> rplus0{0.0, 0.0};
  double n0 = 0.0;
};

/// Bare-frame initial condition: <S_z>(0), <S^+>(0), <S^->(0).
struct BareInitial {
  double sz0 = -0.5;
  std::complex<double> splus0{0.0, 0.0};
  std::complex<double> sminus0{0.0, 0.0};
  double n0 = 0.0;
};

/// Rotates a bare-frame initial condition into the dressed frame:
///   <R_z>  = 2 cos(2θ) <S_z> + sin(2θ) (<S^+> + <S^->)
///   <R^+>  = cos²θ <S^+> - sin²θ <S^-> - sin(2θ) <S_z>
DressedInitial to_dressed(const BareInitial& init, const DressedFrame& frame);

struct TrajectoryPoint {
  double t = 0.0;
  double rz = 0.0;
  std::complex<double> rplus;
  double n = 0.0;
};

struct AnalyticTrajectory {
  std::vector<TrajectoryPoint> points;
  double cooling_rate = 0.0;
  double n_fixed = 0.0;   ///< A^(+)/C; equals the steady phonon number when C > 0
  bool growing = false;   ///< C <= 0 with a non-decaying phonon number
  double valid_from = 0.0;  ///< times below margin/(2 omega_bar) are outside the model
};

/// Throws Error(kInvalidGrid) unless times are finite, >= 0 and strictly
/// increasing.
void check_time_grid(std::span<const double> times);

AnalyticTrajectory trajectory(const PhysicalParams& p, const DressedInitial& init,
                              std::span<const double> times, double margin = 10.0);

// ---------------------------------------------------------------------------
// Regime diagnostics.

struct ValidityCheck {
  std::string name;
  std::string relation;  ///< human-readable inequality
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool ok = false;
};

struct ValidityReport {
  double margin = 10.0;
  std::vector<ValidityCheck> checks;
  bool overall = false;
  double min_time = 0.0;  ///< margin / (2 omega_bar)

  const ValidityCheck* find(std::string_view name) const;
};

/// Evaluates the regime inequalities of the closed-form model. "Much greater"
/// means a ratio of at least `margin`.
ValidityReport validity_report(const PhysicalParams& p, double margin = 10.0);

/// Rates of the two counter-rotating sideband processes (atom and phonon
/// raised together, or lowered together) that the closed form drops. They sit
/// at detuning 2 omega_bar + nu instead of 2 omega_bar - nu.
struct CounterRotatingRates {
  double heating = 0.0;  ///< from the lower dressed level
  double cooling = 0.0;  ///< from the upper dressed level
};

CounterRotatingRates counter_rotating_rates(const PhysicalParams& p);

/// Stationary phonon number with the counter-rotating rates added back to
/// leading order.
PhononNumber counter_rotating_phonon_estimate(const PhysicalParams& p);

}  // namespace pccool
