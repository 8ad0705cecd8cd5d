#include "pccool/params.hpp"

#include <cmath>
#include <string>

#include "pccool/error.hpp"

namespace pccool {
namespace {

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw Error(ErrorKind::kInvalidParams, std::string(field) + " " + what);
}

}  // namespace

void validate(const PhysicalParams& p) {
  auto finite = [](double x) { return std::isfinite(x); };
  require(finite(p.omega) && p.omega > 0.0, "omega", "must be finite and > 0");
  require(finite(p.delta), "delta", "must be finite");
  require(finite(p.nu) && p.nu > 0.0, "nu", "must be finite and > 0");
  require(finite(p.eta) && p.eta >= 0.0, "eta", "must be finite and >= 0");
  require(finite(p.gamma_plus) && p.gamma_plus >= 0.0, "gamma_plus",
          "must be finite and >= 0");
  require(finite(p.gamma_minus) && p.gamma_minus >= 0.0, "gamma_minus",
          "must be finite and >= 0");
  require(finite(p.gamma_zero) && p.gamma_zero >= 0.0, "gamma_zero",
          "must be finite and >= 0");
  require(p.gamma_plus + p.gamma_minus + p.gamma_zero > 0.0, "gamma_plus",
          "gamma_plus + gamma_minus + gamma_zero must be > 0");
}

bool is_free_space(const PhysicalParams& p) {
  return p.gamma_plus == p.gamma_minus && p.gamma_minus == p.gamma_zero;
}

DressedFrame dressed_frame(const PhysicalParams& p) {
  validate(p);
  DressedFrame f;
  f.omega_bar = std::hypot(p.omega, 0.5 * p.delta);
  f.cos_2theta = p.delta / (2.0 * f.omega_bar);
  f.sin_2theta = p.omega / f.omega_bar;
  // The smaller of cos^2 and sin^2 is Omega^2 / (Omega_bar (2 Omega_bar + |Delta|)),
  // which avoids cancellation in (1 -+ Delta/(2 Omega_bar)) / 2 at large |Delta|.
  const double small =
      p.omega * p.omega / (f.omega_bar * (2.0 * f.omega_bar + std::abs(p.delta)));
  if (p.delta >= 0.0) {
    f.sin2_theta = small;
    f.cos2_theta = 1.0 - small;
  } else {
    f.cos2_theta = small;
    f.sin2_theta = 1.0 - small;
  }
  return f;
}

std::string_view to_string(ReferenceRate r) {
  return r == ReferenceRate::kGamma ? "gamma" : "gamma_plus";
}

ReferenceRate parse_reference_rate(std::string_view text) {
  if (text == "gamma") return ReferenceRate::kGamma;
  if (text == "gamma_plus") return ReferenceRate::kGammaPlus;
  throw Error(ErrorKind::kInvalidConfig,
              "reference_rate must be 'gamma' or 'gamma_plus', got '" +
                  std::string(text) + "'");
}

}  // namespace pccool
