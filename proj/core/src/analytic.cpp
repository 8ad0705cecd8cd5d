#include "pccool/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pccool/error.hpp"

namespace pccool {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Couplings {
  DressedFrame frame;
  double down = 0.0;     // gamma_+ cos^4(theta), |2> -> |1>
  double up = 0.0;       // gamma_- sin^4(theta), |1> -> |2>
  double dephase = 0.0;  // gamma_0 sin^2(2 theta)
  double sideband_detuning = 0.0;  // 2 omega_bar - nu
  double g2 = 0.0;                 // (eta omega)^2
};

Couplings couplings(const PhysicalParams& p) {
  Couplings c;
  c.frame = dressed_frame(p);
  c.down = p.gamma_plus * c.frame.cos4_theta();
  c.up = p.gamma_minus * c.frame.sin4_theta();
  c.dephase = p.gamma_zero * c.frame.sin_2theta * c.frame.sin_2theta;
  c.sideband_detuning = 2.0 * c.frame.omega_bar - p.nu;
  c.g2 = (p.eta * p.omega) * (p.eta * p.omega);
  return c;
}

bool populations_tied(const SteadyAtom& a) {
  return a.r11 - a.r22 <= kPopulationTieTolerance * (a.r11 + a.r22);
}

double ratio_of(double lhs, double rhs) {
  if (rhs == 0.0) return kInf;
  return lhs / rhs;
}

}  // namespace

SteadyAtom steady_atom(const PhysicalParams& p) {
  const Couplings c = couplings(p);
  const double total = c.down + c.up;
  if (!(total > 0.0)) {
    throw Error(ErrorKind::kDegenerateRates,
                "gamma_plus cos^4(theta) + gamma_minus sin^4(theta) = 0; both "
                "dressed transitions are dark");
  }
  SteadyAtom a;
  a.r11 = c.down / total;
  a.r22 = c.up / total;
  a.rz = a.r22 - a.r11;
  a.sz = 0.5 * c.frame.cos_2theta * a.rz;
  return a;
}

RateSet rate_set(const PhysicalParams& p) {
  const Couplings c = couplings(p);
  const SteadyAtom a = steady_atom(p);
  RateSet r;
  r.gamma_s = c.down + c.up;
  r.gamma_perp = c.dephase + r.gamma_s;
  r.gamma_0_eff = kRecoilMoment * p.eta * p.eta *
                  (c.up * a.r11 + c.down * a.r22 + 0.25 * c.dephase);
  const std::complex<double> lorentz_minus{r.gamma_perp, c.sideband_detuning};
  const std::complex<double> lorentz_plus{r.gamma_perp, -c.sideband_detuning};
  r.a_minus = r.gamma_0_eff + c.g2 * a.r11 / lorentz_minus;
  r.a_plus = r.gamma_0_eff + c.g2 * a.r22 / lorentz_plus;
  r.a_rate_minus = 2.0 * r.a_minus.real();
  r.a_rate_plus = 2.0 * r.a_plus.real();
  r.cooling_rate = r.a_rate_minus - r.a_rate_plus;
  return r;
}

double cooling_rate(const PhysicalParams& p) {
  const Couplings c = couplings(p);
  const SteadyAtom a = steady_atom(p);
  const double gamma_perp = c.dephase + c.down + c.up;
  return -2.0 * c.g2 * gamma_perp * a.rz /
         (gamma_perp * gamma_perp + c.sideband_detuning * c.sideband_detuning);
}

PhononNumber steady_phonon(const PhysicalParams& p) {
  validate(p);
  if (p.eta * p.omega == 0.0) {
    throw Error(ErrorKind::kZeroCoupling,
                "eta * omega = 0: the vibrational mode is decoupled and has no "
                "stationary phonon number");
  }
  const Couplings c = couplings(p);
  const SteadyAtom a = steady_atom(p);
  if (populations_tied(a)) return Heating{};
  const RateSet r = rate_set(p);
  const double imbalance = a.r11 - a.r22;
  const double lorentz_den = r.gamma_perp * r.gamma_perp +
                             c.sideband_detuning * c.sideband_detuning;
  return a.r22 / imbalance +
         r.gamma_0_eff * lorentz_den / (c.g2 * r.gamma_perp * imbalance);
}

DressedInitial to_dressed(const BareInitial& init, const DressedFrame& f) {
  DressedInitial d;
  d.rz0 = 2.0 * f.cos_2theta * init.sz0 +
          f.sin_2theta * (init.splus0 + init.sminus0).real();
  d.rplus0 = f.cos2_theta * init.splus0 - f.sin2_theta * init.sminus0 -
             f.sin_2theta * init.sz0;
  d.n0 = init.n0;
  return d;
}

void check_time_grid(std::span<const double> times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || times[i] < 0.0) {
      throw Error(ErrorKind::kInvalidGrid,
                  "time " + std::to_string(i) + " is negative or not finite");
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw Error(ErrorKind::kInvalidGrid,
                  "times must be strictly increasing (index " + std::to_string(i) + ")");
    }
  }
}

AnalyticTrajectory trajectory(const PhysicalParams& p, const DressedInitial& init,
                              std::span<const double> times, double margin) {
  check_time_grid(times);
  const DressedFrame f = dressed_frame(p);
  const SteadyAtom a = steady_atom(p);
  const RateSet r = rate_set(p);

  AnalyticTrajectory out;
  out.cooling_rate = r.cooling_rate;
  out.valid_from = margin / (2.0 * f.omega_bar);
  const double c = r.cooling_rate;
  if (c != 0.0) {
    out.n_fixed = r.a_rate_plus / c;
  } else {
    out.n_fixed = r.a_rate_plus == 0.0 ? init.n0 : kInf;
  }
  out.growing = c < 0.0 || (c == 0.0 && r.a_rate_plus > 0.0);

  out.points.reserve(times.size());
  for (double t : times) {
    TrajectoryPoint pt;
    pt.t = t;
    // Written as x0 e + x_inf (1 - e) so that t = 0 returns x0 bit for bit.
    const double e_z = std::exp(-2.0 * r.gamma_s * t);
    pt.rz = init.rz0 * e_z - a.rz * std::expm1(-2.0 * r.gamma_s * t);
    pt.rplus = init.rplus0 * std::exp(-r.gamma_perp * t);
    if (c != 0.0) {
      pt.n = init.n0 * std::exp(-c * t) - out.n_fixed * std::expm1(-c * t);
    } else {
      pt.n = init.n0 + r.a_rate_plus * t;
    }
    out.points.push_back(pt);
  }
  return out;
}

CounterRotatingRates counter_rotating_rates(const PhysicalParams& p) {
  const Couplings c = couplings(p);
  const SteadyAtom a = steady_atom(p);
  const double gamma_perp = c.dephase + c.down + c.up;
  const double far = 2.0 * c.frame.omega_bar + p.nu;
  const double lorentz = 2.0 * c.g2 * gamma_perp / (gamma_perp * gamma_perp + far * far);
  return {lorentz * a.r11, lorentz * a.r22};
}

PhononNumber counter_rotating_phonon_estimate(const PhysicalParams& p) {
  const RateSet r = rate_set(p);
  const CounterRotatingRates cr = counter_rotating_rates(p);
  const double net = r.cooling_rate - cr.heating + cr.cooling;
  if (!(net > 0.0)) return Heating{};
  return (r.a_rate_plus + cr.heating) / net;
}

const ValidityCheck* ValidityReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ValidityReport validity_report(const PhysicalParams& p, double margin) {
  const Couplings c = couplings(p);
  ValidityReport rep;
  rep.margin = margin;
  rep.min_time = margin / (2.0 * c.frame.omega_bar);

  const double max_gamma = std::max({p.gamma_plus, p.gamma_minus, p.gamma_zero});
  const double coupling = p.eta * p.omega;
  const double gamma_s = c.down + c.up;
  const double gamma_perp = c.dephase + gamma_s;

  auto add = [&](std::string name, std::string relation, double lhs, double rhs,
                 double ratio, bool ok) {
    rep.checks.push_back({std::move(name), std::move(relation), lhs, rhs, ratio, ok});
  };

  {
    const double lhs = 2.0 * c.frame.omega_bar;
    const double ratio = ratio_of(lhs, max_gamma);
    add("secular", "2*omega_bar >> max(gamma_plus, gamma_minus, gamma_zero)", lhs,
        max_gamma, ratio, ratio >= margin);
  }
  add("sideband_coupling", "eta*omega < max(gamma_plus, gamma_minus, gamma_zero)",
      coupling, max_gamma, coupling / max_gamma, coupling < max_gamma);

  const bool degenerate = !(gamma_s > 0.0);
  if (degenerate) {
    add("rate_separation", "min(2*gamma_s, gamma_perp) >> |C|", 0.0, 0.0, 0.0, false);
    add("counter_rotating", "n_s >> |n_s(with counter-rotating) - n_s|", 0.0, 0.0,
        0.0, false);
  } else {
    const RateSet r = rate_set(p);
    const double fast = std::min(2.0 * gamma_s, gamma_perp);
    const double slow = std::abs(r.cooling_rate);
    const double ratio = ratio_of(fast, slow);
    add("rate_separation", "min(2*gamma_s, gamma_perp) >> |C|", fast, slow, ratio,
        ratio >= margin);

    const CounterRotatingRates cr = counter_rotating_rates(p);
    const SteadyAtom a = steady_atom(p);
    if (coupling > 0.0 && !populations_tied(a)) {
      const double n = std::get<double>(steady_phonon(p));
      const PhononNumber corrected = counter_rotating_phonon_estimate(p);
      if (is_heating(corrected)) {
        add("counter_rotating", "n_s >> |n_s(with counter-rotating) - n_s|", n, kInf,
            0.0, false);
      } else {
        const double shift = std::abs(std::get<double>(corrected) - n);
        const double q = ratio_of(n, shift);
        add("counter_rotating", "n_s >> |n_s(with counter-rotating) - n_s|", n, shift,
            q, q >= margin);
      }
    } else {
      const double shift = std::abs(cr.heating - cr.cooling);
      const double q = ratio_of(slow, shift);
      add("counter_rotating", "|C| >> |counter-rotating rate shift|", slow, shift, q,
          q >= margin);
    }
  }

  {
    const double lhs = gamma_perp * gamma_perp + c.sideband_detuning * c.sideband_detuning;
    const double ratio = ratio_of(lhs, c.g2);
    add("weak_sideband_coupling",
        "gamma_perp^2 + (2*omega_bar - nu)^2 >> (eta*omega)^2", lhs, c.g2, ratio,
        ratio >= margin);
  }

  rep.overall = std::all_of(rep.checks.begin(), rep.checks.end(),
                            [](const ValidityCheck& ch) { return ch.ok; });
  return rep;
}

}  // namespace pccool
