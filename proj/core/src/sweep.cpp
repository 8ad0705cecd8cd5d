#include "pccool/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <execution>
#include <numeric>

namespace pccool {

std::string_view to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::kDelta: return "delta";
    case SweepVariable::kGammaRatio: return "gamma_ratio";
    case SweepVariable::kNu: return "nu";
    case SweepVariable::kEta: return "eta";
    case SweepVariable::kOmega: return "omega";
  }
  return "delta";
}

SweepVariable parse_sweep_variable(std::string_view text) {
  for (auto v : {SweepVariable::kDelta, SweepVariable::kGammaRatio, SweepVariable::kNu,
                 SweepVariable::kEta, SweepVariable::kOmega}) {
    if (to_string(v) == text) return v;
  }
  throw Error(ErrorKind::kInvalidConfig,
              "sweep_variable must be one of delta, gamma_ratio, nu, eta, omega; got '" +
                  std::string(text) + "'");
}

std::string_view to_string(GammaZeroRule r) {
  return r == GammaZeroRule::kFixed ? "fixed" : "equals_gamma_minus";
}

GammaZeroRule parse_gamma_zero_rule(std::string_view text) {
  if (text == "fixed") return GammaZeroRule::kFixed;
  if (text == "equals_gamma_minus") return GammaZeroRule::kEqualsGammaMinus;
  throw Error(ErrorKind::kInvalidConfig,
              "gamma_zero_rule must be 'fixed' or 'equals_gamma_minus'; got '" +
                  std::string(text) + "'");
}

std::vector<double> linspace(double min, double max, int count) {
  if (count < 1) throw Error(ErrorKind::kInvalidGrid, "grid count must be >= 1");
  if (!std::isfinite(min) || !std::isfinite(max)) {
    throw Error(ErrorKind::kInvalidGrid, "grid bounds must be finite");
  }
  std::vector<double> g(count);
  if (count == 1) {
    g[0] = min;
    return g;
  }
  const double step = (max - min) / (count - 1);
  for (int i = 0; i < count; ++i) g[i] = min + step * i;
  g.back() = max;
  return g;
}

void validate(const SweepSpec& spec) {
  if (spec.grid.empty()) throw Error(ErrorKind::kInvalidGrid, "sweep grid is empty");
  const bool up = spec.grid.size() < 2 || spec.grid[1] > spec.grid[0];
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    if (!std::isfinite(spec.grid[i])) {
      throw Error(ErrorKind::kInvalidGrid, "sweep grid contains a non-finite value");
    }
    if (i > 0 && (up ? !(spec.grid[i] > spec.grid[i - 1])
                     : !(spec.grid[i] < spec.grid[i - 1]))) {
      throw Error(ErrorKind::kInvalidGrid, "sweep grid must be strictly monotone");
    }
  }
  if (spec.variable == SweepVariable::kGammaRatio && !spec.gamma_zero_rule) {
    throw Error(ErrorKind::kInvalidConfig,
                "gamma_ratio sweeps must state gamma_zero_rule (fixed | equals_gamma_minus)");
  }
  for (const auto& name : spec.observables) {
    if (std::find(std::begin(kSweepColumns), std::end(kSweepColumns), name) ==
        std::end(kSweepColumns)) {
      throw Error(ErrorKind::kInvalidConfig, "unknown observable '" + name + "'");
    }
  }
  if (!(spec.margin > 0.0)) throw Error(ErrorKind::kInvalidConfig, "margin must be > 0");
}

PhysicalParams params_at(const SweepSpec& spec, double x) {
  PhysicalParams p = spec.base;
  switch (spec.variable) {
    case SweepVariable::kDelta: p.delta = x; break;
    case SweepVariable::kNu: p.nu = x; break;
    case SweepVariable::kEta: p.eta = x; break;
    case SweepVariable::kOmega: p.omega = x; break;
    case SweepVariable::kGammaRatio:
      p.gamma_minus = x * p.gamma_plus;
      if (spec.gamma_zero_rule == GammaZeroRule::kEqualsGammaMinus) {
        p.gamma_zero = p.gamma_minus;
      }
      break;
  }
  return p;
}

namespace {

SweepRow evaluate(const SweepSpec& spec, double x) {
  SweepRow row;
  row.x = x;
  try {
    const PhysicalParams p = params_at(spec, x);
    const SteadyAtom atom = steady_atom(p);
    const RateSet rates = rate_set(p);
    row.rz = atom.rz;
    row.sz = atom.sz;
    row.two_sz = 2.0 * atom.sz;
    row.cooling_rate = cooling_rate(p);
    row.a_rate_plus = rates.a_rate_plus;
    row.valid = validity_report(p, spec.margin).overall;
    row.n_s = steady_phonon(p);
    if (spec.oracle && !is_heating(row.n_s)) {
      const ConvergedSteadyState ss = converged_steady_state(p, spec.oracle_options);
      row.oracle_n_s = ss.state.rho.phonon_number();
      row.oracle_n_max = ss.n_max;
    }
  } catch (const Error& e) {
    row.error_kind = e.kind();
    row.error = e.what();
  }
  return row;
}

}  // namespace

bool SweepTable::has_errors() const {
  return std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.ok(); });
}

int SweepTable::exit_code() const {
  int code = 0;
  for (const auto& r : rows) {
    if (r.error_kind) code = std::max(code, pccool::exit_code(*r.error_kind));
  }
  return code;
}

SweepTable run_sweep(const SweepSpec& spec, Execution execution) {
  validate(spec);
  SweepTable table;
  table.spec = spec;
  table.rows.resize(spec.grid.size());
  auto eval = [&spec](double x) { return evaluate(spec, x); };
  if (execution == Execution::kParallel) {
    std::transform(std::execution::par, spec.grid.begin(), spec.grid.end(),
                   table.rows.begin(), eval);
  } else {
    std::transform(spec.grid.begin(), spec.grid.end(), table.rows.begin(), eval);
  }
  return table;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kTrapFrequencies[] = {2.0, 6.0, 12.0};

std::string nu_label(double nu) {
  return "nu=" + std::to_string(static_cast<int>(nu));
}

Preset detuning_family(std::string name, std::string description, ReferenceRate ref,
                       PhysicalParams base) {
  Preset preset{std::move(name), std::move(description), ref, "two_sz", {}};
  for (double nu : kTrapFrequencies) {
    SweepSpec s;
    s.label = nu_label(nu);
    s.base = base;
    s.base.nu = nu;
    s.variable = SweepVariable::kDelta;
    s.grid = linspace(-10.0, 10.0, 401);
    preset.curves.push_back(std::move(s));
  }
  return preset;
}

Preset ratio_family(std::string name, std::string description, std::string inversion,
                    double delta) {
  Preset preset{std::move(name), std::move(description), ReferenceRate::kGammaPlus,
                std::move(inversion), {}};
  for (double nu : kTrapFrequencies) {
    SweepSpec s;
    s.label = nu_label(nu);
    s.base = PhysicalParams{5.0, delta, nu, 0.1, 1.0, 1.0, 1.0};
    s.variable = SweepVariable::kGammaRatio;
    s.gamma_zero_rule = GammaZeroRule::kEqualsGammaMinus;
    s.grid = linspace(0.01, 1.5, 300);
    preset.curves.push_back(std::move(s));
  }
  return preset;
}

}  // namespace

std::vector<Preset> list_presets() {
  std::vector<Preset> out;
  out.push_back(detuning_family(
      "fig1", "free space: eta=0.1, omega=5, gamma_plus=gamma_minus=gamma_zero=1; delta sweep",
      ReferenceRate::kGamma, PhysicalParams{5.0, 0.0, 2.0, 0.1, 1.0, 1.0, 1.0}));
  out.push_back(detuning_family(
      "fig1e",
      "photonic crystal: eta=0.1, omega=5, gamma_minus=gamma_zero=0.2 gamma_plus; delta sweep",
      ReferenceRate::kGammaPlus, PhysicalParams{5.0, 0.0, 2.0, 0.1, 1.0, 0.2, 0.2}));
  out.push_back(ratio_family(
      "fig2", "resonant drive delta=0, gamma_zero=gamma_minus; gamma_minus/gamma_plus sweep",
      "sz", 0.0));
  out.push_back(ratio_family(
      "fig3",
      "delta/(2 omega)=-0.5, gamma_zero=gamma_minus; gamma_minus/gamma_plus sweep", "two_sz",
      -5.0));
  return out;
}

Preset find_preset(std::string_view name) {
  std::string names;
  for (auto& p : list_presets()) {
    if (p.name == name) return p;
    names += (names.empty() ? "" : ", ") + p.name;
  }
  throw Error(ErrorKind::kUnknownPreset,
              "unknown preset '" + std::string(name) + "'; available: " + names);
}

}  // namespace pccool
