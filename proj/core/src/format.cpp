#include "pccool/format.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace pccool {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

nlohmann::json json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

nlohmann::json to_json(const PhysicalParams& p) {
  return {
      {"omega", p.omega},           {"delta", p.delta},
      {"nu", p.nu},                 {"eta", p.eta},
      {"gamma_plus", p.gamma_plus}, {"gamma_minus", p.gamma_minus},
      {"gamma_zero", p.gamma_zero},
  };
}

nlohmann::json to_json(const DressedFrame& f) {
  return {
      {"omega_bar", f.omega_bar},   {"cos2_theta", f.cos2_theta},
      {"sin2_theta", f.sin2_theta}, {"cos_2theta", f.cos_2theta},
      {"sin_2theta", f.sin_2theta},
  };
}

nlohmann::json to_json(const SteadyAtom& a) {
  return {{"r11", a.r11}, {"r22", a.r22}, {"rz", a.rz}, {"sz", a.sz}};
}

nlohmann::json to_json(const RateSet& r) {
  return {
      {"gamma_perp", r.gamma_perp},
      {"gamma_s", r.gamma_s},
      {"gamma_0_eff", r.gamma_0_eff},
      {"a_minus", {{"re", r.a_minus.real()}, {"im", r.a_minus.imag()}}},
      {"a_plus", {{"re", r.a_plus.real()}, {"im", r.a_plus.imag()}}},
      {"a_rate_minus", r.a_rate_minus},
      {"a_rate_plus", r.a_rate_plus},
      {"cooling_rate", r.cooling_rate},
  };
}

nlohmann::json to_json(const ValidityReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({
        {"name", c.name},
        {"relation", c.relation},
        {"lhs", json_number(c.lhs)},
        {"rhs", json_number(c.rhs)},
        {"ratio", json_number(c.ratio)},
        {"ok", c.ok},
    });
  }
  return {
      {"margin", r.margin},
      {"overall", r.overall},
      {"min_time", json_number(r.min_time)},
      {"checks", std::move(checks)},
  };
}

nlohmann::json to_json(const PhononNumber& n) {
  if (is_heating(n)) return std::string(kHeatingSentinel);
  return json_number(std::get<double>(n));
}

nlohmann::json to_json(const SweepSpec& s) {
  nlohmann::json j = {
      {"label", s.label},
      {"base", to_json(s.base)},
      {"variable", std::string(to_string(s.variable))},
      {"grid", s.grid},
      {"margin", s.margin},
      {"oracle", s.oracle},
      {"columns", sweep_columns(s)},
  };
  if (s.gamma_zero_rule) j["gamma_zero_rule"] = std::string(to_string(*s.gamma_zero_rule));
  if (s.oracle) {
    j["oracle_options"] = {
        {"n_max", s.oracle_options.n_max},
        {"step", s.oracle_options.step},
        {"max_dim", s.oracle_options.max_dim},
        {"tolerance", s.oracle_options.tolerance},
    };
  }
  return j;
}

std::vector<std::string> sweep_columns(const SweepSpec& spec) {
  std::vector<std::string> cols;
  if (spec.observables.empty()) {
    for (auto c : kSweepColumns) {
      if (c == "oracle_n_s" && !spec.oracle) continue;
      cols.emplace_back(c);
    }
    return cols;
  }
  // Keep the canonical order regardless of how observables were listed.
  for (auto c : kSweepColumns) {
    const bool wanted = c == "x" || std::find(spec.observables.begin(),
                                              spec.observables.end(), c) !=
                                        spec.observables.end();
    if (wanted) cols.emplace_back(c);
  }
  return cols;
}

namespace {

nlohmann::json cell(const SweepRow& r, std::string_view column) {
  if (column == "x") return r.x;
  if (!r.ok() && column != "x") {
    // Values computed before the failure are still meaningful except n_s.
    if (column == "n_s" || column == "oracle_n_s") return nullptr;
  }
  if (column == "n_s") return to_json(r.n_s);
  if (column == "rz") return json_number(r.rz);
  if (column == "sz") return json_number(r.sz);
  if (column == "two_sz") return json_number(r.two_sz);
  if (column == "cooling_rate") return json_number(r.cooling_rate);
  if (column == "a_rate_plus") return json_number(r.a_rate_plus);
  if (column == "valid") return r.valid;
  if (column == "oracle_n_s") {
    if (r.oracle_n_s) return json_number(*r.oracle_n_s);
    return nullptr;
  }
  return nullptr;
}

std::string csv_cell(const nlohmann::json& j) {
  if (j.is_null()) return "";
  if (j.is_boolean()) return j.get<bool>() ? "1" : "0";
  if (j.is_string()) return j.get<std::string>();
  return format_double(j.get<double>());
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

nlohmann::json to_json(const SweepRow& r, std::span<const std::string> columns) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& c : columns) j[c] = cell(r, c);
  if (!r.ok()) {
    j["error"] = r.error;
    j["error_kind"] = std::string(to_string(*r.error_kind));
  }
  return j;
}

nlohmann::json to_json(const SteadyState& s, int n_max) {
  return {
      {"n_max", n_max},
      {"phonon_number", s.rho.phonon_number()},
      {"r11", s.rho.r11()},
      {"r22", s.rho.r22()},
      {"rz", s.rho.rz()},
      {"tail_mass", s.rho.tail_mass()},
      {"trace", s.rho.trace()},
      {"hermiticity_error", s.rho.hermiticity_error()},
      {"min_eigenvalue", s.rho.min_eigenvalue()},
      {"residual_inf", s.residual_inf},
      {"sigma_kernel", s.sigma_kernel},
      {"sigma_gap", s.sigma_gap},
  };
}

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  const auto cols = sweep_columns(table.spec);
  const bool errors = table.has_errors();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  if (errors) os << ",error";
  os << '\n';
  for (const auto& r : table.rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      os << (i ? "," : "") << csv_cell(cell(r, cols[i]));
    }
    if (errors) os << ',' << csv_escape(r.error);
    os << '\n';
  }
}

void write_trajectory_csv(std::ostream& os, const AnalyticTrajectory& traj,
                          std::span<const double> reduced) {
  const bool overlay = !reduced.empty();
  os << "t,rz,re_rplus,im_rplus,n" << (overlay ? ",n_reduced" : "") << '\n';
  for (std::size_t i = 0; i < traj.points.size(); ++i) {
    const auto& p = traj.points[i];
    os << format_double(p.t) << ',' << format_double(p.rz) << ','
       << format_double(p.rplus.real()) << ',' << format_double(p.rplus.imag()) << ','
       << format_double(p.n);
    if (overlay) os << ',' << format_double(reduced[i]);
    os << '\n';
  }
}

void write_oracle_csv(std::ostream& os, const Evolution& evolution) {
  os << "t,n,rz,re_rplus,im_rplus,tail_mass\n";
  for (const auto& s : evolution.samples) {
    os << format_double(s.t) << ',' << format_double(s.phonon_number) << ','
       << format_double(s.rz) << ',' << format_double(s.rplus.real()) << ','
       << format_double(s.rplus.imag()) << ',' << format_double(s.tail_mass) << '\n';
  }
}

}  // namespace pccool
