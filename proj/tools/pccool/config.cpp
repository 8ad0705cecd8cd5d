#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "pccool/error.hpp"
#include "pccool/format.hpp"

namespace pccool::cli {
namespace {

Error config_error(const std::string& msg) { return Error(ErrorKind::kInvalidConfig, msg); }

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

const KeySpec* find_key(std::string_view name) {
  for (const auto& k : config_keys()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

std::string key_list() {
  std::string out;
  for (const auto& k : config_keys()) {
    if (!out.empty()) out += ", ";
    out += k.name;
  }
  return out;
}

}  // namespace

const std::vector<KeySpec>& config_keys() {
  using K = ValueKind;
  static const std::vector<KeySpec> keys = {
      // physical inputs, in units of the reference rate
      {"omega", K::kNumber, "5", "Rabi frequency"},
      {"delta", K::kNumber, "6.6332495807108", "detuning omega_0 - omega_L"},
      {"nu", K::kNumber, "12", "trap frequency"},
      {"eta", K::kNumber, "0.1", "Lamb-Dicke parameter"},
      {"gamma_plus", K::kNumber, "1", "decay rate at omega_L + 2 omega_bar"},
      {"gamma_minus", K::kNumber, "1", "decay rate at omega_L - 2 omega_bar"},
      {"gamma_zero", K::kNumber, "1", "decay rate at omega_L"},
      {"reference_rate", K::kText, "gamma", "unit of all rates: gamma | gamma_plus"},
      {"margin", K::kNumber, "10", "ratio that counts as 'much greater'"},
      // trajectory
      {"t_end", K::kNumber, "40", "last sample time"},
      {"t_count", K::kInteger, "201", "number of samples in [0, t_end]"},
      {"init_frame", K::kText, "dressed", "initial condition frame: dressed | bare"},
      {"rz0", K::kNumber, "-1", "dressed <R_z>(0)"},
      {"rplus0_re", K::kNumber, "0", "Re <R^+>(0)"},
      {"rplus0_im", K::kNumber, "0", "Im <R^+>(0)"},
      {"sz0", K::kNumber, "-0.5", "bare <S_z>(0)"},
      {"splus0_re", K::kNumber, "0", "Re <S^+>(0)"},
      {"splus0_im", K::kNumber, "0", "Im <S^+>(0)"},
      {"sminus0_re", K::kNumber, "0", "Re <S^->(0)"},
      {"sminus0_im", K::kNumber, "0", "Im <S^->(0)"},
      {"n0", K::kNumber, "2", "initial mean phonon number"},
      {"phonon_state", K::kText, "thermal", "oracle initial mode state: thermal | fock"},
      {"reduced", K::kBool, "false", "overlay the numerically integrated reduced equation"},
      {"oracle", K::kBool, "false", "also run the Lindblad oracle"},
      // oracle numerics
      {"n_max", K::kInteger, "12", "Fock truncation"},
      {"n_max_step", K::kInteger, "4", "truncation increment for convergence checks"},
      {"max_dim", K::kInteger, "128", "cap on the Hilbert dimension 2 (n_max + 1)"},
      {"convergence_tol", K::kNumber, "1e-4", "relative <b'b> change allowed per step"},
      {"tail_limit", K::kNumber, "1e-6", "population allowed in the top two Fock levels"},
      {"rel_tol", K::kNumber, "1e-9", "integrator relative tolerance"},
      {"abs_tol", K::kNumber, "1e-11", "integrator absolute tolerance"},
      // sweep
      {"preset", K::kText, "", "named figure preset (see `pccool presets`)"},
      {"sweep_variable", K::kText, "delta", "delta | gamma_ratio | nu | eta | omega"},
      {"sweep_min", K::kNumber, "-10", "first grid value"},
      {"sweep_max", K::kNumber, "10", "last grid value"},
      {"sweep_count", K::kInteger, "401", "grid points"},
      {"sweep_values", K::kText, "", "explicit comma-separated grid (overrides min/max/count)"},
      {"gamma_zero_rule", K::kText, "", "gamma_ratio sweeps: fixed | equals_gamma_minus"},
      {"observables", K::kText, "", "comma-separated column subset"},
      {"serial", K::kBool, "false", "evaluate sweep points serially"},
      // validate
      {"tolerance", K::kNumber, "0.15", "allowed relative error of the phonon number"},
      {"population_tolerance", K::kNumber, "0.05", "allowed relative error of r11"},
      // output
      {"format", K::kText, "", "csv | json (default: json for scalars, csv for series)"},
      {"output", K::kText, "", "output file, or directory for sweeps (default stdout)"},
  };
  return keys;
}

RunConfig RunConfig::defaults() {
  RunConfig c;
  for (const auto& k : config_keys()) c.values_[std::string(k.name)] = k.default_value;
  return c;
}

void RunConfig::set(std::string_view key, std::string value) {
  const KeySpec* spec = find_key(key);
  if (!spec) {
    throw config_error("unknown key '" + std::string(key) + "'; known keys: " + key_list());
  }
  values_[std::string(key)] = std::move(value);
  // Type-check eagerly so errors point at the key that was set.
  switch (spec->kind) {
    case ValueKind::kNumber: (void)number(key); break;
    case ValueKind::kInteger: (void)integer(key); break;
    case ValueKind::kBool: (void)boolean(key); break;
    case ValueKind::kText: break;
  }
}

void RunConfig::merge_text(std::string_view text, const std::string& section,
                           const std::string& origin) {
  struct Entry {
    std::string key, value;
    int line;
  };
  std::map<std::string, std::vector<Entry>> sections;
  std::vector<std::string> order;
  std::string current;
  bool saw_header = false;

  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') {
        throw config_error(origin + ":" + std::to_string(lineno) + ": malformed section header");
      }
      current = std::string(trim(s.substr(1, s.size() - 2)));
      if (sections.count(current)) {
        throw config_error(origin + ":" + std::to_string(lineno) + ": duplicate section [" +
                           current + "]");
      }
      sections[current];
      order.push_back(current);
      saw_header = true;
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw config_error(origin + ":" + std::to_string(lineno) + ": expected key = value");
    }
    if (!saw_header && order.empty()) order.push_back("");
    sections[current].push_back(
        {std::string(trim(s.substr(0, eq))), std::string(trim(s.substr(eq + 1))), lineno});
  }

  std::string chosen = section;
  if (chosen.empty()) {
    if (order.size() > 1) {
      throw config_error(origin + " has several sections; choose one with --section");
    }
    chosen = order.empty() ? "" : order.front();
  } else if (!sections.count(chosen)) {
    throw config_error(origin + " has no section [" + chosen + "]");
  }
  for (const auto& e : sections[chosen]) {
    try {
      set(e.key, e.value);
    } catch (const Error& err) {
      throw config_error(origin + ":" + std::to_string(e.line) + ": " + err.what());
    }
  }
}

void RunConfig::merge_json(const nlohmann::json& config) {
  if (!config.is_object()) throw config_error("embedded config must be a JSON object");
  for (const auto& [key, value] : config.items()) {
    if (value.is_string()) {
      set(key, value.get<std::string>());
    } else if (value.is_boolean()) {
      set(key, value.get<bool>() ? "true" : "false");
    } else if (value.is_number_integer()) {
      set(key, std::to_string(value.get<long long>()));
    } else if (value.is_number()) {
      set(key, format_double(value.get<double>()));
    } else {
      throw config_error("config key '" + key + "' has an unsupported JSON type");
    }
  }
}

void RunConfig::merge_file(const std::string& path, const std::string& section) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto start = text.find_first_not_of(" \t\r\n");
  constexpr std::string_view kCsvPrefix = "# config: ";
  if (start != std::string::npos && text[start] == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw config_error(path + ": " + e.what());
    }
    if (!doc.contains("config")) throw config_error(path + ": no \"config\" object");
    merge_json(doc.at("config"));
    return;
  }
  if (text.rfind(kCsvPrefix, 0) == 0) {
    const auto eol = text.find('\n');
    try {
      merge_json(nlohmann::json::parse(text.substr(kCsvPrefix.size(), eol - kCsvPrefix.size())));
    } catch (const nlohmann::json::exception& e) {
      throw config_error(path + ": " + e.what());
    }
    return;
  }
  merge_text(text, section, path);
}

const std::string& RunConfig::raw(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw config_error("missing key '" + std::string(key) + "'");
  return it->second;
}

double RunConfig::number(std::string_view key) const {
  const std::string& s = raw(key);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw config_error(std::string(key) + " must be a number, got '" + s + "'");
  }
  return v;
}

int RunConfig::integer(std::string_view key) const {
  const std::string& s = raw(key);
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw config_error(std::string(key) + " must be an integer, got '" + s + "'");
  }
  return v;
}

bool RunConfig::boolean(std::string_view key) const {
  const std::string& s = raw(key);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw config_error(std::string(key) + " must be true or false, got '" + s + "'");
}

PhysicalParams RunConfig::params() const {
  PhysicalParams p{number("omega"),      number("delta"),       number("nu"),
                   number("eta"),        number("gamma_plus"),  number("gamma_minus"),
                   number("gamma_zero")};
  validate(p);
  return p;
}

ReferenceRate RunConfig::reference_rate() const {
  return parse_reference_rate(text("reference_rate"));
}

EvolveOptions RunConfig::evolve_options() const {
  EvolveOptions o;
  o.rel_tol = number("rel_tol");
  o.abs_tol = number("abs_tol");
  o.tail_limit = number("tail_limit");
  return o;
}

ConvergenceOptions RunConfig::convergence_options() const {
  ConvergenceOptions o;
  o.n_max = integer("n_max");
  o.step = integer("n_max_step");
  o.max_dim = integer("max_dim");
  o.tolerance = number("convergence_tol");
  o.tail_limit = number("tail_limit");
  return o;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& k : config_keys()) {
    switch (k.kind) {
      case ValueKind::kNumber: j[std::string(k.name)] = json_number(number(k.name)); break;
      case ValueKind::kInteger: j[std::string(k.name)] = integer(k.name); break;
      case ValueKind::kBool: j[std::string(k.name)] = boolean(k.name); break;
      case ValueKind::kText: j[std::string(k.name)] = raw(k.name); break;
    }
  }
  return j;
}

}  // namespace pccool::cli
