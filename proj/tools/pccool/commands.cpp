#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "config.hpp"
#include "pccool/analytic.hpp"
#include "pccool/density_matrix.hpp"
#include "pccool/error.hpp"
#include "pccool/format.hpp"
#include "pccool/lindblad.hpp"
#include "pccool/reduced.hpp"
#include "pccool/sweep.hpp"

namespace pccool::cli {
namespace {

using nlohmann::json;

enum class Format { kCsv, kJson };

Format output_format(const RunConfig& cfg, Format fallback) {
  const std::string& f = cfg.text("format");
  if (f.empty()) return fallback;
  if (f == "csv") return Format::kCsv;
  if (f == "json") return Format::kJson;
  throw Error(ErrorKind::kInvalidConfig, "format must be csv or json, got '" + f + "'");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string config_comment(const RunConfig& cfg) {
  return "# config: " + cfg.to_json().dump() + "\n";
}

/// Writes to the configured output file, or to `out` when none is set.
void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  const std::string& path = cfg.text("output");
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::kInvalidConfig, "cannot write '" + path + "'");
  f << text;
}

json header(const RunConfig& cfg, std::string_view command) {
  return {
      {"command", std::string(command)},
      {"reference_rate", cfg.text("reference_rate")},
      {"config", cfg.to_json()},
  };
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string fmt(double x) { return format_double(x); }

// --- steady -----------------------------------------------------------------

int cmd_steady(const RunConfig& cfg, std::ostream& out) {
  const PhysicalParams p = cfg.params();
  (void)cfg.reference_rate();
  const double margin = cfg.number("margin");
  const SteadyAtom atom = steady_atom(p);
  const RateSet rates = rate_set(p);
  const PhononNumber n = steady_phonon(p);
  const ValidityReport validity = validity_report(p, margin);

  json doc = header(cfg, "steady");
  doc["params"] = to_json(p);
  doc["dressed_frame"] = to_json(dressed_frame(p));
  doc["n_s"] = to_json(n);
  doc["rz"] = json_number(atom.rz);
  doc["sz"] = json_number(atom.sz);
  doc["cooling_rate"] = json_number(cooling_rate(p));
  doc["steady_atom"] = to_json(atom);
  doc["rates"] = to_json(rates);
  doc["validity"] = to_json(validity);

  if (output_format(cfg, Format::kJson) == Format::kJson) {
    emit(cfg, out, dump(doc));
  } else {
    std::ostringstream os;
    os << config_comment(cfg);
    os << "n_s,rz,sz,cooling_rate,a_rate_minus,a_rate_plus,gamma_perp,gamma_s,valid\n";
    os << (is_heating(n) ? std::string(kHeatingSentinel) : fmt(std::get<double>(n))) << ','
       << fmt(atom.rz) << ',' << fmt(atom.sz) << ',' << fmt(rates.cooling_rate) << ','
       << fmt(rates.a_rate_minus) << ',' << fmt(rates.a_rate_plus) << ','
       << fmt(rates.gamma_perp) << ',' << fmt(rates.gamma_s) << ','
       << (validity.overall ? "true" : "false") << '\n';
    emit(cfg, out, os.str());
  }
  return 0;
}

// --- trajectory -------------------------------------------------------------

struct Initial {
  DressedInitial dressed;
  Eigen::Matrix2cd atom;
};

Initial initial_state(const RunConfig& cfg, const PhysicalParams& p) {
  const DressedFrame frame = dressed_frame(p);
  const std::string& which = cfg.text("init_frame");
  Initial init;
  if (which == "dressed") {
    init.dressed = {cfg.number("rz0"), {cfg.number("rplus0_re"), cfg.number("rplus0_im")},
                    cfg.number("n0")};
    init.atom = DensityMatrix::atom_from_dressed(init.dressed.rz0, init.dressed.rplus0);
  } else if (which == "bare") {
    const BareInitial bare{cfg.number("sz0"),
                           {cfg.number("splus0_re"), cfg.number("splus0_im")},
                           {cfg.number("sminus0_re"), cfg.number("sminus0_im")},
                           cfg.number("n0")};
    init.dressed = to_dressed(bare, frame);
    init.atom = DensityMatrix::atom_from_bare(bare.sz0, bare.splus0, frame);
  } else {
    throw Error(ErrorKind::kInvalidConfig,
                "init_frame must be dressed or bare, got '" + which + "'");
  }
  if (!(init.dressed.n0 >= 0.0) || !std::isfinite(init.dressed.n0)) {
    throw Error(ErrorKind::kInvalidConfig, "n0 must be finite and non-negative");
  }
  return init;
}

struct OracleRun {
  Evolution evolution;
  int n_max = 0;
};

/// Raises n_max until the initial phonon distribution fits under the tail
/// limit, then integrates the full master equation.
OracleRun oracle_trajectory(const RunConfig& cfg, const PhysicalParams& p,
                            const Initial& init, const std::vector<double>& times) {
  const std::string& kind = cfg.text("phonon_state");
  if (kind != "thermal" && kind != "fock") {
    throw Error(ErrorKind::kInvalidConfig,
                "phonon_state must be thermal or fock, got '" + kind + "'");
  }
  const double n0 = init.dressed.n0;
  if (kind == "fock" && n0 != std::floor(n0)) {
    throw Error(ErrorKind::kInvalidConfig, "a Fock initial state needs an integer n0");
  }
  const int step = std::max(1, cfg.integer("n_max_step"));
  const int max_dim = cfg.integer("max_dim");
  const double tail_limit = cfg.number("tail_limit");
  for (int n_max = cfg.integer("n_max");; n_max += step) {
    if (2 * (n_max + 1) > max_dim) {
      throw Error(ErrorKind::kTruncationBreach,
                  "initial phonon state does not fit below max_dim = " + std::to_string(max_dim));
    }
    if (kind == "fock" && n0 > n_max - 2) continue;
    const Eigen::VectorXd pops = kind == "thermal"
                                     ? DensityMatrix::thermal_populations(n_max, n0)
                                     : DensityMatrix::fock_populations(n_max, static_cast<int>(n0));
    const DensityMatrix rho0 = DensityMatrix::product(init.atom, pops);
    if (rho0.tail_mass() > tail_limit) continue;
    const Liouvillian L = build_liouvillian(p, n_max, max_dim);
    return {evolve(L, rho0, times, cfg.evolve_options()), n_max};
  }
}

int cmd_trajectory(const RunConfig& cfg, std::ostream& out) {
  const PhysicalParams p = cfg.params();
  (void)cfg.reference_rate();
  const int count = cfg.integer("t_count");
  if (count < 1) throw Error(ErrorKind::kInvalidGrid, "t_count must be at least 1");
  const std::vector<double> times =
      count == 1 ? std::vector<double>{0.0} : linspace(0.0, cfg.number("t_end"), count);
  const Initial init = initial_state(cfg, p);
  const AnalyticTrajectory traj = trajectory(p, init.dressed, times, cfg.number("margin"));

  std::vector<double> reduced;
  if (cfg.boolean("reduced")) reduced = reduced_phonon_evolve(p, init.dressed.n0, times);
  std::optional<OracleRun> oracle;
  if (cfg.boolean("oracle")) oracle = oracle_trajectory(cfg, p, init, times);

  if (output_format(cfg, Format::kCsv) == Format::kJson) {
    json doc = header(cfg, "trajectory");
    doc["params"] = to_json(p);
    doc["cooling_rate"] = json_number(traj.cooling_rate);
    doc["n_fixed"] = json_number(traj.n_fixed);
    doc["growing"] = traj.growing;
    doc["valid_from"] = json_number(traj.valid_from);
    json cols = {{"t", json::array()}, {"rz", json::array()}, {"re_rplus", json::array()},
                 {"im_rplus", json::array()}, {"n", json::array()}};
    for (const auto& pt : traj.points) {
      cols["t"].push_back(json_number(pt.t));
      cols["rz"].push_back(json_number(pt.rz));
      cols["re_rplus"].push_back(json_number(pt.rplus.real()));
      cols["im_rplus"].push_back(json_number(pt.rplus.imag()));
      cols["n"].push_back(json_number(pt.n));
    }
    if (!reduced.empty()) {
      cols["n_reduced"] = json::array();
      for (double v : reduced) cols["n_reduced"].push_back(json_number(v));
    }
    if (oracle) {
      doc["oracle_n_max"] = oracle->n_max;
      doc["oracle_max_trace_error"] = json_number(oracle->evolution.max_trace_error());
      doc["oracle_max_tail_mass"] = json_number(oracle->evolution.max_tail_mass());
      for (const char* c : {"n_oracle", "rz_oracle", "tail_mass"}) cols[c] = json::array();
      for (const auto& s : oracle->evolution.samples) {
        cols["n_oracle"].push_back(json_number(s.phonon_number));
        cols["rz_oracle"].push_back(json_number(s.rz));
        cols["tail_mass"].push_back(json_number(s.tail_mass));
      }
    }
    doc["series"] = std::move(cols);
    emit(cfg, out, dump(doc));
    return 0;
  }

  std::ostringstream os;
  os << config_comment(cfg);
  if (oracle) os << "# oracle_n_max: " << oracle->n_max << '\n';
  os << "t,rz,re_rplus,im_rplus,n";
  if (!reduced.empty()) os << ",n_reduced";
  if (oracle) os << ",n_oracle,rz_oracle,tail_mass";
  os << '\n';
  for (std::size_t i = 0; i < traj.points.size(); ++i) {
    const auto& pt = traj.points[i];
    os << fmt(pt.t) << ',' << fmt(pt.rz) << ',' << fmt(pt.rplus.real()) << ','
       << fmt(pt.rplus.imag()) << ',' << fmt(pt.n);
    if (!reduced.empty()) os << ',' << fmt(reduced[i]);
    if (oracle) {
      const auto& s = oracle->evolution.samples[i];
      os << ',' << fmt(s.phonon_number) << ',' << fmt(s.rz) << ',' << fmt(s.tail_mass);
    }
    os << '\n';
  }
  emit(cfg, out, os.str());
  return 0;
}

// --- sweep ------------------------------------------------------------------

std::string file_stem(const std::string& text) {
  std::string s = text;
  for (char& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-') c = '_';
  }
  return s;
}

std::vector<SweepSpec> sweep_specs(const RunConfig& cfg, std::string& name,
                                   std::string& reference_rate) {
  const double margin = cfg.number("margin");
  const bool oracle = cfg.boolean("oracle");
  const auto observables = split_list(cfg.text("observables"));
  std::vector<SweepSpec> specs;
  const std::string& preset = cfg.text("preset");
  if (!preset.empty()) {
    Preset pr = find_preset(preset);
    name = pr.name;
    reference_rate = std::string(to_string(pr.reference_rate));
    specs = std::move(pr.curves);
  } else {
    name = "sweep";
    reference_rate = std::string(to_string(cfg.reference_rate()));
    SweepSpec s;
    s.label = "custom";
    s.base = cfg.params();
    s.variable = parse_sweep_variable(cfg.text("sweep_variable"));
    if (!cfg.text("gamma_zero_rule").empty()) {
      s.gamma_zero_rule = parse_gamma_zero_rule(cfg.text("gamma_zero_rule"));
    }
    if (!cfg.text("sweep_values").empty()) {
      for (const auto& item : split_list(cfg.text("sweep_values"))) {
        RunConfig tmp = RunConfig::defaults();
        tmp.set("sweep_min", item);
        s.grid.push_back(tmp.number("sweep_min"));
      }
    } else {
      s.grid = linspace(cfg.number("sweep_min"), cfg.number("sweep_max"),
                        cfg.integer("sweep_count"));
    }
    specs.push_back(std::move(s));
  }
  for (auto& s : specs) {
    s.margin = margin;
    s.oracle = oracle;
    s.oracle_options = cfg.convergence_options();
    s.observables = observables;
    validate(s);
  }
  return specs;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  std::string name, reference_rate;
  const auto specs = sweep_specs(cfg, name, reference_rate);
  const Execution exec = cfg.boolean("serial") ? Execution::kSerial : Execution::kParallel;
  std::vector<SweepTable> tables;
  int code = 0;
  for (const auto& s : specs) {
    tables.push_back(run_sweep(s, exec));
    code = std::max(code, tables.back().exit_code());
  }

  json doc = header(cfg, "sweep");
  doc["reference_rate"] = reference_rate;
  doc["preset"] = cfg.text("preset");
  if (!cfg.text("preset").empty()) {
    const Preset pr = find_preset(name);
    doc["description"] = pr.description;
    doc["inversion_column"] = pr.inversion_column;
  }
  doc["curves"] = json::array();
  for (const auto& t : tables) {
    const auto cols = sweep_columns(t.spec);
    json rows = json::array();
    for (const auto& r : t.rows) rows.push_back(to_json(r, cols));
    json curve = {{"spec", to_json(t.spec)}, {"rows", std::move(rows)}};
    doc["curves"].push_back(std::move(curve));
  }
  doc["error_count"] = std::accumulate(
      tables.begin(), tables.end(), std::size_t{0}, [](std::size_t acc, const SweepTable& t) {
        return acc + static_cast<std::size_t>(std::count_if(
                         t.rows.begin(), t.rows.end(), [](const SweepRow& r) { return !r.ok(); }));
      });

  const std::string& dir = cfg.text("output");
  const std::string fmt_text = cfg.text("format");
  const bool want_csv = fmt_text.empty() || fmt_text == "csv";
  const bool want_json = fmt_text.empty() || fmt_text == "json";
  if (!want_csv && !want_json) (void)output_format(cfg, Format::kCsv);

  if (dir.empty()) {
    if (output_format(cfg, Format::kJson) == Format::kJson) {
      out << dump(doc);
    } else {
      out << config_comment(cfg);
      for (const auto& t : tables) {
        out << "# curve: " << t.spec.label << '\n';
        write_sweep_csv(out, t);
      }
    }
    return code;
  }

  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  if (want_csv) {
    for (const auto& t : tables) {
      const auto path = base / (name + "_" + file_stem(t.spec.label) + ".csv");
      std::ofstream f(path, std::ios::binary);
      if (!f) throw Error(ErrorKind::kInvalidConfig, "cannot write '" + path.string() + "'");
      f << config_comment(cfg);
      write_sweep_csv(f, t);
    }
  }
  if (want_json) {
    const auto path = base / (name + ".json");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::kInvalidConfig, "cannot write '" + path.string() + "'");
    f << dump(doc);
  }
  return code;
}

// --- validate ---------------------------------------------------------------

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const PhysicalParams p = cfg.params();
  (void)cfg.reference_rate();
  const double tolerance = cfg.number("tolerance");
  const double pop_tolerance = cfg.number("population_tolerance");
  const PhononNumber n = steady_phonon(p);  // zero coupling is rejected here
  const SteadyAtom atom = steady_atom(p);
  const ValidityReport validity = validity_report(p, cfg.number("margin"));

  json doc = header(cfg, "validate");
  doc["params"] = to_json(p);
  doc["validity"] = to_json(validity);
  if (!validity.overall) {
    std::string failed;
    for (const auto& c : validity.checks) {
      if (!c.ok) failed += (failed.empty() ? "" : ", ") + c.name;
    }
    doc["warning"] = "parameters outside the validity region of the closed form (" + failed + ")";
    err << "WARNING: parameters outside the validity region of the closed form (" << failed
        << "); comparing anyway\n";
  }
  doc["analytic"] = {{"n_s", to_json(n)}, {"r11", json_number(atom.r11)}};

  if (is_heating(n)) {
    doc["comparison"] = {{"pass", false},
                         {"reason", "closed form predicts heating; no stationary phonon number"}};
    emit(cfg, out, dump(doc));
    return 3;
  }

  const ConvergedSteadyState oracle = converged_steady_state(p, cfg.convergence_options());
  const double n_analytic = std::get<double>(n);
  const double n_oracle = oracle.state.rho.phonon_number();
  const double r11_oracle = oracle.state.rho.r11();
  const double rel = std::abs(n_oracle - n_analytic) / std::abs(n_oracle);
  const double pop_rel = std::abs(r11_oracle - atom.r11) / std::abs(r11_oracle);
  const bool pass = rel <= tolerance && pop_rel <= pop_tolerance;

  json o = to_json(oracle.state, oracle.n_max);
  o["n_s"] = json_number(n_oracle);
  o["r11"] = json_number(r11_oracle);
  o["n_max_check"] = oracle.n_max_check;
  o["n_s_check"] = json_number(oracle.phonon_check);
  o["relative_change"] = json_number(oracle.relative_change);
  doc["oracle"] = std::move(o);
  doc["comparison"] = {
      {"relative_error", json_number(rel)},
      {"tolerance", json_number(tolerance)},
      {"population_relative_error", json_number(pop_rel)},
      {"population_tolerance", json_number(pop_tolerance)},
      {"pass", pass},
  };
  emit(cfg, out, dump(doc));
  return pass ? 0 : 3;
}

// --- presets ----------------------------------------------------------------

int cmd_presets(const RunConfig& cfg, std::ostream& out) {
  json doc = header(cfg, "presets");
  doc.erase("reference_rate");
  doc["presets"] = json::array();
  for (const auto& pr : list_presets()) {
    json curves = json::array();
    for (const auto& c : pr.curves) curves.push_back(to_json(c));
    doc["presets"].push_back({
        {"name", pr.name},
        {"description", pr.description},
        {"reference_rate", std::string(to_string(pr.reference_rate))},
        {"inversion_column", pr.inversion_column},
        {"curves", std::move(curves)},
    });
  }
  if (output_format(cfg, Format::kJson) == Format::kCsv) {
    std::ostringstream os;
    os << "name,reference_rate,curves,description\n";
    for (const auto& pr : list_presets()) {
      std::string labels;
      for (const auto& c : pr.curves) labels += (labels.empty() ? "" : ";") + c.label;
      os << pr.name << ',' << to_string(pr.reference_rate) << ',' << labels << ",\""
         << pr.description << "\"\n";
    }
    emit(cfg, out, os.str());
  } else {
    emit(cfg, out, dump(doc));
  }
  return 0;
}

// ----------------------------------------------------------------------------

struct Subcommand {
  CLI::App* app = nullptr;
  std::string config_path;
  std::string section;
  std::map<std::string, std::string> flags;
  std::map<std::string, CLI::Option*> options;
};

void add_key_options(Subcommand& sub) {
  sub.app->add_option("-c,--config", sub.config_path,
                      "config file (key = value), or a previous JSON/CSV output");
  sub.app->add_option("--section", sub.section, "section of the config file to use");
  for (const auto& k : config_keys()) {
    const std::string name(k.name);
    const std::string help = std::string(k.help) +
                             (k.default_value.empty() ? "" : " [" + std::string(k.default_value) + "]");
    CLI::Option* opt = k.kind == ValueKind::kBool
                           ? sub.app->add_flag("--" + name + "{true}", sub.flags[name], help)->expected(0, 1)
                           : sub.app->add_option("--" + name, sub.flags[name], help);
    sub.options[name] = opt;
  }
}

RunConfig resolve(const Subcommand& sub) {
  RunConfig cfg = RunConfig::defaults();
  if (!sub.config_path.empty()) cfg.merge_file(sub.config_path, sub.section);
  else if (!sub.section.empty()) {
    throw Error(ErrorKind::kInvalidConfig, "--section needs --config");
  }
  for (const auto& [name, opt] : sub.options) {
    if (opt->count() > 0) cfg.set(name, sub.flags.at(name));
  }
  return cfg;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cooling of a trapped two-level emitter in a structured reservoir", "pccool"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");

  const std::vector<std::pair<std::string, std::string>> names = {
      {"steady", "stationary phonon number, atomic state, rates and validity report"},
      {"trajectory", "time series of <R_z>, <R^+> and the phonon number"},
      {"sweep", "evaluate a preset or a one-parameter grid"},
      {"validate", "compare the closed form against the full master equation"},
      {"presets", "list the figure presets"},
  };
  std::map<std::string, Subcommand> subs;
  for (const auto& [name, desc] : names) {
    Subcommand& sub = subs[name];
    sub.app = app.add_subcommand(name, desc);
    add_key_options(sub);
  }

  std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    // Subcommand help arrives as CallForHelp from the subcommand itself.
    if (e.get_exit_code() == 0) {
      for (auto* sc : app.get_subcommands()) out << sc->help();
      if (app.get_subcommands().empty()) out << app.help();
      return 0;
    }
    err << "invalid-config: " << e.what() << '\n';
    return 1;
  }

  const std::string chosen = app.get_subcommands().front()->get_name();
  std::optional<RunConfig> cfg;
  try {
    cfg = resolve(subs.at(chosen));
    if (chosen == "steady") return cmd_steady(*cfg, out);
    if (chosen == "trajectory") return cmd_trajectory(*cfg, out);
    if (chosen == "sweep") return cmd_sweep(*cfg, out);
    if (chosen == "validate") return cmd_validate(*cfg, out, err);
    return cmd_presets(*cfg, out);
  } catch (const Error& e) {
    err << e.what() << '\n';
    if (cfg && cfg->text("format") != "csv") {
      json doc = header(*cfg, chosen);
      doc["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
      out << dump(doc);
    }
    return exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "invalid-config: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace pccool::cli
