#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pccool/lindblad.hpp"
#include "pccool/params.hpp"

namespace pccool::cli {

enum class ValueKind { kNumber, kInteger, kBool, kText };

struct KeySpec {
  std::string_view name;
  ValueKind kind;
  std::string_view default_value;
  std::string_view help;
};

/// Every key accepted in a config file or as a --key flag.
const std::vector<KeySpec>& config_keys();

/// Flat key -> raw text map. Later layers override earlier ones.
class RunConfig {
 public:
  /// All keys at their documented defaults.
  static RunConfig defaults();

  /// Parses `key = value` lines with `#` comments and optional `[section]`
  /// headers. With sections present, `section` selects one (empty picks the
  /// only section, or fails if there are several). A JSON document with a
  /// "config" object, or a CSV whose first line is "# config: {...}", is
  /// accepted too, so any output can be re-run.
  void merge_file(const std::string& path, const std::string& section = "");
  void merge_text(std::string_view text, const std::string& section = "",
                  const std::string& origin = "<text>");
  void merge_json(const nlohmann::json& config);
  void set(std::string_view key, std::string value);

  const std::string& raw(std::string_view key) const;
  double number(std::string_view key) const;
  int integer(std::string_view key) const;
  bool boolean(std::string_view key) const;
  const std::string& text(std::string_view key) const { return raw(key); }

  PhysicalParams params() const;
  ReferenceRate reference_rate() const;
  EvolveOptions evolve_options() const;
  ConvergenceOptions convergence_options() const;

  /// Fully resolved, typed, in key-table order.
  nlohmann::json to_json() const;

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

}  // namespace pccool::cli
