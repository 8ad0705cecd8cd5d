#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "pccool/analytic.hpp"
#include "pccool/lindblad.hpp"
#include "pccool/params.hpp"
#include "pccool/sweep.hpp"

namespace pccool {

/// Shortest representation that reads back to the same double; independent
/// of the global locale. Non-finite values print as inf, -inf, nan.
std::string format_double(double x);

/// JSON number, or the strings "inf" / "-inf" / "nan" for non-finite values.
nlohmann::json json_number(double x);

nlohmann::json to_json(const PhysicalParams& p);
nlohmann::json to_json(const DressedFrame& f);
nlohmann::json to_json(const SteadyAtom& a);
nlohmann::json to_json(const RateSet& r);
nlohmann::json to_json(const ValidityReport& r);
nlohmann::json to_json(const PhononNumber& n);
nlohmann::json to_json(const SweepSpec& s);
nlohmann::json to_json(const SweepRow& r, std::span<const std::string> columns);
nlohmann::json to_json(const SteadyState& s, int n_max);

/// Columns to emit for a spec: its observables (always led by "x") or all.
std::vector<std::string> sweep_columns(const SweepSpec& spec);

/// Header plus one line per row; rows with an error carry it in a trailing
/// "error" column.
void write_sweep_csv(std::ostream& os, const SweepTable& table);

/// t, rz, re_rplus, im_rplus, n [, n_reduced]
void write_trajectory_csv(std::ostream& os, const AnalyticTrajectory& traj,
                          std::span<const double> reduced = {});

/// t, n, rz, re_rplus, im_rplus, tail_mass
void write_oracle_csv(std::ostream& os, const Evolution& evolution);

}  // namespace pccool
