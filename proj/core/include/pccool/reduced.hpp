#pragma once

#include <span>
#include <vector>

#include "pccool/params.hpp"

namespace pccool {

struct ReducedOptions {
  double rel_tol = 1e-13;
  double abs_tol = 1e-15;
};

/// Numerically integrates d<b'b>/dt = -C <b'b> + A^(+) from the vibrational
/// master equation with the closed-form coefficients, sampled at `times`.
/// Integration starts at t = 0 with value n0.
std::vector<double> reduced_phonon_evolve(const PhysicalParams& p, double n0,
                                          std::span<const double> times,
                                          const ReducedOptions& options = {});

}  // namespace pccool
