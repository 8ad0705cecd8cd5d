#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "pccool/params.hpp"

namespace pccool::testing {

inline double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// Random valid parameter sets. Rates span free-space and strongly
/// asymmetric reservoirs; detuning covers both signs.
class ParamGenerator {
 public:
  explicit ParamGenerator(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  PhysicalParams operator()() {
    PhysicalParams p;
    p.omega = uniform(0.2, 20.0);
    p.delta = uniform(-40.0, 40.0);
    p.nu = uniform(0.5, 30.0);
    p.eta = uniform(0.0, 0.3);
    p.gamma_plus = uniform(0.0, 2.0);
    p.gamma_minus = uniform(0.0, 2.0);
    p.gamma_zero = uniform(0.0, 2.0);
    // Keep at least one dressed transition bright.
    if (p.gamma_plus + p.gamma_minus < 1e-3) p.gamma_plus = 1.0;
    return p;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline PhysicalParams fig1_resonance() {
  return {5.0, 2.0 * std::sqrt(11.0), 12.0, 0.1, 1.0, 1.0, 1.0};
}

inline PhysicalParams fig2_point() { return {5.0, 0.0, 2.0, 0.1, 1.0, 0.2, 0.2}; }

}  // namespace pccool::testing
