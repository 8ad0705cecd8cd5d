#include "pccool/reduced.hpp"

#include <algorithm>
#include <array>

#include <boost/numeric/odeint.hpp>

#include "pccool/analytic.hpp"

namespace pccool {

std::vector<double> reduced_phonon_evolve(const PhysicalParams& p, double n0,
                                          std::span<const double> times,
                                          const ReducedOptions& options) {
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 1>;

  check_time_grid(times);
  const RateSet r = rate_set(p);
  std::vector<double> out;
  out.reserve(times.size());
  if (times.empty()) return out;

  std::vector<double> grid;
  const bool prepend = times.front() > 0.0;
  if (prepend) grid.push_back(0.0);
  grid.insert(grid.end(), times.begin(), times.end());
  if (grid.size() == 1) {
    out.push_back(n0);
    return out;
  }

  auto rhs = [&](const State& x, State& dxdt, double) {
    dxdt[0] = -r.cooling_rate * x[0] + r.a_rate_plus;
  };
  std::size_t seen = 0;
  auto observer = [&](const State& x, double) {
    if (prepend && seen++ == 0) return;
    out.push_back(x[0]);
  };
  State x{n0};
  auto stepper = ode::make_dense_output(options.abs_tol, options.rel_tol,
                                        ode::runge_kutta_dopri5<State>());
  ode::integrate_times(stepper, rhs, x, grid.begin(), grid.end(),
                       std::min(1e-3, grid[1] - grid[0]), observer);
  return out;
}

}  // namespace pccool
