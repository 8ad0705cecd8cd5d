#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "pccool/density_matrix.hpp"
#include "pccool/params.hpp"

namespace pccool {

using SparseOperator = Eigen::SparseMatrix<Complex>;

inline constexpr int kDefaultNMax = 12;
inline constexpr int kDefaultMaxDim = 128;

/// Operators of the dressed atom (x) truncated mode, in DensityMatrix basis
/// order.
struct DressedOperators {
  SparseOperator hamiltonian;  ///< nu b'b + omega_bar R_z + i eta omega (R+ - R-)(b + b')
  SparseOperator r_z;
  SparseOperator r_plus;
  SparseOperator r_minus;
  SparseOperator position;     ///< b + b'
};

DressedOperators dressed_operators(const PhysicalParams& p, int n_max);

/// Generator of the dressed-state master equation acting on column-stacked
/// vec(rho) (index i + D j for rho(i, j)).
class Liouvillian {
 public:
  Liouvillian(PhysicalParams params, int n_max, SparseOperator generator);

  const PhysicalParams& params() const { return params_; }
  int n_max() const { return n_max_; }
  int dim() const { return 2 * (n_max_ + 1); }
  const SparseOperator& generator() const { return generator_; }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& vec_rho) const;
  DensityMatrix apply(const DensityMatrix& rho) const;

  /// max |d(Tr rho)/dt| coefficient over all vec(rho) components.
  double trace_defect() const;

  /// Largest row sum of |L|, an upper bound on the spectral radius.
  double row_sum_norm() const;

  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(generator_); }

 private:
  PhysicalParams params_;
  int n_max_;
  SparseOperator generator_;
};

/// Builds the full generator: -i[H0, rho] plus the dephasing (R_z), emission
/// (R^-) and absorption (R^+) channels with rates gamma_0 sin^2(2θ)/4,
/// gamma_+ cos^4θ and gamma_- sin^4θ. Inside each jump term the recoil average
/// is expanded to second order:
///   rho -> rho + (2/5) eta^2 (X rho X - {X^2, rho}/2),  X = b + b'.
/// Throws Error(kDimensionOverflow) when 2 (n_max + 1) > max_dim.
Liouvillian build_liouvillian(const PhysicalParams& p, int n_max = kDefaultNMax,
                              int max_dim = kDefaultMaxDim);

// ---------------------------------------------------------------------------
// Time evolution.

struct EvolveOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double initial_step = 1e-3;
  /// Step cap; <= 0 picks 0.9 / (row-sum norm of L).
  double max_step = 0.0;
  /// Truncation breach when the top two Fock levels hold more than this.
  double tail_limit = 1e-6;
  bool keep_states = false;
  /// Eigen-decompose every sample to record its smallest eigenvalue.
  bool track_positivity = true;
};

struct OracleSample {
  double t = 0.0;
  double trace = 0.0;
  double phonon_number = 0.0;
  double rz = 0.0;
  Complex rplus;
  double tail_mass = 0.0;
  double hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
};

OracleSample observe(double t, const DensityMatrix& rho, bool with_eigenvalues = true);

struct Evolution {
  int n_max = 0;
  std::vector<OracleSample> samples;
  std::vector<DensityMatrix> states;  ///< filled when keep_states
  std::size_t rhs_evaluations = 0;

  double max_trace_error() const;
  double max_hermiticity_error() const;
  double min_eigenvalue() const;
  double max_tail_mass() const;
};

/// Integrates from t = 0 and records observables at each requested time.
/// Throws Error(kInvalidGrid) for a bad grid and Error(kTruncationBreach) as
/// soon as a sample exceeds the tail limit.
Evolution evolve(const Liouvillian& L, const DensityMatrix& rho0,
                 std::span<const double> times, const EvolveOptions& options = {});

/// Uniform sampling of [0, t_end] with `samples` points (including both ends).
Evolution evolve(const Liouvillian& L, const DensityMatrix& rho0, double t_end,
                 int samples, const EvolveOptions& options = {});

// ---------------------------------------------------------------------------
// Stationary state.

struct SteadyStateOptions {
  double residual_tol = 1e-10;
  /// Kernel is taken as one-dimensional when the smallest singular value of
  /// the trace-bordered generator exceeds this times its max-norm.
  double kernel_tol = 1e-12;
  int power_iterations = 12;
};

struct SteadyState {
  DensityMatrix rho;
  double residual_inf = 0.0;  ///< ||L vec(rho)||_inf
  double sigma_kernel = 0.0;  ///< ||L x|| / ||x|| at the solution
  double sigma_gap = 0.0;     ///< smallest singular value of the bordered system
};

/// Solves L vec(rho) = 0 with Tr rho = 1 replacing the first equation.
/// Throws Error(kNoSteadyState) when the kernel is not one-dimensional.
SteadyState steady_state(const Liouvillian& L, const SteadyStateOptions& options = {});

struct ConvergenceOptions {
  int n_max = kDefaultNMax;
  int step = 4;
  int max_dim = kDefaultMaxDim;
  double tolerance = 1e-4;
  double tail_limit = 1e-6;
  SteadyStateOptions solver;
};

struct ConvergedSteadyState {
  SteadyState state;
  int n_max = 0;        ///< truncation of `state`
  int n_max_check = 0;  ///< truncation it was compared against
  double phonon_check = 0.0;
  double relative_change = 0.0;
};

/// Raises n_max by `step` until <b'b> changes by less than `tolerance`
/// (relative) between n_max and n_max + step and the tail is below the limit.
/// Throws Error(kTruncationBreach) if the dimension cap is reached first.
ConvergedSteadyState converged_steady_state(const PhysicalParams& p,
                                            const ConvergenceOptions& options = {});

}  // namespace pccool
