#include "pccool/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include <boost/numeric/odeint.hpp>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>

#include "pccool/analytic.hpp"
#include "pccool/error.hpp"

namespace pccool {
namespace {

using Triplet = Eigen::Triplet<Complex>;

constexpr double kContractiveStep = 0.9;

SparseOperator identity(int n) {
  SparseOperator id(n, n);
  id.setIdentity();
  return id;
}

SparseOperator annihilation(int levels) {
  std::vector<Triplet> t;
  for (int k = 1; k < levels; ++k) t.emplace_back(k - 1, k, std::sqrt(double(k)));
  SparseOperator b(levels, levels);
  b.setFromTriplets(t.begin(), t.end());
  return b;
}

SparseOperator atom_operator(Complex m00, Complex m01, Complex m10, Complex m11) {
  std::vector<Triplet> t;
  if (m00 != 0.0) t.emplace_back(0, 0, m00);
  if (m01 != 0.0) t.emplace_back(0, 1, m01);
  if (m10 != 0.0) t.emplace_back(1, 0, m10);
  if (m11 != 0.0) t.emplace_back(1, 1, m11);
  SparseOperator a(2, 2);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

SparseOperator kron(const SparseOperator& a, const SparseOperator& b) {
  SparseOperator out = Eigen::kroneckerProduct(a, b);
  return out;
}

SparseOperator transposed(const SparseOperator& a) {
  SparseOperator t = a.transpose();
  return t;
}

// vec(A rho B) = (B^T (x) A) vec(rho)
SparseOperator sandwich(const SparseOperator& left, const SparseOperator& right) {
  return kron(transposed(right), left);
}

// rate * (2 J rho_bar J' - J'J rho - rho J'J) with the recoil average of rho
// expanded to second order in eta.
SparseOperator jump_channel(const SparseOperator& jump, const SparseOperator& x,
                            double rate, double recoil, int dim) {
  const SparseOperator id = identity(dim);
  const SparseOperator jd = jump.adjoint();
  const SparseOperator jdj = jd * jump;
  const SparseOperator x2 = x * x;
  const SparseOperator jx = jump * x;
  const SparseOperator xjd = x * jd;

  SparseOperator feed = sandwich(jump, jd);
  if (recoil != 0.0) {
    const SparseOperator jx2 = jump * x2;
    const SparseOperator x2jd = x2 * jd;
    SparseOperator kick = sandwich(jx, xjd);
    kick -= 0.5 * sandwich(jx2, jd);
    kick -= 0.5 * sandwich(jump, x2jd);
    feed += recoil * kick;
  }
  SparseOperator out = 2.0 * feed;
  out -= sandwich(jdj, id);
  out -= sandwich(id, jdj);
  return rate * out;
}

double max_row_sum(const SparseOperator& m) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(m.rows());
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseOperator::InnerIterator it(m, k); it; ++it) rows(it.row()) += std::abs(it.value());
  }
  return rows.maxCoeff();
}

std::string describe(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

}  // namespace

DressedOperators dressed_operators(const PhysicalParams& p, int n_max) {
  validate(p);
  if (n_max < 2) throw Error(ErrorKind::kInvalidParams, "n_max must be >= 2");
  const DressedFrame f = dressed_frame(p);
  const int levels = n_max + 1;
  const SparseOperator b = annihilation(levels);
  const SparseOperator bd = b.adjoint();
  const SparseOperator x = b + bd;
  const SparseOperator number = bd * b;
  const SparseOperator id_atom = identity(2);
  const SparseOperator id_mode = identity(levels);

  DressedOperators ops;
  ops.r_z = kron(atom_operator(-1.0, 0.0, 0.0, 1.0), id_mode);
  ops.r_plus = kron(atom_operator(0.0, 0.0, 1.0, 0.0), id_mode);
  ops.r_minus = kron(atom_operator(0.0, 1.0, 0.0, 0.0), id_mode);
  ops.position = kron(id_atom, x);

  const Complex coupling{0.0, p.eta * p.omega};
  SparseOperator h = p.nu * kron(id_atom, number);
  h += f.omega_bar * ops.r_z;
  SparseOperator drive = ops.r_plus - ops.r_minus;
  h += coupling * SparseOperator(drive * ops.position);
  h.prune(Complex(0.0));
  ops.hamiltonian = h;
  return ops;
}

Liouvillian::Liouvillian(PhysicalParams params, int n_max, SparseOperator generator)
    : params_(params), n_max_(n_max), generator_(std::move(generator)) {
  generator_.makeCompressed();
}

Eigen::VectorXcd Liouvillian::apply(const Eigen::VectorXcd& vec_rho) const {
  return generator_ * vec_rho;
}

DensityMatrix Liouvillian::apply(const DensityMatrix& rho) const {
  return DensityMatrix::from_vectorized(n_max_, apply(rho.vectorized()));
}

double Liouvillian::trace_defect() const {
  const int d = dim();
  double worst = 0.0;
  for (int k = 0; k < generator_.outerSize(); ++k) {
    Complex sum = 0.0;
    for (SparseOperator::InnerIterator it(generator_, k); it; ++it) {
      const auto r = it.row();
      if (r % (d + 1) == 0) sum += it.value();
    }
    worst = std::max(worst, std::abs(sum));
  }
  return worst;
}

double Liouvillian::row_sum_norm() const { return max_row_sum(generator_); }

Liouvillian build_liouvillian(const PhysicalParams& p, int n_max, int max_dim) {
  validate(p);
  if (n_max < 2) throw Error(ErrorKind::kInvalidParams, "n_max must be >= 2");
  const int d = 2 * (n_max + 1);
  if (d > max_dim) {
    throw Error(ErrorKind::kDimensionOverflow,
                "Hilbert dimension " + std::to_string(d) + " exceeds cap " +
                    std::to_string(max_dim) + " (n_max=" + std::to_string(n_max) + ")");
  }
  const DressedFrame f = dressed_frame(p);
  const DressedOperators ops = dressed_operators(p, n_max);
  const SparseOperator id = identity(d);
  const double recoil = kRecoilMoment * p.eta * p.eta;

  SparseOperator gen = Complex(0.0, -1.0) * sandwich(ops.hamiltonian, id);
  gen += Complex(0.0, 1.0) * sandwich(id, ops.hamiltonian);

  const double dephase = 0.25 * p.gamma_zero * f.sin_2theta * f.sin_2theta;
  const double emit = p.gamma_plus * f.cos4_theta();
  const double absorb = p.gamma_minus * f.sin4_theta();
  if (dephase != 0.0) gen += jump_channel(ops.r_z, ops.position, dephase, recoil, d);
  if (emit != 0.0) gen += jump_channel(ops.r_minus, ops.position, emit, recoil, d);
  if (absorb != 0.0) gen += jump_channel(ops.r_plus, ops.position, absorb, recoil, d);
  gen.prune(Complex(0.0));
  return Liouvillian(p, n_max, gen);
}

// ---------------------------------------------------------------------------

OracleSample observe(double t, const DensityMatrix& rho, bool with_eigenvalues) {
  OracleSample s;
  s.t = t;
  s.trace = rho.trace();
  s.phonon_number = rho.phonon_number();
  s.rz = rho.rz();
  s.rplus = rho.rplus();
  s.tail_mass = rho.tail_mass();
  s.hermiticity_error = rho.hermiticity_error();
  s.min_eigenvalue = with_eigenvalues ? rho.min_eigenvalue()
                                      : std::numeric_limits<double>::quiet_NaN();
  return s;
}

double Evolution::max_trace_error() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, std::abs(s.trace - 1.0));
  return m;
}

double Evolution::max_hermiticity_error() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, s.hermiticity_error);
  return m;
}

double Evolution::min_eigenvalue() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) m = std::min(m, s.min_eigenvalue);
  return m;
}

double Evolution::max_tail_mass() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, s.tail_mass);
  return m;
}

Evolution evolve(const Liouvillian& L, const DensityMatrix& rho0,
                 std::span<const double> times, const EvolveOptions& options) {
  namespace ode = boost::numeric::odeint;
  using State = std::vector<double>;

  check_time_grid(times);
  if (rho0.n_max() != L.n_max()) {
    throw Error(ErrorKind::kInvalidParams, "initial state truncation does not match");
  }
  Evolution out;
  out.n_max = L.n_max();
  if (times.empty()) return out;

  const Eigen::Index n = static_cast<Eigen::Index>(L.dim()) * L.dim();
  State x(2 * n);
  {
    const Eigen::VectorXcd v = rho0.vectorized();
    std::copy_n(reinterpret_cast<const double*>(v.data()), 2 * n, x.begin());
  }

  std::vector<double> grid;
  grid.reserve(times.size() + 1);
  const bool prepend = times.front() > 0.0;
  if (prepend) grid.push_back(0.0);
  grid.insert(grid.end(), times.begin(), times.end());

  const SparseOperator& gen = L.generator();
  auto rhs = [&](const State& in, State& dxdt, double) {
    dxdt.resize(in.size());
    Eigen::Map<const Eigen::VectorXcd> xin(reinterpret_cast<const Complex*>(in.data()), n);
    Eigen::Map<Eigen::VectorXcd> xout(reinterpret_cast<Complex*>(dxdt.data()), n);
    xout.noalias() = gen * xin;
    ++out.rhs_evaluations;
  };

  std::size_t seen = 0;
  auto observer = [&](const State& state, double t) {
    if (prepend && seen++ == 0) return;
    Eigen::Map<const Eigen::VectorXcd> v(reinterpret_cast<const Complex*>(state.data()), n);
    DensityMatrix rho = DensityMatrix::from_vectorized(L.n_max(), v);
    OracleSample s = observe(t, rho, options.track_positivity);
    const double tail = s.tail_mass;
    out.samples.push_back(s);
    if (options.keep_states) out.states.push_back(std::move(rho));
    if (tail > options.tail_limit) {
      throw Error(ErrorKind::kTruncationBreach,
                  "top two Fock levels hold " + describe(tail) + " at t=" + describe(t) +
                      " (limit " + describe(options.tail_limit) + "); raise n_max above " +
                      std::to_string(L.n_max()));
    }
  };

  if (grid.size() == 1) {
    observer(x, grid.front());
    return out;
  }
  // dopri5 amplifies purely oscillatory modes once h |lambda| passes ~0.95 (up to
  // the edge of its stability region near 3.3). Weakly damped coherences then
  // grow out of roundoff, which shows first as a non-Hermitian part. Keep h
  // times the row-sum bound on |lambda| inside the contractive segment.
  double max_step = options.max_step;
  if (!(max_step > 0.0)) {
    const double bound = L.row_sum_norm();
    max_step = bound > 0.0 ? kContractiveStep / bound : grid.back() - grid.front();
  }
  auto stepper = ode::make_dense_output(options.abs_tol, options.rel_tol, max_step,
                                        ode::runge_kutta_dopri5<State>());
  const double first_step =
      std::min({options.initial_step, grid[1] - grid[0], max_step});
  ode::integrate_times(stepper, rhs, x, grid.begin(), grid.end(), first_step, observer);
  return out;
}

Evolution evolve(const Liouvillian& L, const DensityMatrix& rho0, double t_end,
                 int samples, const EvolveOptions& options) {
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw Error(ErrorKind::kInvalidGrid, "t_end must be finite and >= 0");
  }
  if (t_end == 0.0) {
    const double zero = 0.0;
    return evolve(L, rho0, std::span<const double>(&zero, 1), options);
  }
  if (samples < 2) throw Error(ErrorKind::kInvalidGrid, "need at least two samples");
  std::vector<double> times(samples);
  for (int i = 0; i < samples; ++i) times[i] = t_end * i / (samples - 1);
  return evolve(L, rho0, times, options);
}

// ---------------------------------------------------------------------------

SteadyState steady_state(const Liouvillian& L, const SteadyStateOptions& options) {
  const int d = L.dim();
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  const SparseOperator& gen = L.generator();

  // Replace the equation for d(rho_00)/dt by Tr rho = 1.
  std::vector<Triplet> t;
  t.reserve(gen.nonZeros() + d);
  for (int k = 0; k < gen.outerSize(); ++k) {
    for (SparseOperator::InnerIterator it(gen, k); it; ++it) {
      if (it.row() != 0) t.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int i = 0; i < d; ++i) t.emplace_back(0, i + d * i, 1.0);
  SparseOperator bordered(n, n);
  bordered.setFromTriplets(t.begin(), t.end());
  bordered.makeCompressed();

  Eigen::SparseLU<SparseOperator, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(bordered);
  lu.factorize(bordered);
  if (lu.info() != Eigen::Success) {
    throw Error(ErrorKind::kNoSteadyState,
                "trace-bordered generator is singular (" + lu.lastErrorMessage() +
                    "); kernel is not one-dimensional");
  }

  // Inverse iteration on (M^H M)^-1 for the smallest singular value of M.
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(n).normalized();
  double growth = 0.0;
  for (int i = 0; i < options.power_iterations; ++i) {
    const Eigen::VectorXcd w = lu.solve(v);
    const Eigen::VectorXcd u = lu.adjoint().solve(w);
    growth = u.norm();
    if (!std::isfinite(growth) || growth == 0.0) break;
    v = u / growth;
  }
  const double sigma_gap =
      std::isfinite(growth) && growth > 0.0 ? 1.0 / std::sqrt(growth) : 0.0;

  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
  rhs(0) = 1.0;
  const Eigen::VectorXcd x = lu.solve(rhs);
  const double sigma_kernel = (gen * x).norm() / x.norm();
  if (!x.allFinite() || sigma_gap <= options.kernel_tol * max_row_sum(bordered)) {
    throw Error(ErrorKind::kNoSteadyState,
                "kernel is not one-dimensional: smallest singular values ~ " +
                    describe(sigma_kernel) + ", " + describe(sigma_gap));
  }

  Eigen::MatrixXcd raw = Eigen::Map<const Eigen::MatrixXcd>(x.data(), d, d);
  Eigen::MatrixXcd herm = 0.5 * (raw + raw.adjoint());
  herm /= herm.trace().real();
  DensityMatrix rho(L.n_max(), std::move(herm));
  const double residual = L.apply(rho.vectorized()).cwiseAbs().maxCoeff();
  if (!(residual < options.residual_tol)) {
    throw Error(ErrorKind::kNoSteadyState,
                "steady-state residual " + describe(residual) + " exceeds " +
                    describe(options.residual_tol));
  }
  return SteadyState{std::move(rho), residual, sigma_kernel, sigma_gap};
}

ConvergedSteadyState converged_steady_state(const PhysicalParams& p,
                                            const ConvergenceOptions& options) {
  if (options.step < 1) throw Error(ErrorKind::kInvalidParams, "n_max step must be >= 1");
  int n_max = options.n_max;
  SteadyState current = steady_state(build_liouvillian(p, n_max, options.max_dim),
                                     options.solver);
  while (true) {
    const int next_n = n_max + options.step;
    if (2 * (next_n + 1) > options.max_dim) {
      throw Error(ErrorKind::kTruncationBreach,
                  "phonon number not converged before the dimension cap (n_max=" +
                      std::to_string(n_max) + ", tail " +
                      describe(current.rho.tail_mass()) + ")");
    }
    SteadyState next =
        steady_state(build_liouvillian(p, next_n, options.max_dim), options.solver);
    const double a = current.rho.phonon_number();
    const double b = next.rho.phonon_number();
    const double change = std::abs(b - a) / std::max(std::abs(b), 1e-300);
    if (change < options.tolerance && current.rho.tail_mass() <= options.tail_limit) {
      return ConvergedSteadyState{std::move(current), n_max, next_n, b, change};
    }
    current = std::move(next);
    n_max = next_n;
  }
}

}  // namespace pccool
