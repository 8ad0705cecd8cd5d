#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "pccool/analytic.hpp"
#include "pccool/density_matrix.hpp"
#include "pccool/error.hpp"
#include "pccool/lindblad.hpp"
#include "support.hpp"

using namespace pccool;
using pccool::testing::fig1_resonance;
using pccool::testing::fig2_point;
using pccool::testing::ParamGenerator;
using pccool::testing::rel_err;

namespace {

Eigen::MatrixXcd random_density(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = {g(rng), g(rng)};
  Eigen::MatrixXcd rho = a * a.adjoint();
  return rho / rho.trace().real();
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::kInvalidConfig;
}

}  // namespace

TEST_CASE("density matrix construction and observables") {
  const int n_max = 6;
  const auto pops = DensityMatrix::thermal_populations(n_max, 1.0);
  CHECK(pops.sum() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pops(1) / pops(0) == doctest::Approx(0.5));

  const auto atom = DensityMatrix::atom_from_dressed(-0.4, {0.1, 0.2});
  const auto rho = DensityMatrix::product(atom, DensityMatrix::fock_populations(n_max, 3));
  CHECK(rho.trace() == doctest::Approx(1.0));
  CHECK(rho.rz() == doctest::Approx(-0.4));
  CHECK(rho.rplus().real() == doctest::Approx(0.1));
  CHECK(rho.rplus().imag() == doctest::Approx(0.2));
  CHECK(rho.phonon_number() == doctest::Approx(3.0));
  CHECK(rho.r11() == doctest::Approx(0.7));
  CHECK(rho.tail_mass() == 0.0);
  CHECK(rho.hermiticity_error() == 0.0);
  CHECK(rho.min_eigenvalue() >= -1e-15);

  const auto edge = DensityMatrix::product(atom, DensityMatrix::fock_populations(n_max, n_max));
  CHECK(edge.tail_mass() == doctest::Approx(1.0));

  const auto v = rho.vectorized();
  const auto back = DensityMatrix::from_vectorized(n_max, v);
  CHECK((back.matrix() - rho.matrix()).norm() == 0.0);
  CHECK(v(1) == rho.matrix()(1, 0));  // column stacking

  CHECK_THROWS_AS(DensityMatrix(n_max, Eigen::MatrixXcd::Identity(3, 3)), Error);
}

TEST_CASE("bare and dressed initial atoms agree") {
  ParamGenerator gen(21);
  for (int i = 0; i < 200; ++i) {
    const PhysicalParams p = gen();
    const auto f = dressed_frame(p);
    const double theta = gen.uniform(0, M_PI);
    const double phi = gen.uniform(0, 2 * M_PI);
    const double sz = 0.5 * std::cos(theta);
    const Complex splus = 0.5 * std::sin(theta) * std::polar(1.0, phi);
    const auto atom = DensityMatrix::atom_from_bare(sz, splus, f);
    const auto rho = DensityMatrix::product(atom, DensityMatrix::fock_populations(2, 0));
    const auto d = to_dressed({sz, splus, std::conj(splus), 0.0}, f);
    CHECK(rho.rz() == doctest::Approx(d.rz0).epsilon(1e-12).scale(1));
    CHECK(std::abs(rho.rplus() - d.rplus0) < 1e-12);
    CHECK(rho.min_eigenvalue() > -1e-12);  // pure state stays physical
  }
}

TEST_CASE("dressed operators") {
  const auto ops = dressed_operators(fig1_resonance(), 5);
  const Eigen::MatrixXcd h(ops.hamiltonian);
  CHECK((h - h.adjoint()).norm() < 1e-14);
  const Eigen::MatrixXcd rp(ops.r_plus), rm(ops.r_minus), rz(ops.r_z);
  CHECK((rp.adjoint() - rm).norm() == 0.0);
  CHECK((rp * rm - rm * rp - rz).norm() < 1e-14);  // [R+, R-] = R_z
  // Diagonal: omega_bar R_z + nu n with the lower dressed level first.
  CHECK(h(0, 0).real() == doctest::Approx(-6.0));
  CHECK(h(6, 6).real() == doctest::Approx(6.0));
  CHECK(h(1, 1).real() == doctest::Approx(-6.0 + 12.0));
}

TEST_CASE("generator preserves trace and Hermiticity") {
  ParamGenerator gen(22);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    const PhysicalParams p = gen();
    const auto L = build_liouvillian(p, 5);
    CHECK(L.trace_defect() < 1e-12);
    const DensityMatrix mixed(5, Eigen::MatrixXcd::Identity(12, 12) / 12.0);
    CHECK(std::abs(L.apply(mixed).matrix().trace()) < 1e-12);
    const DensityMatrix rho(5, random_density(12, rng));
    const auto d = L.apply(rho).matrix();
    CHECK(std::abs(d.trace()) < 1e-12);
    CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("zero coupling decouples the Fock sectors") {
  PhysicalParams p = fig1_resonance();
  p.eta = 0.0;
  const int n_max = 4;
  const auto L = build_liouvillian(p, n_max);
  const int levels = n_max + 1;
  const int dim = 2 * levels;
  const auto& g = L.generator();
  for (int k = 0; k < g.outerSize(); ++k) {
    for (SparseOperator::InnerIterator it(g, k); it; ++it) {
      const int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
      // vec index i + D j -> Fock labels of rho(i, j)
      const int rn = (r % dim) % levels, rm = (r / dim) % levels;
      const int cn = (c % dim) % levels, cm = (c / dim) % levels;
      CHECK(rn == cn);
      CHECK(rm == cm);
    }
  }
}

TEST_CASE("Hamiltonian part has a purely imaginary spectrum") {
  // The generator is affine in the three rates, so the rate-free part is
  // 2 L(gamma) - L(2 gamma).
  const PhysicalParams one{5, 2, 7, 0.1, 1, 1, 1};
  PhysicalParams two = one;
  two.gamma_plus = two.gamma_minus = two.gamma_zero = 2;
  const int n_max = 4;
  const Eigen::MatrixXcd h =
      2.0 * build_liouvillian(one, n_max).dense() - build_liouvillian(two, n_max).dense();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(h);
  REQUIRE(es.info() == Eigen::Success);
  CHECK(es.eigenvalues().real().cwiseAbs().maxCoeff() < 1e-10);
  // ... and it is -i[H, .] with the dressed Hamiltonian.
  const Eigen::MatrixXcd H(dressed_operators(one, n_max).hamiltonian);
  std::mt19937_64 rng(9);
  const Eigen::MatrixXcd rho = random_density(H.rows(), rng);
  const Eigen::MatrixXcd expected = Complex(0, -1) * (H * rho - rho * H);
  const Eigen::VectorXcd got = h * Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
  CHECK((Eigen::Map<const Eigen::MatrixXcd>(got.data(), H.rows(), H.cols()) - expected).norm() <
        1e-10);
}

TEST_CASE("build limits") {
  CHECK_NOTHROW(build_liouvillian(fig1_resonance(), 63, 128));
  CHECK(kind_of([] { build_liouvillian(fig1_resonance(), 64); }) ==
        ErrorKind::kDimensionOverflow);
  CHECK(kind_of([] { build_liouvillian(fig1_resonance(), 1); }) == ErrorKind::kInvalidParams);
  CHECK(kind_of([] { build_liouvillian({-1, 0, 1, 0, 1, 1, 1}, 4); }) ==
        ErrorKind::kInvalidParams);
}

TEST_CASE("steady state matches independent reference values") {
  // Dense NumPy solve of the same master equation at n_max = 12.
  struct Case {
    PhysicalParams p;
    double n;
    double r11;
  };
  const Case cases[] = {
      {fig1_resonance(), 0.10871397102898639, 0.9199462143081488},
      {{5, -5, 11.18, 0.1, 1, 0.05, 0.05}, 0.5455746858905152, 0.7414404727792833},
      {{4, -3, 8, 0.07, 1, 0.1, 0.3}, 0.8183693990046246, 0.6942837830493012},
      {fig2_point(), 2.780405569383719, 0.8168633032779408},
  };
  for (const auto& c : cases) {
    const auto s = steady_state(build_liouvillian(c.p, 12));
    CHECK(rel_err(s.rho.phonon_number(), c.n) < 1e-8);
    CHECK(rel_err(s.rho.r11(), c.r11) < 1e-8);
    CHECK(s.residual_inf < 1e-10);
    CHECK(s.rho.trace() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.rho.hermiticity_error() < 1e-12);
    CHECK(s.rho.min_eigenvalue() > -1e-10);
  }
}

TEST_CASE("steady state against the closed form") {
  SUBCASE("free-space resonance point within 15%") {
    const auto s = steady_state(build_liouvillian(fig1_resonance(), 12));
    const double ns = std::get<double>(steady_phonon(fig1_resonance()));
    CHECK(ns == doctest::Approx(0.0973).epsilon(1e-3));
    CHECK(rel_err(s.rho.phonon_number(), ns) < 0.15);
    CHECK(rel_err(s.rho.r11(), steady_atom(fig1_resonance()).r11) < 0.05);
  }
  SUBCASE("resonant drive with nu = 2 is outside the closed form's reach") {
    // Counter-rotating sidebands at 2 omega_bar + nu = 12 are almost as
    // strong as the co-rotating one at 8; the oracle keeps them, the closed
    // form drops them, and the two disagree by a factor of four.
    const double ns = std::get<double>(steady_phonon(fig2_point()));
    const double oracle = steady_state(build_liouvillian(fig2_point(), 16)).rho.phonon_number();
    CHECK(rel_err(oracle, 3.16245200964381) < 1e-8);
    CHECK(oracle > 3.0 * ns);
    CHECK_FALSE(validity_report(fig2_point()).find("counter_rotating")->ok);
    // The estimate that keeps the counter-rotating terms moves toward the oracle.
    const double cr = std::get<double>(counter_rotating_phonon_estimate(fig2_point()));
    CHECK(std::abs(cr - oracle) < std::abs(ns - oracle));
  }
}

TEST_CASE("steady state needs a coupled mode") {
  PhysicalParams p{5, 0, 12, 0.0, 1, 1, 1};
  CHECK(kind_of([&] { steady_state(build_liouvillian(p, 6)); }) == ErrorKind::kNoSteadyState);
}

TEST_CASE("convergence escalation") {
  const auto conv = converged_steady_state(fig1_resonance());
  CHECK(conv.n_max == 12);
  CHECK(conv.n_max_check == 16);
  CHECK(conv.relative_change < 1e-4);

  // A hot stationary state cannot fit under a small cap.
  const PhysicalParams hot{5, 8.9, 12, 0.1, 1, 1, 1};
  ConvergenceOptions tight;
  tight.max_dim = 30;
  CHECK(kind_of([&] { converged_steady_state(hot, tight); }) == ErrorKind::kTruncationBreach);
}

TEST_CASE("evolution basics") {
  const auto L = build_liouvillian(fig1_resonance(), 8);
  const auto rho0 = DensityMatrix::product(DensityMatrix::atom_from_dressed(-1, 0),
                                           DensityMatrix::fock_populations(8, 1));
  SUBCASE("t_end = 0 returns the initial state") {
    EvolveOptions o;
    o.keep_states = true;
    const auto ev = evolve(L, rho0, 0.0, 1, o);
    REQUIRE(ev.states.size() == 1);
    CHECK((ev.states[0].matrix() - rho0.matrix()).norm() == 0.0);
    CHECK(ev.samples[0].phonon_number == doctest::Approx(1.0));
  }
  SUBCASE("hygiene along a trajectory") {
    const auto ev = evolve(L, rho0, 10.0, 21);
    CHECK(ev.samples.size() == 21);
    CHECK(ev.max_trace_error() < 1e-8);
    CHECK(ev.max_hermiticity_error() < 1e-10);
    CHECK(ev.min_eigenvalue() > -1e-10);
    CHECK(ev.samples.back().phonon_number < 1.0);
  }
  SUBCASE("relaxes to the stationary state") {
    const auto s = steady_state(L);
    EvolveOptions o;
    o.keep_states = true;
    o.track_positivity = false;
    const std::vector<double> times{0.0, 120.0};
    const auto ev = evolve(L, rho0, times, o);
    CHECK((ev.states.back().matrix() - s.rho.matrix()).cwiseAbs().maxCoeff() < 1e-7);
  }
  SUBCASE("bad grids and truncation") {
    const std::vector<double> bad{0.0, 1.0, 0.5};
    CHECK(kind_of([&] { evolve(L, rho0, bad); }) == ErrorKind::kInvalidGrid);
    const auto edge = DensityMatrix::product(DensityMatrix::atom_from_dressed(-1, 0),
                                             DensityMatrix::fock_populations(8, 7));
    CHECK(kind_of([&] { evolve(L, edge, 1.0, 3); }) == ErrorKind::kTruncationBreach);
  }
}

TEST_CASE("zero coupling: atom relaxes, mode untouched") {
  const PhysicalParams p{5, 3, 12, 0.0, 1, 0.4, 0.7};
  const int n_max = 6;
  const auto L = build_liouvillian(p, n_max);
  const auto pops = DensityMatrix::thermal_populations(n_max, 0.8);
  const auto rho0 = DensityMatrix::product(DensityMatrix::atom_from_dressed(-1, 0), pops);
  EvolveOptions o;
  o.keep_states = true;
  o.tail_limit = 1.0;  // the mode never moves, so truncation is irrelevant
  const auto ev = evolve(L, rho0, 40.0, 5, o);
  const auto& last = ev.states.back();
  CHECK((last.phonon_populations() - pops).cwiseAbs().maxCoeff() < 1e-9);
  const auto a = steady_atom(p);
  CHECK(last.r11() == doctest::Approx(a.r11).epsilon(1e-7));
  // Inversion follows (rz0 - rz_s) exp(-2 gamma_s t) + rz_s.
  const double gs = rate_set(p).gamma_s;
  for (const auto& s : ev.samples) {
    CHECK(s.rz == doctest::Approx(a.rz + (-1 - a.rz) * std::exp(-2 * gs * s.t)).epsilon(1e-7));
  }
}

TEST_CASE("symmetric reservoir at resonance: maximally mixed atom") {
  const PhysicalParams p{5, 0, 12, 0.0, 1, 1, 1};
  const auto L = build_liouvillian(p, 4);
  const auto rho0 = DensityMatrix::product(DensityMatrix::atom_from_dressed(1, 0),
                                           DensityMatrix::fock_populations(4, 0));
  EvolveOptions o;
  o.keep_states = true;
  const auto ev = evolve(L, rho0, 30.0, 2, o);
  CHECK(ev.states.back().r11() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::abs(ev.states.back().rplus()) < 1e-9);
}

TEST_CASE("default step respects the contractive cap") {
  const auto L = build_liouvillian(fig1_resonance(), 8);
  const auto rho0 = DensityMatrix::product(DensityMatrix::atom_from_dressed(-1, 0),
                                           DensityMatrix::fock_populations(8, 1));
  EvolveOptions o;
  o.track_positivity = false;
  o.rel_tol = 1e-5;
  o.abs_tol = 1e-7;
  const double t_end = 2.0;
  const auto ev = evolve(L, rho0, t_end, 2, o);
  // dopri5 with FSAL spends six evaluations per accepted step.
  const double min_steps = t_end * L.row_sum_norm() / 0.9;
  CHECK(static_cast<double>(ev.rhs_evaluations) >= 6.0 * std::floor(min_steps));

  o.max_step = 10.0;
  const auto free = evolve(L, rho0, t_end, 2, o);
  CHECK(free.rhs_evaluations < ev.rhs_evaluations);
  CHECK(free.samples.back().phonon_number ==
        doctest::Approx(ev.samples.back().phonon_number).epsilon(1e-3));
}
