#include "pccool/density_matrix.hpp"

#include <cmath>
#include <string>

#include "pccool/error.hpp"

namespace pccool {

DensityMatrix::DensityMatrix(int n_max, Eigen::MatrixXcd data)
    : n_max_(n_max), data_(std::move(data)) {
  if (n_max_ < 0) throw Error(ErrorKind::kInvalidParams, "n_max must be >= 0");
  if (data_.rows() != dim() || data_.cols() != dim()) {
    throw Error(ErrorKind::kInvalidParams,
                "density matrix must be " + std::to_string(dim()) + "x" +
                    std::to_string(dim()) + " for n_max=" + std::to_string(n_max_));
  }
}

DensityMatrix DensityMatrix::product(const Eigen::Matrix2cd& atom,
                                     const Eigen::MatrixXcd& phonon) {
  const int levels = static_cast<int>(phonon.rows());
  if (levels < 1 || phonon.cols() != levels) {
    throw Error(ErrorKind::kInvalidParams, "phonon state must be square");
  }
  Eigen::MatrixXcd out(2 * levels, 2 * levels);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      out.block(a * levels, b * levels, levels, levels) = atom(a, b) * phonon;
    }
  }
  return DensityMatrix(levels - 1, std::move(out));
}

DensityMatrix DensityMatrix::product(const Eigen::Matrix2cd& atom,
                                     const Eigen::VectorXd& phonon_populations) {
  return product(atom, Eigen::MatrixXcd(
                           phonon_populations.cast<Complex>().asDiagonal()));
}

Eigen::VectorXd DensityMatrix::thermal_populations(int n_max, double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw Error(ErrorKind::kInvalidParams, "thermal mean phonon number must be >= 0");
  }
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n_max + 1);
  if (mean == 0.0) {
    p(0) = 1.0;
    return p;
  }
  const double ratio = mean / (1.0 + mean);
  double weight = 1.0;
  for (int n = 0; n <= n_max; ++n) {
    p(n) = weight;
    weight *= ratio;
  }
  return p / p.sum();
}

Eigen::VectorXd DensityMatrix::fock_populations(int n_max, int level) {
  if (level < 0 || level > n_max) {
    throw Error(ErrorKind::kInvalidParams,
                "Fock level " + std::to_string(level) + " outside 0..n_max");
  }
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n_max + 1);
  p(level) = 1.0;
  return p;
}

Eigen::Matrix2cd DensityMatrix::atom_from_dressed(double rz, Complex rplus) {
  // <R^+> = Tr(|2><1| rho) = rho(1, 2) in the 0-based (|1>, |2>) ordering.
  Eigen::Matrix2cd a;
  a(0, 0) = 0.5 * (1.0 - rz);
  a(1, 1) = 0.5 * (1.0 + rz);
  a(0, 1) = rplus;
  a(1, 0) = std::conj(rplus);
  return a;
}

Eigen::Matrix2cd DensityMatrix::atom_from_bare(double sz, Complex splus,
                                               const DressedFrame& frame) {
  Eigen::Matrix2cd bare;
  bare(0, 0) = 0.5 - sz;
  bare(1, 1) = 0.5 + sz;
  bare(0, 1) = splus;
  bare(1, 0) = std::conj(splus);
  // Columns are |1bar> = c|1> - s|2> and |2bar> = s|1> + c|2>.
  const double c = std::sqrt(frame.cos2_theta);
  const double s = std::sqrt(frame.sin2_theta);
  Eigen::Matrix2cd u;
  u << c, s, -s, c;
  return u.adjoint() * bare * u;
}

DensityMatrix DensityMatrix::from_vectorized(int n_max, const Eigen::VectorXcd& v) {
  const int d = 2 * (n_max + 1);
  if (v.size() != static_cast<Eigen::Index>(d) * d) {
    throw Error(ErrorKind::kInvalidParams, "vectorized state has the wrong length");
  }
  return DensityMatrix(n_max, Eigen::Map<const Eigen::MatrixXcd>(v.data(), d, d));
}

Eigen::VectorXcd DensityMatrix::vectorized() const {
  return Eigen::Map<const Eigen::VectorXcd>(data_.data(), data_.size());
}

double DensityMatrix::trace() const { return data_.trace().real(); }

double DensityMatrix::phonon_number() const {
  const int m = levels();
  double n = 0.0;
  for (int k = 0; k < m; ++k) {
    n += k * (data_(k, k).real() + data_(m + k, m + k).real());
  }
  return n;
}

double DensityMatrix::r11() const {
  return data_.topLeftCorner(levels(), levels()).trace().real();
}

double DensityMatrix::r22() const {
  return data_.bottomRightCorner(levels(), levels()).trace().real();
}

double DensityMatrix::rz() const { return r22() - r11(); }

Complex DensityMatrix::rplus() const {
  return data_.topRightCorner(levels(), levels()).trace();
}

Eigen::VectorXd DensityMatrix::phonon_populations() const {
  const int m = levels();
  Eigen::VectorXd p(m);
  for (int k = 0; k < m; ++k) p(k) = data_(k, k).real() + data_(m + k, m + k).real();
  return p;
}

double DensityMatrix::tail_mass() const {
  const Eigen::VectorXd p = phonon_populations();
  const int m = levels();
  return m >= 2 ? p(m - 1) + p(m - 2) : p(m - 1);
}

double DensityMatrix::hermiticity_error() const {
  return (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const Eigen::MatrixXcd h = 0.5 * (data_ + data_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace pccool
