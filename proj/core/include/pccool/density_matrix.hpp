#pragma once

#include <complex>

#include <Eigen/Dense>

#include "pccool/params.hpp"

namespace pccool {

using Complex = std::complex<double>;

/// State of the dressed atom and the truncated trap mode. Basis ordering is
/// |dressed level> (x) |Fock n>, dressed levels {|1>, |2>}, Fock 0..n_max, so
/// index = level * (n_max + 1) + n.
class DensityMatrix {
 public:
  DensityMatrix(int n_max, Eigen::MatrixXcd data);

  /// atom (x) phonon. `atom` is in the dressed basis.
  static DensityMatrix product(const Eigen::Matrix2cd& atom,
                               const Eigen::MatrixXcd& phonon);
  static DensityMatrix product(const Eigen::Matrix2cd& atom,
                               const Eigen::VectorXd& phonon_populations);

  /// Thermal occupations with the given mean, cut at n_max and renormalised.
  static Eigen::VectorXd thermal_populations(int n_max, double mean);
  static Eigen::VectorXd fock_populations(int n_max, int level);

  /// Dressed-basis atomic state with the given <R_z> and <R^+>.
  static Eigen::Matrix2cd atom_from_dressed(double rz, Complex rplus);
  /// Dressed-basis atomic state with the given bare <S_z> and <S^+>.
  static Eigen::Matrix2cd atom_from_bare(double sz, Complex splus,
                                         const DressedFrame& frame);

  static DensityMatrix from_vectorized(int n_max, const Eigen::VectorXcd& v);
  Eigen::VectorXcd vectorized() const;

  int n_max() const { return n_max_; }
  int levels() const { return n_max_ + 1; }
  int dim() const { return 2 * (n_max_ + 1); }
  const Eigen::MatrixXcd& matrix() const { return data_; }

  double trace() const;
  double phonon_number() const;
  double r11() const;
  double r22() const;
  double rz() const;
  Complex rplus() const;
  /// Population in the two highest Fock levels.
  double tail_mass() const;
  Eigen::VectorXd phonon_populations() const;

  /// max |rho - rho^dagger|.
  double hermiticity_error() const;
  /// Smallest eigenvalue of the Hermitian part.
  double min_eigenvalue() const;

 private:
  int n_max_;
  Eigen::MatrixXcd data_;
};

}  // namespace pccool
