#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qwpcn {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kDefaultTruncTol = 1e-8;

/// Dense complex matrix constrained to equal its conjugate transpose
/// within kHermitianTol relative to the largest entry magnitude.
class HermitianOperator {
 public:
  explicit HermitianOperator(ComplexMatrix m);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

  double trace() const { return m_.trace().real(); }

 private:
  ComplexMatrix m_;
};

/// Unit-trace PSD operator. `trunc_error` records the trace deficit lost to
/// the Fock cutoff; the matrix is deliberately NOT renormalized, so an
/// undersized n_cut stays visible instead of being papered over.
class DensityOperator {
 public:
  DensityOperator(HermitianOperator op, double trunc_error,
                  double trace_tol = kDefaultTruncTol);

  const HermitianOperator& op() const noexcept { return op_; }
  const ComplexMatrix& matrix() const noexcept { return op_.matrix(); }
  Eigen::Index dim() const noexcept { return op_.dim(); }
  double trunc_error() const noexcept { return trunc_error_; }

 private:
  HermitianOperator op_;
  double trunc_error_ = 0.0;
};

/// Spectrum of a Hermitian operator, eigenvalues sorted descending,
/// eigenvectors stored as the matching columns.
struct EigenDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

/// Coherent state |mu> in the n_cut-dimensional Fock basis,
/// amplitudes e^{-|mu|^2/2} mu^n / sqrt(n!) assembled in log domain.
/// Throws TruncationError when the Poisson tail beyond n_cut exceeds
/// eps_trunc.
StateVector make_coherent_state(Complex mu, int n_cut,
                                double eps_trunc = kDefaultTruncTol);

/// Displaced thermal state with mean thermal occupation n_a.
/// n_a below 1e-9 dispatches to the pure projector |mu><mu|; the closed
/// form divides by n_a and loses all precision in that regime.
DensityOperator thermal_displaced_rho(Complex mu, double n_a, int n_cut,
                                      double eps_trunc = kDefaultTruncTol);

/// Full spectral decomposition; eigenvalues descending.
EigenDecomposition hermitian_eig(const HermitianOperator& a);

/// Pseudo-inverse square root of a PSD operator: eigenvalues above
/// rank_tol map to 1/sqrt(lambda), the rest to zero.
HermitianOperator matrix_sqrt_inv(const HermitianOperator& a, double rank_tol);

}  // namespace qwpcn
