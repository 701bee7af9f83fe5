#include "qwpcn/binary_helstrom.hpp"

#include <cmath>

#include "qwpcn/errors.hpp"

namespace qwpcn {

BinaryDiscriminationResult helstrom_binary(const DensityOperator& rho0,
                                           const DensityOperator& rho1) {
  if (rho0.dim() != rho1.dim()) {
    throw DimensionMismatch("helstrom_binary: state dimensions differ");
  }
  const Eigen::Index d = rho0.dim();
  HermitianOperator delta(rho1.matrix() - rho0.matrix());
  EigenDecomposition ed = hermitian_eig(delta);

  double positive_sum = 0.0;
  // positive eigenspace of rho1 - rho0 is where hypothesis 1 dominates, so
  // it forms the element that answers "1"; zero modes go to the other side
  ComplexMatrix pi1 = ComplexMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (ed.eigenvalues(i) > kEigenvalueCutoff) {
      positive_sum += ed.eigenvalues(i);
      pi1 += ed.eigenvectors.col(i) * ed.eigenvectors.col(i).adjoint();
    }
  }

  ComplexMatrix pi0 = ComplexMatrix::Identity(d, d) - pi1;
  return BinaryDiscriminationResult{
      0.5 * (1.0 - positive_sum),
      Povm({std::move(pi0), std::move(pi1)}),
      positive_sum};
}

double helstrom_bpsk_noiseless(double alpha) {
  if (alpha < 0.0) {
    throw std::domain_error("mean photon number alpha must be >= 0");
  }
  const double x = std::exp(-4.0 * alpha);  // |<mu|-mu>|^2
  // (1 - sqrt(1-x))/2 rewritten as x / (2 (1 + sqrt(1-x)))
  return x / (2.0 * (1.0 + std::sqrt(1.0 - x)));
}

}  // namespace qwpcn
