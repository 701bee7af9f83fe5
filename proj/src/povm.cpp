#include "qwpcn/povm.hpp"

#include <string>

#include "qwpcn/errors.hpp"

namespace qwpcn {

Povm::Povm(std::vector<ComplexMatrix> elements, double completeness_tol)
    : elements_(std::move(elements)) {
  if (elements_.empty()) {
    throw std::invalid_argument("POVM needs at least one element");
  }
  const Eigen::Index d = elements_.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (auto& e : elements_) {
    if (e.rows() != d || e.cols() != d) {
      throw DimensionMismatch("POVM elements must share one dimension");
    }
    const double scale = std::max(1.0, e.cwiseAbs().maxCoeff());
    const double herm_dev = (e - e.adjoint()).cwiseAbs().maxCoeff();
    if (!(herm_dev <= kHermitianTol * scale)) {
      throw std::invalid_argument("POVM element not Hermitian: deviation " +
                                  std::to_string(herm_dev));
    }
    e = ((e + e.adjoint()) / 2.0).eval();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(e,
                                                    Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPsdTol) {
      throw std::invalid_argument(
          "POVM element not PSD: min eigenvalue " +
          std::to_string(es.eigenvalues().minCoeff()));
    }
    sum += e;
  }
  const double dev =
      (sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (!(dev <= completeness_tol)) {
    throw std::invalid_argument("POVM does not resolve identity: |sum - I| = " +
                                std::to_string(dev));
  }
}

}  // namespace qwpcn
