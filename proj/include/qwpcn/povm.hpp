#pragma once

#include <vector>

#include "qwpcn/fock.hpp"

namespace qwpcn {

/// Ordered list of PSD operators that resolve the identity: sum Pi_i = I
/// within completeness_tol entrywise, each element PSD within kPsdTol.
class Povm {
 public:
  explicit Povm(std::vector<ComplexMatrix> elements,
                double completeness_tol = 1e-8);

  int size() const noexcept { return static_cast<int>(elements_.size()); }
  Eigen::Index dim() const noexcept { return elements_.front().rows(); }
  const ComplexMatrix& element(int i) const { return elements_.at(i); }
  const std::vector<ComplexMatrix>& elements() const noexcept {
    return elements_;
  }

 private:
  std::vector<ComplexMatrix> elements_;
};

}  // namespace qwpcn
