#pragma once

#include "qwpcn/fock.hpp"
#include "qwpcn/povm.hpp"

namespace qwpcn {

/// Eigenvalues of Delta = rho1 - rho0 above this cutoff count as positive;
/// zero modes land in Pi_1 (the non-positive eigenspace).
inline constexpr double kEigenvalueCutoff = 1e-12;

struct BinaryDiscriminationResult {
  double p_error;
  Povm povm;
  /// Sum of the positive eigenvalues of Delta; kept separate so the
  /// identity p_error = (1 - positive_eigensum)/2 stays checkable.
  double positive_eigensum;
};

/// Minimum-error discrimination of two equally likely states: diagonalize
/// Delta = rho1 - rho0, sum its positive eigenvalues, and project onto the
/// positive / non-positive eigenspaces for the measurement.
BinaryDiscriminationResult helstrom_binary(const DensityOperator& rho0,
                                           const DensityOperator& rho1);

/// Closed form for noiseless BPSK, alpha = |mu|^2:
/// (1 - sqrt(1 - e^{-4 alpha})) / 2, evaluated in a cancellation-free form
/// so the deep-tail values (~e^{-4 alpha}/4) survive.
double helstrom_bpsk_noiseless(double alpha);

}  // namespace qwpcn
