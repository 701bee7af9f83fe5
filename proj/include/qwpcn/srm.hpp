#pragma once

#include <vector>

#include "qwpcn/fock.hpp"
#include "qwpcn/povm.hpp"

namespace qwpcn {

/// Eigenvalues of the M-PSK coherent-state Gram matrix; circulant, so the
/// spectrum is the DFT of the first row gamma_l = exp(-alpha + alpha
/// e^{2 pi i l / M}) and comes out real.
struct GramSpectrum {
  int modulation_order;
  double alpha;
  RealVector eigenvalues;  // indexed by DFT bin k
};

GramSpectrum gram_spectrum(int m, double alpha);

/// Exact square-root-measurement error for noiseless symmetric M-PSK:
/// 1 - ((1/M) sum_k sqrt(lambda_k))^2. The lambda_k are evaluated through
/// the analytically transformed DFT, lambda_k = M e^{-alpha} sum_{j = k mod
/// M} alpha^j / j!, accumulated in log domain. This is identical to the
/// numeric DFT but keeps full relative precision in the tail eigenvalues
/// (the DFT floors them at sqrt(roundoff)) and never overflows at large
/// alpha.
double srm_error_exact(int m, double alpha);

/// Large-M approximation: 1 - (e^{-alpha}/M) (sum_{k<M} sqrt(alpha^k/k!))^2.
/// Valid when M >> alpha; as a working threshold M >= 8 alpha keeps the
/// error under ~1e-3 (checked against srm_error_exact). Outside that regime
/// the value is meaningless - it is still computed, the caller owns the
/// regime check.
double srm_error_large_m(int m, double alpha);

/// Square-root measurement Pi_i = rho^{-1/2} rho_i rho^{-1/2} for pure
/// states, rho = sum_i rho_i unnormalized. Any null space of rho is
/// assigned to element 0, which keeps the POVM complete without touching
/// outcome probabilities.
Povm srm_povm(const std::vector<DensityOperator>& states);

}  // namespace qwpcn
