#pragma once

#include <stdexcept>
#include <string>

namespace qwpcn {

/// Fock-space truncation cannot represent the requested state to the
/// required fidelity; increase n_cut or loosen the tolerance.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double deficit)
      : std::runtime_error(what), deficit_(deficit) {}
  double deficit() const noexcept { return deficit_; }

 private:
  double deficit_ = 0.0;
};

/// An iterative routine exhausted its budget without meeting tolerance.
class ConvergenceError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Requested error backend does not apply to the given (M, N_a).
class BackendMismatch : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Golden-section refinement found the objective below both bracket ends,
/// i.e. the assumed unimodal structure does not hold on this bracket.
class BracketError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qwpcn
