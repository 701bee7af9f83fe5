#pragma once

#include <vector>

#include "qwpcn/fock.hpp"
#include "qwpcn/povm.hpp"

namespace qwpcn {

/// Ensemble to discriminate: M states with prior probabilities summing to 1.
class DiscriminationProblem {
 public:
  DiscriminationProblem(std::vector<DensityOperator> states,
                        std::vector<double> priors);

  /// The paper's setting: every state weighted 1/M.
  static DiscriminationProblem with_equal_priors(
      std::vector<DensityOperator> states);

  int size() const noexcept { return static_cast<int>(states_.size()); }
  Eigen::Index dim() const noexcept { return states_.front().dim(); }
  const std::vector<DensityOperator>& states() const noexcept {
    return states_;
  }
  const std::vector<double>& priors() const noexcept { return priors_; }

 private:
  std::vector<DensityOperator> states_;
  std::vector<double> priors_;
};

struct SolverOptions {
  /// Budget for the damped fixed-point phase.
  int max_iterations = 5000;
  /// Convergence is declared on the Holevo dual residual, nothing else.
  double cert_tol = 1e-7;
  double theta_start = 1.0;
  /// Budget for the splitting rescue that takes over when the fixed-point
  /// map stalls at a suboptimal attractor (rare, but it happens: the map
  /// contracts near-tie eigendirections at rate ~(1 - |eta|)).
  int splitting_max_iterations = 20000;
  /// Proximal step of the rescue; 0 picks max(1, M).
  double splitting_step = 0.0;
  /// Parallelize the per-state products inside one solve. Reductions stay
  /// fixed-order, so results are identical either way.
  bool parallel = true;
  /// Store the objective after each accepted fixed-point step.
  bool record_objective = false;
};

struct SolverReport {
  double p_error;
  Povm povm;
  int iterations;
  double certificate_residual;
  bool converged;
  std::vector<double> objective_history;
};

/// Minimum-error POVM for the ensemble: fixed-point iteration
/// Pi_i <- T (p_i rho_i) Pi_i (p_i rho_i) T with T the inverse square root
/// of the sum, damped so the objective never increases, certified by the
/// Holevo conditions. Returns converged=false (never throws) when both the
/// fixed point and the splitting rescue exhaust their budgets above
/// cert_tol.
SolverReport solve_min_error_povm(const DiscriminationProblem& problem,
                                  const SolverOptions& options = {});

/// Average error probability sum_i p_i Tr((I - Pi_i) rho_i).
double evaluate_error(const DiscriminationProblem& problem, const Povm& povm);

/// Holevo dual residual: with Y = sum_i p_i rho_i Pi_i, the larger of the
/// non-Hermiticity of Y and the worst negative eigenvalue of
/// (Y + Y^dag)/2 - p_i rho_i. Zero exactly at the optimal POVM.
double check_optimality_certificate(const DiscriminationProblem& problem,
                                    const Povm& povm);

}  // namespace qwpcn
