#include "qwpcn/povm_opt.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "qwpcn/errors.hpp"

namespace qwpcn {

namespace {

using MatrixList = std::vector<ComplexMatrix>;

/// Pseudo-inverse square root with a scale-relative rank cutoff.
ComplexMatrix pinv_sqrt(const ComplexMatrix& s) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s);
  const auto& w = es.eigenvalues();
  const double cutoff = std::max(w.maxCoeff(), 0.0) * 1e-14;
  RealVector inv = RealVector::Zero(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) > cutoff && w(i) > 0.0) inv(i) = 1.0 / std::sqrt(w(i));
  }
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix project_psd(const ComplexMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
      ((a + a.adjoint()) / 2.0).eval());
  RealVector w = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

double min_eigenvalue(const ComplexMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double objective(const MatrixList& weighted, const MatrixList& povm) {
  double success = 0.0;
  for (std::size_t i = 0; i < weighted.size(); ++i) {
    success += (weighted[i] * povm[i]).trace().real();
  }
  return 1.0 - success;
}

double residual(const MatrixList& weighted, const MatrixList& povm,
                bool parallel) {
  const Eigen::Index d = weighted.front().rows();
  const int m = static_cast<int>(weighted.size());
  ComplexMatrix y = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < m; ++i) y += weighted[i] * povm[i];
  const double herm = (y - y.adjoint()).cwiseAbs().maxCoeff();
  const ComplexMatrix ys = (y + y.adjoint()) / 2.0;
  std::vector<double> lmin(m);
#pragma omp parallel for schedule(static) if (parallel && m > 2)
  for (int i = 0; i < m; ++i) {
    lmin[i] = min_eigenvalue(ys - weighted[i]);
  }
  double worst = 0.0;
  for (int i = 0; i < m; ++i) worst = std::max(worst, -lmin[i]);
  return std::max(herm, worst);
}

/// Rescale so the sum is exactly the identity; any numerical null space is
/// spread uniformly (it carries no outcome probability).
MatrixList repair_completeness(const MatrixList& povm) {
  const Eigen::Index d = povm.front().rows();
  const int m = static_cast<int>(povm.size());
  ComplexMatrix s = ComplexMatrix::Zero(d, d);
  for (const auto& p : povm) s += p;
  const ComplexMatrix t = pinv_sqrt(s);
  MatrixList out(m);
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < m; ++i) {
    out[i] = t * povm[i] * t;
    out[i] = ((out[i] + out[i].adjoint()) / 2.0).eval();
    total += out[i];
  }
  const ComplexMatrix gap = (ComplexMatrix::Identity(d, d) - total) /
                            static_cast<double>(m);
  for (auto& p : out) p += gap;
  return out;
}

struct BestIterate {
  MatrixList povm;
  double res = std::numeric_limits<double>::infinity();
  void offer(const MatrixList& candidate, double r) {
    if (r < res) {
      res = r;
      povm = candidate;
    }
  }
};

}  // namespace

DiscriminationProblem::DiscriminationProblem(
    std::vector<DensityOperator> states, std::vector<double> priors)
    : states_(std::move(states)), priors_(std::move(priors)) {
  if (states_.empty()) {
    throw std::invalid_argument("discrimination problem needs states");
  }
  if (states_.size() != priors_.size()) {
    throw DimensionMismatch("states/priors count mismatch");
  }
  const Eigen::Index d = states_.front().dim();
  for (const auto& s : states_) {
    if (s.dim() != d) {
      throw DimensionMismatch("all states must share one dimension");
    }
  }
  double sum = 0.0;
  for (double p : priors_) {
    if (p < 0.0) throw std::domain_error("priors must be non-negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::domain_error("priors must sum to 1, got " +
                            std::to_string(sum));
  }
}

DiscriminationProblem DiscriminationProblem::with_equal_priors(
    std::vector<DensityOperator> states) {
  std::vector<double> priors(states.size(),
                             1.0 / static_cast<double>(states.size()));
  return DiscriminationProblem(std::move(states), std::move(priors));
}

SolverReport solve_min_error_povm(const DiscriminationProblem& problem,
                                  const SolverOptions& options) {
  const int m = problem.size();
  const Eigen::Index d = problem.dim();
  MatrixList weighted(m);
  for (int i = 0; i < m; ++i) {
    weighted[i] = problem.priors()[i] * problem.states()[i].matrix();
  }

  MatrixList povm(m, ComplexMatrix::Identity(d, d) / static_cast<double>(m));
  double obj = objective(weighted, povm);
  double theta = options.theta_start;
  int steps = 0;
  std::vector<double> history;
  if (options.record_objective) history.push_back(obj);

  // candidates are scored after completeness repair: the certificate must
  // describe the POVM we hand back, and the raw iterate's element sum
  // drifts off the identity by enough to matter at tight tolerances
  BestIterate best;
  const auto score = [&](const MatrixList& raw) {
    MatrixList repaired = repair_completeness(raw);
    const double res = residual(weighted, repaired, options.parallel);
    best.offer(std::move(repaired), res);
  };
  score(povm);

  // damped fixed-point phase
  int accepted = 0;
  int last_improvement = 0;
  double plateau_ref = best.res;
  MatrixList products(m);
  while (best.res > options.cert_tol && accepted < options.max_iterations) {
#pragma omp parallel for schedule(static) if (options.parallel && m > 2)
    for (int i = 0; i < m; ++i) {
      products[i] = weighted[i] * povm[i] * weighted[i];
    }
    ComplexMatrix s = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < m; ++i) s += products[i];
    const ComplexMatrix t = pinv_sqrt(s);

    MatrixList candidate(m);
#pragma omp parallel for schedule(static) if (options.parallel && m > 2)
    for (int i = 0; i < m; ++i) {
      ComplexMatrix next = t * products[i] * t;
      if (theta < 1.0) next = (1.0 - theta) * povm[i] + theta * next;
      candidate[i] = ((next + next.adjoint()) / 2.0).eval();
    }

    const double cand_obj = objective(weighted, candidate);
    if (cand_obj > obj + 1e-10) {
      if (theta <= 1.0 / 1024.0) break;  // step budget spent, go rescue
      theta /= 2.0;
      continue;
    }
    povm = std::move(candidate);
    obj = cand_obj;
    ++accepted;
    ++steps;
    if (options.record_objective) history.push_back(obj);

    score(povm);
    if (best.res < 0.98 * plateau_ref) {
      plateau_ref = best.res;
      last_improvement = accepted;
    }
    if (accepted - last_improvement >= 30) break;  // stalled attractor
  }

  // splitting rescue (Douglas-Rachford on the same SDP); globally
  // convergent, so it gets past the fixed-point map's stall
  if (best.res > options.cert_tol && options.splitting_max_iterations > 0) {
    const double tau = options.splitting_step > 0.0
                           ? options.splitting_step
                           : std::max(1.0, static_cast<double>(m));
    MatrixList z = best.povm;
    MatrixList y(m);
    for (int k = 1; k <= options.splitting_max_iterations; ++k) {
#pragma omp parallel for schedule(static) if (options.parallel && m > 2)
      for (int i = 0; i < m; ++i) {
        y[i] = project_psd(z[i] + tau * weighted[i]);
      }
      ComplexMatrix defect = -ComplexMatrix::Identity(d, d);
      for (int i = 0; i < m; ++i) defect += 2.0 * y[i] - z[i];
      defect /= static_cast<double>(m);
      for (int i = 0; i < m; ++i) {
        z[i] += (2.0 * y[i] - z[i] - defect) - y[i];
      }
      ++steps;
      if (k % 25 == 0 || k == options.splitting_max_iterations) {
        score(y);
        if (best.res <= options.cert_tol) break;
      }
    }
  }

  const double final_obj = objective(weighted, best.povm);
  return SolverReport{final_obj,
                      Povm(best.povm),
                      steps,
                      best.res,
                      best.res <= options.cert_tol,
                      std::move(history)};
}

double evaluate_error(const DiscriminationProblem& problem, const Povm& povm) {
  if (povm.dim() != problem.dim() || povm.size() != problem.size()) {
    throw DimensionMismatch("POVM does not match problem shape");
  }
  const Eigen::Index d = problem.dim();
  double err = 0.0;
  for (int i = 0; i < problem.size(); ++i) {
    const ComplexMatrix miss =
        ComplexMatrix::Identity(d, d) - povm.element(i);
    err += problem.priors()[i] *
           (miss * problem.states()[i].matrix()).trace().real();
  }
  return err;
}

double check_optimality_certificate(const DiscriminationProblem& problem,
                                    const Povm& povm) {
  if (povm.dim() != problem.dim() || povm.size() != problem.size()) {
    throw DimensionMismatch("POVM does not match problem shape");
  }
  MatrixList weighted(problem.size());
  for (int i = 0; i < problem.size(); ++i) {
    weighted[i] = problem.priors()[i] * problem.states()[i].matrix();
  }
  return residual(weighted, povm.elements(), /*parallel=*/false);
}

}  // namespace qwpcn
