#include "qwpcn/fock.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qwpcn/errors.hpp"

namespace qwpcn {

namespace {

double max_abs(const ComplexMatrix& m) {
  return m.cwiseAbs().maxCoeff();
}

}  // namespace

HermitianOperator::HermitianOperator(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() < 1 || m_.rows() != m_.cols()) {
    throw DimensionMismatch("HermitianOperator requires a square matrix, got " +
                            std::to_string(m_.rows()) + "x" +
                            std::to_string(m_.cols()));
  }
  const double scale = std::max(1.0, max_abs(m_));
  const double dev = max_abs(m_ - m_.adjoint());
  if (!(dev <= kHermitianTol * scale)) {
    throw std::invalid_argument("matrix is not Hermitian: |A - A^dag| = " +
                                std::to_string(dev));
  }
  // fold residual asymmetry so downstream solvers see an exact Hermitian
  m_ = ((m_ + m_.adjoint()) / 2.0).eval();
}

DensityOperator::DensityOperator(HermitianOperator op, double trunc_error,
                                 double trace_tol)
    : op_(std::move(op)), trunc_error_(trunc_error) {
  const double tr = op_.trace();
  if (!(std::abs(tr - 1.0) <= trace_tol)) {
    throw TruncationError("density operator trace " + std::to_string(tr) +
                              " outside unit window (tol " +
                              std::to_string(trace_tol) + ")",
                          std::abs(tr - 1.0));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(op_.matrix(),
                                                  Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw ConvergenceError("eigenvalue check failed for density operator");
  }
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin < -kPsdTol) {
    throw std::invalid_argument("density operator not PSD: min eigenvalue " +
                                std::to_string(lmin));
  }
}

StateVector make_coherent_state(Complex mu, int n_cut, double eps_trunc) {
  if (n_cut < 1) throw std::domain_error("n_cut must be >= 1");
  StateVector v = StateVector::Zero(n_cut);
  const double a = std::norm(mu);  // mean photon number |mu|^2
  if (a == 0.0) {
    v(0) = 1.0;
    return v;
  }
  const double log_abs_mu = std::log(std::abs(mu));
  const double phase = std::arg(mu);
  double norm2 = 0.0;
  for (int n = 0; n < n_cut; ++n) {
    const double lm = -a / 2.0 + n * log_abs_mu - 0.5 * std::lgamma(n + 1.0);
    v(n) = std::polar(std::exp(lm), n * phase);
    norm2 += std::exp(2.0 * lm);
  }
  const double loss = 1.0 - norm2;
  if (!(loss <= eps_trunc)) {
    throw TruncationError("coherent state |mu|^2=" + std::to_string(a) +
                              " loses " + std::to_string(loss) +
                              " past n_cut=" + std::to_string(n_cut),
                          loss);
  }
  return v;
}

DensityOperator thermal_displaced_rho(Complex mu, double n_a, int n_cut,
                                      double eps_trunc) {
  if (n_a < 0.0) throw std::domain_error("thermal occupation n_a must be >= 0");
  if (n_cut < 1) throw std::domain_error("n_cut must be >= 1");

  if (n_a < 1e-9) {
    // exact limit of the closed form; the (.)/n_a factors cancel only
    // analytically, so evaluate the projector directly
    StateVector v = make_coherent_state(mu, n_cut, eps_trunc);
    ComplexMatrix proj = v * v.adjoint();
    const double deficit = 1.0 - proj.trace().real();
    return DensityOperator(HermitianOperator(std::move(proj)), deficit,
                           eps_trunc);
  }

  const double a = std::norm(mu);
  const double log_np1 = std::log1p(n_a);
  const double log_pref = -a / (n_a + 1.0) - log_np1;
  const double log_abs_scaled =
      a > 0.0 ? std::log(std::abs(mu)) - log_np1
              : -std::numeric_limits<double>::infinity();
  const double phase = std::arg(mu);
  // n_a * y with y = |mu|^2 / (n_a (n_a+1)); the recurrence below works on
  // s_n = n_a^n L_n^{(nu)}(-y) so small n_a never amplifies
  const double nay = a / (n_a + 1.0);

  ComplexMatrix rho(n_cut, n_cut);
  for (int nu = 0; nu < n_cut; ++nu) {
    double s_prev = 0.0;
    double s = 1.0;  // s_0
    for (int n = 0; n + nu < n_cut; ++n) {
      if (n == 1) {
        s_prev = s;
        s = n_a * (1.0 + nu) + nay;  // s_1 = n_a (1 + nu + y)
      } else if (n > 1) {
        const double k = n - 1.0;
        const double next =
            ((n_a * (2.0 * k + 1.0 + nu) + nay) * s -
             n_a * n_a * (k + nu) * s_prev) /
            (k + 1.0);
        s_prev = s;
        s = next;
      }
      if (!std::isfinite(s)) {
        throw TruncationError(
            "displaced thermal state overflowed at |mu|^2=" +
                std::to_string(a) + ", n_a=" + std::to_string(n_a),
            1.0);
      }
      const int m = n + nu;
      double logmag = log_pref + 0.5 * (std::lgamma(n + 1.0) -
                                        std::lgamma(m + 1.0)) -
                      n * log_np1 + std::log(s);
      Complex val;
      if (nu == 0) {
        val = std::exp(logmag);
      } else if (a == 0.0) {
        val = 0.0;
      } else {
        logmag += nu * log_abs_scaled;
        val = std::polar(std::exp(logmag), nu * phase);
      }
      rho(m, n) = val;
      rho(n, m) = std::conj(val);
    }
  }

  const double deficit = 1.0 - rho.trace().real();
  if (!(std::abs(deficit) <= eps_trunc)) {
    throw TruncationError("displaced thermal trace deficit " +
                              std::to_string(deficit) + " exceeds " +
                              std::to_string(eps_trunc) + " at n_cut=" +
                              std::to_string(n_cut),
                          std::abs(deficit));
  }
  return DensityOperator(HermitianOperator(std::move(rho)), deficit,
                         eps_trunc);
}

EigenDecomposition hermitian_eig(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a.matrix());
  if (es.info() != Eigen::Success) {
    throw ConvergenceError("Hermitian eigendecomposition did not converge");
  }
  const Eigen::Index d = a.dim();
  EigenDecomposition out;
  out.eigenvalues.resize(d);
  out.eigenvectors.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {  // Eigen sorts ascending; flip
    out.eigenvalues(i) = es.eigenvalues()(d - 1 - i);
    out.eigenvectors.col(i) = es.eigenvectors().col(d - 1 - i);
  }
  return out;
}

HermitianOperator matrix_sqrt_inv(const HermitianOperator& a,
                                  double rank_tol) {
  EigenDecomposition ed = hermitian_eig(a);
  if (ed.eigenvalues.minCoeff() < -kPsdTol) {
    throw std::domain_error("matrix_sqrt_inv requires a PSD operator, got "
                            "eigenvalue " +
                            std::to_string(ed.eigenvalues.minCoeff()));
  }
  RealVector inv = RealVector::Zero(ed.eigenvalues.size());
  for (Eigen::Index i = 0; i < ed.eigenvalues.size(); ++i) {
    if (ed.eigenvalues(i) > rank_tol) {
      inv(i) = 1.0 / std::sqrt(ed.eigenvalues(i));
    }
  }
  ComplexMatrix out = ed.eigenvectors * inv.asDiagonal() *
                      ed.eigenvectors.adjoint();
  return HermitianOperator(std::move(out));
}

}  // namespace qwpcn
