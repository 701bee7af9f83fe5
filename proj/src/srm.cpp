#include "qwpcn/srm.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "qwpcn/errors.hpp"

namespace qwpcn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_args(int m, double alpha) {
  if (m < 2) throw std::domain_error("modulation order must be >= 2");
  if (alpha < 0.0) throw std::domain_error("alpha must be >= 0");
}

/// log of s_k = sum_{j>=0} alpha^{k+jM} / (k+jM)!  via log-sum-exp
double log_alias_sum(int k, int m, double alpha) {
  const double la = std::log(alpha);
  std::vector<double> terms;
  double peak = -std::numeric_limits<double>::infinity();
  for (int j = 0;; ++j) {
    const double n = k + static_cast<double>(j) * m;
    const double lt = n * la - std::lgamma(n + 1.0);
    terms.push_back(lt);
    peak = std::max(peak, lt);
    // past the Poisson mode the terms only fall; stop once negligible
    if (n > alpha && lt < peak - 60.0) break;
  }
  double acc = 0.0;
  for (double lt : terms) acc += std::exp(lt - peak);
  return peak + std::log(acc);
}

}  // namespace

GramSpectrum gram_spectrum(int m, double alpha) {
  check_args(m, alpha);
  std::vector<Complex> gamma(m);
  for (int l = 0; l < m; ++l) {
    const double theta = kTwoPi * l / m;
    gamma[l] = std::exp(Complex(-alpha + alpha * std::cos(theta),
                                alpha * std::sin(theta)));
  }
  GramSpectrum out{m, alpha, RealVector(m)};
  for (int k = 0; k < m; ++k) {
    Complex lam = 0.0;
    for (int l = 0; l < m; ++l) {
      const double theta = -kTwoPi * static_cast<double>(k) * l / m;
      lam += gamma[l] * Complex(std::cos(theta), std::sin(theta));
    }
    if (std::abs(lam.imag()) > 1e-10) {
      throw ConvergenceError("circulant DFT produced imaginary residue " +
                             std::to_string(lam.imag()) +
                             "; conjugate symmetry is broken (bug)");
    }
    double v = lam.real();
    if (v < 0.0) {
      if (v < -1e-10) {
        throw ConvergenceError("Gram eigenvalue " + std::to_string(v) +
                               " below PSD floor (bug)");
      }
      v = 0.0;
    }
    out.eigenvalues(k) = v;
  }
  return out;
}

double srm_error_exact(int m, double alpha) {
  check_args(m, alpha);
  if (alpha == 0.0) return 1.0 - 1.0 / m;
  const double log_m = std::log(static_cast<double>(m));
  double sum_sqrt = 0.0;  // (1/M) sum_k sqrt(lambda_k)
  for (int k = 0; k < m; ++k) {
    const double log_lambda = log_m - alpha + log_alias_sum(k, m, alpha);
    sum_sqrt += std::exp(0.5 * log_lambda);
  }
  sum_sqrt /= m;
  // huge alpha leaves ~alpha*eps of log-domain noise; the true value can
  // never be negative
  return std::max(0.0, 1.0 - sum_sqrt * sum_sqrt);
}

double srm_error_large_m(int m, double alpha) {
  check_args(m, alpha);
  if (alpha == 0.0) return 1.0 - 1.0 / m;
  // composed exactly like srm_error_exact with the alias terms dropped, so
  // the two agree bit-for-bit once aliasing falls below double precision
  const double la = std::log(alpha);
  const double log_m = std::log(static_cast<double>(m));
  double sum_sqrt = 0.0;
  for (int k = 0; k < m; ++k) {
    const double log_lambda = log_m - alpha + k * la - std::lgamma(k + 1.0);
    sum_sqrt += std::exp(0.5 * log_lambda);
  }
  sum_sqrt /= m;
  return std::max(0.0, 1.0 - sum_sqrt * sum_sqrt);
}

Povm srm_povm(const std::vector<DensityOperator>& states) {
  if (states.empty()) throw std::invalid_argument("srm_povm: no states");
  const Eigen::Index d = states.front().dim();
  const int m = static_cast<int>(states.size());
  ComplexMatrix rho_sum = ComplexMatrix::Zero(d, d);
  for (const auto& s : states) {
    if (s.dim() != d) {
      throw DimensionMismatch("srm_povm: state dimensions differ");
    }
    const double purity = (s.matrix() * s.matrix()).trace().real();
    if (purity < 1.0 - 1e-8) {
      throw std::domain_error("srm_povm expects pure states, purity = " +
                              std::to_string(purity));
    }
    rho_sum += s.matrix();
  }
  HermitianOperator inv_sqrt =
      matrix_sqrt_inv(HermitianOperator(rho_sum), 1e-12);

  std::vector<ComplexMatrix> elements;
  elements.reserve(states.size());
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  for (const auto& s : states) {
    ComplexMatrix pi = inv_sqrt.matrix() * s.matrix() * inv_sqrt.matrix();
    total += pi;
    elements.push_back(std::move(pi));
  }
  // rank-deficient rho (e.g. alpha = 0): park the orthogonal complement in
  // element 0; all states live inside the support so probabilities are
  // untouched
  elements[0] += ComplexMatrix::Identity(d, d) - total;
  return Povm(std::move(elements), 1e-8);
}

}  // namespace qwpcn
