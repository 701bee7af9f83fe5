#include "qwpcn/wpcn.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>

#include "qwpcn/binary_helstrom.hpp"
#include "qwpcn/errors.hpp"
#include "qwpcn/srm.hpp"

namespace qwpcn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<DensityOperator> mpsk_states(const SystemConfig& config,
                                         double alpha) {
  const int m = config.modulation_order;
  std::vector<DensityOperator> states;
  states.reserve(m);
  const double amp = std::sqrt(alpha);
  for (int i = 0; i < m; ++i) {
    const double phase = -2.0 * std::numbers::pi * i / m;
    states.push_back(thermal_displaced_rho(std::polar(amp, phase),
                                           config.thermal_photons,
                                           config.n_cut, config.eps_trunc));
  }
  return states;
}

struct PointResult {
  double p_error = kNaN;
  PointStatus status = PointStatus::ok;
};

PointResult evaluate_point(const SystemConfig& config, double alpha,
                           ErrorBackend backend,
                           const SolverOptions& solver) {
  PointResult out;
  switch (backend) {
    case ErrorBackend::analytic_bpsk_noiseless:
      out.p_error = helstrom_bpsk_noiseless(alpha);
      break;
    case ErrorBackend::spectral_binary: {
      const double amp = std::sqrt(alpha);
      const auto rho0 = thermal_displaced_rho(amp, config.thermal_photons,
                                              config.n_cut, config.eps_trunc);
      const auto rho1 = thermal_displaced_rho(-amp, config.thermal_photons,
                                              config.n_cut, config.eps_trunc);
      out.p_error = helstrom_binary(rho0, rho1).p_error;
      break;
    }
    case ErrorBackend::srm_exact:
      out.p_error = srm_error_exact(config.modulation_order, alpha);
      break;
    case ErrorBackend::srm_large_m:
      out.p_error = srm_error_large_m(config.modulation_order, alpha);
      break;
    case ErrorBackend::povm_sdp: {
      auto problem = DiscriminationProblem::with_equal_priors(
          mpsk_states(config, alpha));
      auto report = solve_min_error_povm(problem, solver);
      if (!report.converged) {
        out.status = PointStatus::not_converged;
      } else {
        out.p_error = report.p_error;
      }
      break;
    }
  }
  return out;
}

RateProfile run_grid(const SystemConfig& config, ErrorBackend backend,
                     const GridOptions& options, bool parallel) {
  validate(config);
  require_applicable(backend, config);

  const int k = config.grid_points;
  RateProfile profile;
  profile.ts.resize(k);
  profile.p_errors.assign(k, kNaN);
  profile.rates.assign(k, kNaN);
  profile.status.assign(k, PointStatus::ok);
  const double bits = std::log2(static_cast<double>(config.modulation_order));

  std::exception_ptr first_error;

#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 1; i <= k; ++i) {
    const double t = static_cast<double>(i) / (k + 1);
    profile.ts[i - 1] = t;
    try {
      const double alpha = config.power * config.channel_gain * t / (1.0 - t);
      const PointResult point =
          evaluate_point(config, alpha, backend, options.solver);
      profile.status[i - 1] = point.status;
      if (point.status == PointStatus::ok) {
        profile.p_errors[i - 1] = point.p_error;
        profile.rates[i - 1] = bits * (1.0 - t) * (1.0 - point.p_error);
      }
    } catch (const TruncationError&) {
      profile.status[i - 1] = PointStatus::truncation_failed;
    } catch (...) {
#pragma omp critical(qwpcn_grid_error)
      if (!first_error) first_error = std::current_exception();
      profile.status[i - 1] = PointStatus::truncation_failed;
    }
  }
  if (first_error) std::rethrow_exception(first_error);

  std::ptrdiff_t first_valid = -1;
  std::ptrdiff_t last_valid = -1;
  for (int i = 0; i < k; ++i) {
    if (profile.status[i] != PointStatus::ok) {
      ++profile.failed_points;
      continue;
    }
    if (first_valid < 0) first_valid = i;
    last_valid = i;
    if (profile.argmax < 0 || profile.rates[i] > profile.r_star) {
      profile.argmax = i;
      profile.r_star = profile.rates[i];
    }
  }
  if (profile.argmax >= 0) {
    profile.t_star = profile.ts[profile.argmax];
    profile.argmax_on_boundary =
        profile.argmax == first_valid || profile.argmax == last_valid;
  } else {
    profile.t_star = kNaN;
    profile.r_star = kNaN;
  }
  return profile;
}

}  // namespace

void validate(const SystemConfig& config) {
  if (config.power < 0.0) throw std::domain_error("power must be >= 0");
  if (config.channel_gain <= 0.0) {
    throw std::domain_error("channel gain must be > 0");
  }
  if (config.thermal_photons < 0.0) {
    throw std::domain_error("thermal photons must be >= 0");
  }
  if (config.modulation_order < 2) {
    throw std::domain_error("modulation order must be >= 2");
  }
  if (config.n_cut < 1) throw std::domain_error("n_cut must be >= 1");
  if (config.grid_points < 1) throw std::domain_error("grid_points must be >= 1");
  if (config.eps_trunc <= 0.0) throw std::domain_error("eps_trunc must be > 0");
}

EnergySplit energy_split(const SystemConfig& config, double t) {
  if (!(t > 0.0 && t < 1.0)) {
    throw std::domain_error("time fraction must lie in (0, 1)");
  }
  const double energy = config.power * t * config.channel_gain;
  return EnergySplit{t, energy, energy / (1.0 - t)};
}

double photon_rate(const SystemConfig& config, double t) {
  return energy_split(config, t).photon_rate;
}

std::string to_string(ErrorBackend backend) {
  switch (backend) {
    case ErrorBackend::analytic_bpsk_noiseless:
      return "analytic_bpsk_noiseless";
    case ErrorBackend::spectral_binary:
      return "spectral_binary";
    case ErrorBackend::srm_exact:
      return "srm_exact";
    case ErrorBackend::srm_large_m:
      return "srm_large_m";
    case ErrorBackend::povm_sdp:
      return "povm_sdp";
  }
  throw std::logic_error("unknown backend");
}

ErrorBackend backend_from_string(const std::string& name) {
  if (name == "analytic_bpsk_noiseless") {
    return ErrorBackend::analytic_bpsk_noiseless;
  }
  if (name == "spectral_binary") return ErrorBackend::spectral_binary;
  if (name == "srm_exact") return ErrorBackend::srm_exact;
  if (name == "srm_large_m") return ErrorBackend::srm_large_m;
  if (name == "povm_sdp") return ErrorBackend::povm_sdp;
  throw std::invalid_argument("unknown backend name: " + name);
}

void require_applicable(ErrorBackend backend, const SystemConfig& config) {
  switch (backend) {
    case ErrorBackend::analytic_bpsk_noiseless:
      if (config.modulation_order != 2 || config.thermal_photons != 0.0) {
        throw BackendMismatch(
            "analytic_bpsk_noiseless needs M = 2 and N_a = 0");
      }
      break;
    case ErrorBackend::spectral_binary:
      if (config.modulation_order != 2) {
        throw BackendMismatch("spectral_binary needs M = 2");
      }
      break;
    case ErrorBackend::srm_exact:
    case ErrorBackend::srm_large_m:
      if (config.thermal_photons != 0.0) {
        throw BackendMismatch("SRM backends need a noiseless channel");
      }
      break;
    case ErrorBackend::povm_sdp:
      break;
  }
}

PointEval effective_rate(const SystemConfig& config, double t,
                         ErrorBackend backend, const SolverOptions& solver) {
  validate(config);
  require_applicable(backend, config);
  const double alpha = photon_rate(config, t);
  const PointResult point = evaluate_point(config, alpha, backend, solver);
  if (point.status == PointStatus::not_converged) {
    throw ConvergenceError("POVM solver did not certify optimality at t = " +
                           std::to_string(t));
  }
  const double bits = std::log2(static_cast<double>(config.modulation_order));
  return PointEval{bits * (1.0 - t) * (1.0 - point.p_error), point.p_error};
}

RateProfile optimize_time_fraction(const SystemConfig& config,
                                   ErrorBackend backend,
                                   const GridOptions& options) {
  return run_grid(config, backend, options, options.parallel);
}

RateProfile optimize_time_fraction_serial(const SystemConfig& config,
                                          ErrorBackend backend,
                                          const GridOptions& options) {
  return run_grid(config, backend, options, /*parallel=*/false);
}

std::pair<double, double> golden_section_max(
    const std::function<double(double)>& f, double lo, double hi,
    double tol) {
  if (!(lo <= hi)) throw std::invalid_argument("bracket must satisfy lo <= hi");
  if (hi - lo < tol) {
    const double mid = (lo + hi) / 2.0;
    return {mid, f(mid)};
  }
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  std::pair<double, double> best = fc >= fd ? std::pair{c, fc}
                                            : std::pair{d, fd};
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
      if (fc > best.second) best = {c, fc};
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
      if (fd > best.second) best = {d, fd};
    }
  }
  const double mid = (a + b) / 2.0;
  const double fmid = f(mid);
  if (fmid > best.second) best = {mid, fmid};
  return best;
}

std::pair<double, double> refine_peak(const std::function<double(double)>& f,
                                      std::pair<double, double> bracket) {
  const auto [lo, hi] = bracket;
  if (hi - lo < 1e-6) {
    const double mid = (lo + hi) / 2.0;
    return {mid, f(mid)};
  }
  const auto refined = golden_section_max(f, lo, hi, 1e-6);
  if (refined.second < f(lo) && refined.second < f(hi)) {
    throw BracketError("refined value undercuts both bracket endpoints; "
                       "function is not unimodal on the bracket");
  }
  return refined;
}

std::pair<double, double> refine_t_star(const SystemConfig& config,
                                        ErrorBackend backend,
                                        std::pair<double, double> bracket,
                                        const SolverOptions& solver) {
  if (!(bracket.first > 0.0 && bracket.second < 1.0 &&
        bracket.first <= bracket.second)) {
    throw std::domain_error("bracket must lie inside (0, 1)");
  }
  return refine_peak(
      [&](double t) { return effective_rate(config, t, backend, solver).rate; },
      bracket);
}

}  // namespace qwpcn
