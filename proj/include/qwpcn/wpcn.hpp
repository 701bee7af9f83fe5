#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qwpcn/fock.hpp"
#include "qwpcn/povm_opt.hpp"

namespace qwpcn {

/// Scalar model parameters: energy-transmitter power, deterministic channel
/// gain |h|^2, mean thermal photons, PSK order, Fock cutoff and the time
/// grid resolution.
struct SystemConfig {
  double power = 1.0;
  double channel_gain = 1.0;
  double thermal_photons = 0.0;
  int modulation_order = 2;
  int n_cut = 40;
  int grid_points = 1000;
  /// Acceptable Fock-truncation trace deficit. Thermal levels near N_a = 5
  /// need ~1e-2 at n_cut = 40; the tight default suits the low-noise runs.
  double eps_trunc = kDefaultTruncTol;
};

void validate(const SystemConfig& config);

/// Harvest-then-transmit bookkeeping for one time split.
struct EnergySplit {
  double t;
  double harvested_energy;  // P t |h|^2
  double photon_rate;       // harvested_energy / (1 - t)
};

EnergySplit energy_split(const SystemConfig& config, double t);

/// Mean photon number available per symbol when a fraction t of the block
/// is spent harvesting: P |h|^2 t / (1 - t).
double photon_rate(const SystemConfig& config, double t);

/// How the symbol error probability is evaluated. The binary backends
/// require M = 2; the SRM backends require a noiseless channel.
enum class ErrorBackend : std::uint8_t {
  analytic_bpsk_noiseless,
  spectral_binary,
  srm_exact,
  srm_large_m,
  povm_sdp,
};

std::string to_string(ErrorBackend backend);
ErrorBackend backend_from_string(const std::string& name);

/// Throws BackendMismatch when the backend cannot evaluate this config.
void require_applicable(ErrorBackend backend, const SystemConfig& config);

struct PointEval {
  double rate;
  double p_error;
};

/// Effective rate log2(M) (1-t) (1-P_e) at one time split.
PointEval effective_rate(const SystemConfig& config, double t,
                         ErrorBackend backend,
                         const SolverOptions& solver = {});

enum class PointStatus : std::uint8_t {
  ok,
  truncation_failed,
  not_converged,
};

/// Sampled rate curve over the open-interval grid t_i = i/(K+1). Failed
/// points keep their slot (NaN values) and never enter the argmax.
struct RateProfile {
  std::vector<double> ts;
  std::vector<double> p_errors;
  std::vector<double> rates;
  std::vector<PointStatus> status;
  int failed_points = 0;
  std::ptrdiff_t argmax = -1;
  double t_star = 0.0;
  double r_star = 0.0;
  /// Set when the argmax sits on the first or last valid grid point;
  /// callers should widen the grid before trusting t_star.
  bool argmax_on_boundary = false;
};

struct GridOptions {
  SolverOptions solver;
  /// OpenMP over grid points; each point is pure, assembly is by index,
  /// so serial and parallel outputs are bit-identical.
  bool parallel = true;
};

RateProfile optimize_time_fraction(const SystemConfig& config,
                                   ErrorBackend backend,
                                   const GridOptions& options = {});

/// Plain-loop reference for the OpenMP kernel above; kept for equivalence
/// tests and benchmarking.
RateProfile optimize_time_fraction_serial(const SystemConfig& config,
                                          ErrorBackend backend,
                                          const GridOptions& options = {});

/// Golden-section maximization of a unimodal scalar function; returns the
/// best abscissa/value seen. Brackets narrower than tol return their
/// midpoint untouched.
std::pair<double, double> golden_section_max(
    const std::function<double(double)>& f, double lo, double hi,
    double tol = 1e-6);

/// golden_section_max plus the unimodality guard: throws BracketError when
/// the refined value undercuts both bracket ends.
std::pair<double, double> refine_peak(const std::function<double(double)>& f,
                                      std::pair<double, double> bracket);

/// Sub-grid refinement of the rate peak inside a bracket that contains the
/// grid argmax.
std::pair<double, double> refine_t_star(const SystemConfig& config,
                                        ErrorBackend backend,
                                        std::pair<double, double> bracket,
                                        const SolverOptions& solver = {});

}  // namespace qwpcn
