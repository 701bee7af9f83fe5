// Timing comparison between the OpenMP kernels and their serial reference
// paths. Also asserts the outputs are bit-identical, which is the contract
// the tests rely on.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "qwpcn/povm_opt.hpp"
#include "qwpcn/wpcn.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(const std::function<void()>& fn) {
  const auto t0 = Clock::now();
  fn();
  const auto t1 = Clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const std::string& name, double serial_ms, double parallel_ms,
            bool match) {
  std::printf("%-32s serial %9.1f ms   parallel %9.1f ms   speedup %5.2fx   identical=%s\n",
              name.c_str(), serial_ms, parallel_ms, serial_ms / parallel_ms,
              match ? "yes" : "NO");
}

bool same_profile(const qwpcn::RateProfile& a, const qwpcn::RateProfile& b) {
  if (a.ts != b.ts || a.status != b.status) return false;
  for (std::size_t i = 0; i < a.rates.size(); ++i) {
    const bool rate_same = a.rates[i] == b.rates[i] ||
                           (std::isnan(a.rates[i]) && std::isnan(b.rates[i]));
    if (!rate_same) return false;
  }
  return a.argmax == b.argmax;
}

}  // namespace

int main() {
  using namespace qwpcn;

  {
    SystemConfig config;
    config.power = 1.0;
    config.thermal_photons = 0.5;
    config.modulation_order = 2;
    config.n_cut = 40;
    config.grid_points = 256;
    RateProfile serial;
    RateProfile parallel;
    const double ts = time_ms([&] {
      serial = optimize_time_fraction_serial(config,
                                             ErrorBackend::spectral_binary);
    });
    const double tp = time_ms([&] {
      parallel = optimize_time_fraction(config, ErrorBackend::spectral_binary);
    });
    report("spectral BPSK grid (K=256)", ts, tp, same_profile(serial, parallel));
  }

  {
    SystemConfig config;
    config.power = 1.0;
    config.thermal_photons = 0.5;
    config.modulation_order = 8;
    config.n_cut = 40;
    config.grid_points = 12;
    GridOptions serial_opts;
    serial_opts.solver.parallel = false;
    GridOptions parallel_opts;
    RateProfile serial;
    RateProfile parallel;
    const double ts = time_ms([&] {
      serial = optimize_time_fraction_serial(config, ErrorBackend::povm_sdp,
                                             serial_opts);
    });
    const double tp = time_ms([&] {
      parallel = optimize_time_fraction(config, ErrorBackend::povm_sdp,
                                        parallel_opts);
    });
    report("8-PSK POVM-solver grid (K=12)", ts, tp,
           same_profile(serial, parallel));
  }

  {
    std::vector<DensityOperator> states;
    for (int i = 0; i < 8; ++i) {
      const double phase = -2.0 * 3.14159265358979323846 * i / 8;
      states.push_back(thermal_displaced_rho(std::polar(std::sqrt(1.5), phase),
                                             0.5, 40));
    }
    auto problem = DiscriminationProblem::with_equal_priors(states);
    SolverOptions serial_opts;
    serial_opts.parallel = false;
    SolverOptions parallel_opts;
    SolverReport rs{0.0, Povm({ComplexMatrix::Identity(1, 1)}), 0, 0.0,
                    false, {}};
    SolverReport rp = rs;
    const double ts =
        time_ms([&] { rs = solve_min_error_povm(problem, serial_opts); });
    const double tp =
        time_ms([&] { rp = solve_min_error_povm(problem, parallel_opts); });
    report("single POVM solve (M=8, N=40)", ts, tp,
           rs.p_error == rp.p_error &&
               rs.certificate_residual == rp.certificate_residual);
  }

  return 0;
}
