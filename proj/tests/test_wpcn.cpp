#include <doctest.h>

#include <cmath>

#include "qwpcn/errors.hpp"
#include "qwpcn/wpcn.hpp"

using namespace qwpcn;

namespace {

SystemConfig bpsk_config(double power, double na = 0.0, int k = 1000) {
  SystemConfig config;
  config.power = power;
  config.thermal_photons = na;
  config.modulation_order = 2;
  config.grid_points = k;
  return config;
}

bool unimodal(const RateProfile& profile, double slack = 1e-12) {
  const auto k = profile.argmax;
  for (std::ptrdiff_t i = 0; i + 1 <= k; ++i) {
    if (profile.rates[i + 1] < profile.rates[i] - slack) return false;
  }
  for (std::size_t i = k; i + 1 < profile.rates.size(); ++i) {
    if (profile.rates[i + 1] > profile.rates[i] + slack) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("photon rate arithmetic and domain") {
  SystemConfig config = bpsk_config(1.0);
  CHECK(photon_rate(config, 0.5) == 1.0);
  CHECK(std::abs(photon_rate(config, 0.9) - 9.0) < 1e-12);
  CHECK(photon_rate(config, 1e-9) < 2e-9);
  CHECK_THROWS_AS(photon_rate(config, 0.0), std::domain_error);
  CHECK_THROWS_AS(photon_rate(config, 1.0), std::domain_error);
}

TEST_CASE("energy split identity alpha = P g t / (1-t)") {
  SystemConfig config;
  config.power = 2.5;
  config.channel_gain = 0.7;
  for (const double t : {0.1, 0.5, 0.93}) {
    const EnergySplit split = energy_split(config, t);
    CHECK(std::abs(split.harvested_energy - 2.5 * 0.7 * t) < 1e-15);
    CHECK(std::abs(split.photon_rate - 2.5 * 0.7 * t / (1.0 - t)) <= 1e-12);
  }
}

TEST_CASE("effective rate composes the closed form with the time split") {
  const auto point = effective_rate(bpsk_config(1.0), 0.5,
                                    ErrorBackend::analytic_bpsk_noiseless);
  // 0.5 (1 - (1 - sqrt(1 - e^{-4}))/2), frozen
  CHECK(std::abs(point.rate - 0.4976999648152056) < 1e-15);
}

TEST_CASE("vanishing energy leaves the random-guess rate") {
  const auto point = effective_rate(bpsk_config(1e-12), 0.5,
                                    ErrorBackend::analytic_bpsk_noiseless);
  CHECK(std::abs(point.rate - 0.25) < 1e-5);  // (1-t)/2 at t = 1/2

  SystemConfig mpsk = bpsk_config(1e-12);
  mpsk.modulation_order = 8;
  const auto point8 = effective_rate(mpsk, 0.5, ErrorBackend::srm_exact);
  // log2(M) (1-t) / M
  CHECK(std::abs(point8.rate - 3.0 * 0.5 / 8.0) < 1e-5);
}

TEST_CASE("backend applicability is enforced") {
  SystemConfig config = bpsk_config(1.0, 0.5);
  CHECK_THROWS_AS(
      effective_rate(config, 0.5, ErrorBackend::analytic_bpsk_noiseless),
      BackendMismatch);
  CHECK_THROWS_AS(effective_rate(config, 0.5, ErrorBackend::srm_exact),
                  BackendMismatch);
  config.modulation_order = 4;
  CHECK_THROWS_AS(effective_rate(config, 0.5, ErrorBackend::spectral_binary),
                  BackendMismatch);
}

TEST_CASE("backend names round-trip") {
  for (const auto b :
       {ErrorBackend::analytic_bpsk_noiseless, ErrorBackend::spectral_binary,
        ErrorBackend::srm_exact, ErrorBackend::srm_large_m,
        ErrorBackend::povm_sdp}) {
    CHECK(backend_from_string(to_string(b)) == b);
  }
  CHECK_THROWS_AS(backend_from_string("nope"), std::invalid_argument);
}

TEST_CASE("unit-power BPSK profile is unimodal with the known peak") {
  const RateProfile profile = optimize_time_fraction(
      bpsk_config(1.0), ErrorBackend::analytic_bpsk_noiseless);
  CHECK(profile.failed_points == 0);
  CHECK(unimodal(profile));
  CHECK(std::abs(profile.t_star - 0.143856) < 1e-5);
  CHECK(std::abs(profile.r_star - 0.727530) < 1e-5);
  CHECK_FALSE(profile.argmax_on_boundary);
  // grid placement: t_i = i/(K+1)
  CHECK(std::abs(profile.ts.front() - 1.0 / 1001.0) < 1e-15);
  CHECK(std::abs(profile.ts.back() - 1000.0 / 1001.0) < 1e-15);
}

TEST_CASE("rate profile keeps the rate identity pointwise") {
  SystemConfig config = bpsk_config(1.0, 0.0, 257);
  config.modulation_order = 16;
  const RateProfile profile =
      optimize_time_fraction(config, ErrorBackend::srm_exact);
  for (std::size_t i = 0; i < profile.ts.size(); ++i) {
    const double expected = std::log2(16.0) * (1.0 - profile.ts[i]) *
                            (1.0 - profile.p_errors[i]);
    CHECK(std::abs(profile.rates[i] - expected) <= 1e-12);
    CHECK(profile.rates[i] >= 0.0);
    CHECK(profile.rates[i] <=
          std::log2(16.0) * (1.0 - profile.ts[i]) + 1e-12);
  }
}

TEST_CASE("harvesting fraction collapses at both power extremes") {
  CHECK(optimize_time_fraction(bpsk_config(100.0),
                               ErrorBackend::analytic_bpsk_noiseless)
            .t_star <= 0.05);
  CHECK(optimize_time_fraction(bpsk_config(0.001),
                               ErrorBackend::analytic_bpsk_noiseless)
            .t_star <= 0.05);
}

TEST_CASE("analytic and spectral backends agree along the grid") {
  const SystemConfig config = bpsk_config(1.0, 0.0, 100);
  const RateProfile analytic = optimize_time_fraction(
      config, ErrorBackend::analytic_bpsk_noiseless);
  const RateProfile spectral =
      optimize_time_fraction(config, ErrorBackend::spectral_binary);
  int compared = 0;
  for (std::size_t i = 0; i < analytic.ts.size(); ++i) {
    // spectral points near t = 1 fail truncation by design; compare the rest
    if (spectral.status[i] != PointStatus::ok) continue;
    CHECK(std::abs(analytic.rates[i] - spectral.rates[i]) <= 1e-7);
    ++compared;
  }
  CHECK(compared >= 85);
}

TEST_CASE("truncation failures are excluded, never interpolated") {
  SystemConfig config = bpsk_config(100.0, 0.5, 40);
  config.n_cut = 30;
  config.eps_trunc = 1e-4;
  const RateProfile profile =
      optimize_time_fraction(config, ErrorBackend::spectral_binary);
  CHECK(profile.failed_points > 0);
  CHECK(profile.failed_points < 40);
  CHECK(profile.argmax >= 0);
  for (std::size_t i = 0; i < profile.ts.size(); ++i) {
    if (profile.status[i] != PointStatus::ok) {
      CHECK(std::isnan(profile.rates[i]));
      CHECK(std::isnan(profile.p_errors[i]));
    } else {
      CHECK(profile.rates[i] <= profile.r_star);
    }
  }
}

TEST_CASE("monotone curves flag their boundary argmax") {
  // alpha = 0 everywhere: rate = log2(M)(1-t)/M, maximal at the first node
  SystemConfig config = bpsk_config(0.0, 0.0, 25);
  config.modulation_order = 4;
  const RateProfile profile =
      optimize_time_fraction(config, ErrorBackend::srm_exact);
  CHECK(profile.argmax == 0);
  CHECK(profile.argmax_on_boundary);
  CHECK(std::abs(profile.r_star - 0.5 * (1.0 - profile.ts[0])) < 1e-12);
}

TEST_CASE("golden section recovers an injected quadratic peak") {
  const auto [x, fx] = golden_section_max(
      [](double t) { return -(t - 0.3) * (t - 0.3); }, 0.05, 0.9);
  CHECK(std::abs(x - 0.3) <= 1e-6);
  CHECK(fx <= 0.0);
}

TEST_CASE("degenerate bracket returns its midpoint") {
  const auto [x, fx] = refine_peak(
      [](double t) { return -(t - 0.3) * (t - 0.3); }, {0.4, 0.4 + 1e-7});
  CHECK(std::abs(x - (0.4 + 5e-8)) < 1e-9);
  CHECK(fx == -(x - 0.3) * (x - 0.3));
}

TEST_CASE("a mid-bracket dip raises BracketError") {
  CHECK_THROWS_AS(refine_peak([](double t) { return std::abs(t - 0.5); },
                              {0.2, 0.8}),
                  BracketError);
}

TEST_CASE("refined peak is stationary and not below the grid value") {
  const SystemConfig config = bpsk_config(1.0);
  const RateProfile profile = optimize_time_fraction(
      config, ErrorBackend::analytic_bpsk_noiseless);
  const auto bracket = std::pair{profile.ts[profile.argmax - 1],
                                 profile.ts[profile.argmax + 1]};
  const auto [t_star, r_star] = refine_t_star(
      config, ErrorBackend::analytic_bpsk_noiseless, bracket);
  CHECK(r_star >= profile.r_star - 1e-12);
  const double h = 1e-5;
  const auto up = effective_rate(config, t_star + h,
                                 ErrorBackend::analytic_bpsk_noiseless);
  const auto dn = effective_rate(config, t_star - h,
                                 ErrorBackend::analytic_bpsk_noiseless);
  CHECK(std::abs((up.rate - dn.rate) / (2.0 * h)) <= 1e-4);
}

TEST_CASE("invalid configs are rejected up front") {
  SystemConfig config = bpsk_config(1.0);
  config.modulation_order = 1;
  CHECK_THROWS_AS(validate(config), std::domain_error);
  config = bpsk_config(-1.0);
  CHECK_THROWS_AS(validate(config), std::domain_error);
  config = bpsk_config(1.0);
  config.channel_gain = 0.0;
  CHECK_THROWS_AS(validate(config), std::domain_error);
}
