#include "qwpcn/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qwpcn/errors.hpp"
#include "qwpcn/version.hpp"

namespace qwpcn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string status_name(PointStatus s) {
  switch (s) {
    case PointStatus::ok:
      return "ok";
    case PointStatus::truncation_failed:
    case PointStatus::not_converged:
      return "failed";
  }
  return "failed";
}

std::string cell_tag(const SweepSpec& spec, const CellSummary& cell) {
  std::ostringstream name;
  name << to_string(spec.experiment) << "_M" << cell.modulation_order << "_Na"
       << cell.thermal << "_P" << cell.power;
  std::string tag = name.str();
  std::replace(tag.begin(), tag.end(), '.', 'p');
  return tag;
}

SystemConfig cell_config(const SweepSpec& spec, double power, int m,
                         double na, ErrorBackend backend) {
  SystemConfig config;
  config.power = power;
  config.channel_gain = spec.channel_gain;
  config.thermal_photons = na;
  config.modulation_order = m;
  config.n_cut = spec.n_cut;
  config.grid_points = spec.grid_points;
  if (backend == ErrorBackend::povm_sdp && spec.sdp_grid_points > 0) {
    config.grid_points = std::min(spec.grid_points, spec.sdp_grid_points);
  }
  config.eps_trunc = spec.eps_trunc;
  return config;
}

nlohmann::json spec_to_json(const SweepSpec& spec) {
  return nlohmann::json{{"experiment", to_string(spec.experiment)},
                        {"powers", spec.powers},
                        {"modulation_orders", spec.modulation_orders},
                        {"thermal_levels", spec.thermal_levels},
                        {"backend", spec.backend},
                        {"n_cut", spec.n_cut},
                        {"grid_points", spec.grid_points},
                        {"sdp_grid_points", spec.sdp_grid_points},
                        {"channel_gain", spec.channel_gain},
                        {"eps_trunc", spec.eps_trunc}};
}

void write_metadata(const SweepSpec& spec, std::ostream& out) {
  std::time_t now = std::time(nullptr);
  char stamp[64] = "unknown";
  if (std::tm tm_utc{}; gmtime_r(&now, &tm_utc) != nullptr) {
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  }
  out << "# qwpcn " << kVersion << "\n";
  out << "# spec: " << spec_to_json(spec).dump() << "\n";
  out << "# generated_at: " << stamp << "\n";
}

struct Cell {
  double power;
  int modulation_order;
  double thermal;
};

std::vector<Cell> enumerate_cells(const SweepSpec& spec) {
  std::vector<Cell> cells;
  for (double p : spec.powers) {
    for (int m : spec.modulation_orders) {
      for (double na : spec.thermal_levels) {
        cells.push_back({p, m, na});
      }
    }
  }
  return cells;
}

GridOptions grid_options(const SweepSpec& spec) {
  GridOptions options;
  options.parallel = spec.jobs != 1;
  return options;
}

void write_gnuplot_cell(const SweepSpec& spec, const CellSummary& cell,
                        const RateProfile& profile) {
  if (spec.gnuplot_dir.empty()) return;
  std::filesystem::create_directories(spec.gnuplot_dir);
  std::ofstream out(std::filesystem::path(spec.gnuplot_dir) /
                    (cell_tag(spec, cell) + ".dat"));
  out << "# t rate\n";
  for (std::size_t i = 0; i < profile.ts.size(); ++i) {
    if (profile.status[i] != PointStatus::ok) continue;
    out << fmt(profile.ts[i]) << " " << fmt(profile.rates[i]) << "\n";
  }
}

SweepResult run_rate_vs_t(const SweepSpec& spec, std::ostream& out) {
  SweepResult result;
  out << "experiment,M,Na,P,backend,t,p_error,rate,status\n";
  for (const Cell& cell : enumerate_cells(spec)) {
    CellSummary summary{cell.power, cell.modulation_order, cell.thermal,
                        spec.backend};
    const std::string row_prefix =
        "rate_vs_t," + std::to_string(cell.modulation_order) + "," +
        fmt(cell.thermal) + "," + fmt(cell.power) + ",";
    try {
      const ErrorBackend backend =
          spec.backend == "auto"
              ? resolve_auto_backend(cell.modulation_order, cell.thermal)
              : backend_from_string(spec.backend);
      summary.backend = to_string(backend);
      const SystemConfig config = cell_config(spec, cell.power,
                                              cell.modulation_order,
                                              cell.thermal, backend);
      const RateProfile profile =
          optimize_time_fraction(config, backend, grid_options(spec));
      for (std::size_t i = 0; i < profile.ts.size(); ++i) {
        out << row_prefix << summary.backend << "," << fmt(profile.ts[i])
            << "," << fmt(profile.p_errors[i]) << "," << fmt(profile.rates[i])
            << "," << status_name(profile.status[i]) << "\n";
      }
      summary.failed_points = profile.failed_points;
      if (profile.argmax < 0) {
        summary.failed = true;
        summary.failure = "no valid grid point";
        summary.t_star = summary.r_star = summary.p_error_star = kNaN;
      } else {
        summary.t_star = profile.t_star;
        summary.r_star = profile.r_star;
        summary.p_error_star = profile.p_errors[profile.argmax];
        write_gnuplot_cell(spec, summary, profile);
      }
    } catch (const std::exception& e) {
      summary.failed = true;
      summary.failure = e.what();
      summary.t_star = summary.r_star = summary.p_error_star = kNaN;
    }
    out << row_prefix << summary.backend << "," << fmt(summary.t_star) << ","
        << fmt(summary.p_error_star) << "," << fmt(summary.r_star) << ","
        << (summary.failed ? "failed" : "summary") << "\n";
    out.flush();
    if (summary.failed) ++result.failed_cells;
    result.cells.push_back(std::move(summary));
  }
  return result;
}

SweepResult run_optimal_vs_power(const SweepSpec& spec, std::ostream& out) {
  SweepResult result;
  out << "experiment,M,Na,P,backend,t_star,r_star,p_error_star,status\n";
  for (const Cell& cell : enumerate_cells(spec)) {
    CellSummary summary{cell.power, cell.modulation_order, cell.thermal,
                        spec.backend};
    try {
      const ErrorBackend backend =
          spec.backend == "auto"
              ? resolve_auto_backend(cell.modulation_order, cell.thermal)
              : backend_from_string(spec.backend);
      summary.backend = to_string(backend);
      const SystemConfig config = cell_config(spec, cell.power,
                                              cell.modulation_order,
                                              cell.thermal, backend);
      const RateProfile profile =
          optimize_time_fraction(config, backend, grid_options(spec));
      summary.failed_points = profile.failed_points;
      if (profile.argmax < 0) {
        summary.failed = true;
        summary.failure = "no valid grid point";
        summary.t_star = summary.r_star = summary.p_error_star = kNaN;
      } else {
        summary.t_star = profile.t_star;
        summary.r_star = profile.r_star;
        summary.p_error_star = profile.p_errors[profile.argmax];
      }
    } catch (const std::exception& e) {
      summary.failed = true;
      summary.failure = e.what();
      summary.t_star = summary.r_star = summary.p_error_star = kNaN;
    }
    out << "optimal_vs_power," << cell.modulation_order << ","
        << fmt(cell.thermal) << "," << fmt(cell.power) << ","
        << summary.backend << "," << fmt(summary.t_star) << ","
        << fmt(summary.r_star) << "," << fmt(summary.p_error_star) << ","
        << (summary.failed ? "failed" : "ok") << "\n";
    out.flush();
    if (summary.failed) ++result.failed_cells;
    result.cells.push_back(std::move(summary));
  }
  return result;
}

}  // namespace

void validate(const SweepSpec& spec) {
  if (spec.powers.empty() || spec.modulation_orders.empty() ||
      spec.thermal_levels.empty()) {
    throw std::invalid_argument(
        "spec needs non-empty powers, modulation_orders and thermal_levels");
  }
  for (double p : spec.powers) {
    if (p < 0.0) throw std::invalid_argument("powers must be >= 0");
  }
  for (int m : spec.modulation_orders) {
    if (m < 2) throw std::invalid_argument("modulation orders must be >= 2");
  }
  for (double na : spec.thermal_levels) {
    if (na < 0.0) throw std::invalid_argument("thermal levels must be >= 0");
  }
  if (spec.n_cut < 1) throw std::invalid_argument("n_cut must be >= 1");
  if (spec.grid_points < 1) {
    throw std::invalid_argument("grid_points must be >= 1");
  }
  if (spec.sdp_grid_points < 0) {
    throw std::invalid_argument("sdp_grid_points must be >= 0");
  }
  if (spec.channel_gain <= 0.0) {
    throw std::invalid_argument("channel_gain must be > 0");
  }
  if (spec.eps_trunc <= 0.0) {
    throw std::invalid_argument("eps_trunc must be > 0");
  }
  if (spec.jobs < 0) throw std::invalid_argument("jobs must be >= 0");
  if (spec.backend != "auto") {
    backend_from_string(spec.backend);  // throws on bad name
  }
}

std::string to_string(SweepSpec::Experiment e) {
  return e == SweepSpec::Experiment::rate_vs_t ? "rate_vs_t"
                                               : "optimal_vs_power";
}

SweepSpec preset(const std::string& name) {
  SweepSpec spec;
  if (name == "paper_fig1") {
    spec.experiment = SweepSpec::Experiment::rate_vs_t;
    spec.powers = {1.0};
    spec.modulation_orders = {2, 8, 16, 32};
    spec.thermal_levels = {0.0, 0.5};
    spec.n_cut = 40;
    spec.grid_points = 1000;
    spec.output = "fig1.csv";
  } else if (name == "paper_fig2") {
    spec.experiment = SweepSpec::Experiment::optimal_vs_power;
    spec.powers.clear();
    for (int k = 0; k <= 16; ++k) {  // log sweep over [1e-2, 1e2]
      spec.powers.push_back(std::pow(10.0, -2.0 + 4.0 * k / 16.0));
    }
    spec.modulation_orders = {2, 8};
    spec.thermal_levels = {0.0, 0.25, 0.5, 1.0, 5.0};
    spec.n_cut = 40;
    spec.grid_points = 1000;
    spec.eps_trunc = 1e-2;  // N_a = 5 sheds ~7e-4 of trace at n_cut = 40
    spec.output = "fig2.csv";
  } else if (name == "fast") {
    spec.experiment = SweepSpec::Experiment::rate_vs_t;
    spec.powers = {1.0};
    spec.modulation_orders = {2, 8};
    spec.thermal_levels = {0.0, 0.5};
    spec.n_cut = 30;
    spec.grid_points = 200;
    spec.sdp_grid_points = 50;
    spec.output = "fast.csv";
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return spec;
}

SweepSpec parse_spec(const std::string& json_text, SweepSpec base) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("spec is not valid JSON: ") +
                                e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("spec must be an object");
  try {
    if (j.contains("experiment")) {
      const std::string name = j["experiment"].get<std::string>();
      if (name == "rate_vs_t") {
        base.experiment = SweepSpec::Experiment::rate_vs_t;
      } else if (name == "optimal_vs_power") {
        base.experiment = SweepSpec::Experiment::optimal_vs_power;
      } else {
        throw std::invalid_argument("unknown experiment: " + name);
      }
    }
    if (j.contains("powers")) {
      base.powers = j["powers"].get<std::vector<double>>();
    }
    if (j.contains("modulation_orders")) {
      base.modulation_orders = j["modulation_orders"].get<std::vector<int>>();
    }
    if (j.contains("thermal_levels")) {
      base.thermal_levels = j["thermal_levels"].get<std::vector<double>>();
    }
    if (j.contains("backend")) base.backend = j["backend"].get<std::string>();
    if (j.contains("n_cut")) base.n_cut = j["n_cut"].get<int>();
    if (j.contains("grid_points")) {
      base.grid_points = j["grid_points"].get<int>();
    }
    if (j.contains("sdp_grid_points")) {
      base.sdp_grid_points = j["sdp_grid_points"].get<int>();
    }
    if (j.contains("channel_gain")) {
      base.channel_gain = j["channel_gain"].get<double>();
    }
    if (j.contains("eps_trunc")) {
      base.eps_trunc = j["eps_trunc"].get<double>();
    }
    if (j.contains("output")) base.output = j["output"].get<std::string>();
    if (j.contains("gnuplot_dir")) {
      base.gnuplot_dir = j["gnuplot_dir"].get<std::string>();
    }
    if (j.contains("jobs")) base.jobs = j["jobs"].get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad spec value: ") + e.what());
  }
  return base;
}

ErrorBackend resolve_auto_backend(int modulation_order, double thermal) {
  if (modulation_order == 2) {
    return thermal == 0.0 ? ErrorBackend::analytic_bpsk_noiseless
                          : ErrorBackend::spectral_binary;
  }
  return thermal == 0.0 ? ErrorBackend::srm_exact : ErrorBackend::povm_sdp;
}

SweepResult run_sweep(const SweepSpec& spec, std::ostream& out) {
  validate(spec);
  write_metadata(spec, out);
  return spec.experiment == SweepSpec::Experiment::rate_vs_t
             ? run_rate_vs_t(spec, out)
             : run_optimal_vs_power(spec, out);
}

}  // namespace qwpcn
