#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qwpcn/wpcn.hpp"

namespace qwpcn {

/// One experiment description: which figure-style sweep to run and over
/// which parameter lists. `backend` is either a concrete backend name or
/// "auto", which picks the cheapest exact evaluation per (M, N_a) cell.
struct SweepSpec {
  enum class Experiment { rate_vs_t, optimal_vs_power };

  Experiment experiment = Experiment::rate_vs_t;
  std::vector<double> powers;
  std::vector<int> modulation_orders;
  std::vector<double> thermal_levels;
  std::string backend = "auto";
  int n_cut = 40;
  int grid_points = 1000;
  /// POVM-solver cells subsample the time grid to this many points
  /// (0 = no subsampling); the per-point SDP solve dominates otherwise.
  int sdp_grid_points = 0;
  double channel_gain = 1.0;
  double eps_trunc = kDefaultTruncTol;
  std::string output;
  /// When set, rate_vs_t cells additionally emit two-column (t, rate)
  /// files into this directory, one per cell, ready for gnuplot.
  std::string gnuplot_dir;
  /// 0 = library default threads, 1 = serial, n = exactly n threads.
  int jobs = 0;
};

void validate(const SweepSpec& spec);

/// Built-in presets: "paper_fig1" and "paper_fig2" reproduce the reference
/// sweeps (|h|^2 = 1, n_cut = 40, K = 1000); "fast" is the CI-sized variant
/// (K = 200, n_cut = 30, SDP cells on 50 grid points).
SweepSpec preset(const std::string& name);

/// Overlay JSON key/values onto an existing spec (file layered over preset
/// defaults; command-line flags are applied on top by the caller).
SweepSpec parse_spec(const std::string& json_text, SweepSpec base = {});

std::string to_string(SweepSpec::Experiment e);

/// auto backend: analytic BPSK (M=2, N_a=0), spectral binary (M=2, N_a>0),
/// exact SRM (M>2, N_a=0), POVM solver (M>2, N_a>0).
ErrorBackend resolve_auto_backend(int modulation_order, double thermal);

struct CellSummary {
  double power;
  int modulation_order;
  double thermal;
  std::string backend;
  bool failed = false;  // the whole cell failed (bad backend, no valid point)
  std::string failure;
  double t_star = 0.0;
  double r_star = 0.0;
  double p_error_star = 0.0;
  int failed_points = 0;
};

struct SweepResult {
  std::vector<CellSummary> cells;
  int failed_cells = 0;
};

/// Runs the sweep and streams CSV to `out` (a '#' metadata block, then a
/// fixed header and one row per data point; rows are flushed after every
/// cell). Timestamps only ever appear in '#' lines, so the CSV body is
/// byte-stable across runs.
SweepResult run_sweep(const SweepSpec& spec, std::ostream& out);

}  // namespace qwpcn
