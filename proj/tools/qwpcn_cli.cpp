#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "qwpcn/sweep.hpp"
#include "qwpcn/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitInvalidSpec = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read spec file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_summary(const qwpcn::SweepResult& result) {
  for (const auto& cell : result.cells) {
    std::printf("M=%-3d Na=%-5g P=%-8g backend=%-24s", cell.modulation_order,
                cell.thermal, cell.power, cell.backend.c_str());
    if (cell.failed) {
      std::printf(" FAILED (%s)\n", cell.failure.c_str());
    } else {
      std::printf(" t*=%-10.6g r*=%-10.6g p_e*=%-10.6g", cell.t_star,
                  cell.r_star, cell.p_error_star);
      if (cell.failed_points > 0) {
        std::printf(" [%d grid points failed]", cell.failed_points);
      }
      std::printf("\n");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Helstrom-bound rate sweeps for a wireless-powered "
               "M-PSK quantum optical link"};
  app.set_version_flag("--version", qwpcn::kVersion);

  auto* run = app.add_subcommand("run", "run a sweep described by a spec "
                                        "file and/or preset");
  std::string spec_path;
  std::string preset_name;
  std::string out_path;
  std::string backend;
  std::string gnuplot_dir;
  int jobs = -1;
  run->add_option("--spec", spec_path, "JSON spec file");
  run->add_option("--preset", preset_name,
                  "paper_fig1 | paper_fig2 | fast (spec file keys override)");
  run->add_option("--out", out_path, "output CSV path (overrides spec)");
  run->add_option("--backend", backend,
                  "error backend or 'auto' (overrides spec)");
  run->add_option("--jobs", jobs, "worker threads; 1 = serial");
  run->add_option("--gnuplot-dir", gnuplot_dir,
                  "also emit per-cell gnuplot column files here");
  run->require_option(1);

  CLI11_PARSE(app, argc, argv);
  if (!run->parsed()) {
    std::cerr << app.help() << "\n";
    return kExitInvalidSpec;
  }

  qwpcn::SweepSpec spec;
  try {
    if (preset_name.empty() && spec_path.empty()) {
      throw std::invalid_argument("need --spec and/or --preset");
    }
    if (!preset_name.empty()) spec = qwpcn::preset(preset_name);
    if (!spec_path.empty()) {
      spec = qwpcn::parse_spec(read_file(spec_path), spec);
    }
    if (!out_path.empty()) spec.output = out_path;
    if (!backend.empty()) spec.backend = backend;
    if (!gnuplot_dir.empty()) spec.gnuplot_dir = gnuplot_dir;
    if (jobs >= 0) spec.jobs = jobs;
    qwpcn::validate(spec);
  } catch (const std::exception& e) {
    std::cerr << "invalid spec: " << e.what() << "\n";
    return kExitInvalidSpec;
  }

#ifdef _OPENMP
  if (spec.jobs > 0) omp_set_num_threads(spec.jobs);
#endif

  try {
    qwpcn::SweepResult result;
    if (spec.output.empty() || spec.output == "-") {
      result = qwpcn::run_sweep(spec, std::cout);
    } else {
      std::ofstream out(spec.output);
      if (!out) {
        std::cerr << "cannot open output: " << spec.output << "\n";
        return kExitPartial;
      }
      result = qwpcn::run_sweep(spec, out);
      std::printf("wrote %s\n", spec.output.c_str());
      print_summary(result);
    }
    return result.failed_cells > 0 ? kExitPartial : kExitOk;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid spec: " << e.what() << "\n";
    return kExitInvalidSpec;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPartial;
  }
}
