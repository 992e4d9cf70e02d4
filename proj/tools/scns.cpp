// Command-line front end: simulate / ensemble / verify / converge.
//
// Exit codes: 0 success, 1 validation error, 2 integrator blowup,
// 3 acceptance failure (verify/converge).

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "scns/converge.hpp"
#include "scns/diagnostics.hpp"
#include "scns/errors.hpp"
#include "scns/io.hpp"
#include "scns/verify.hpp"

namespace fs = std::filesystem;
using namespace scns;

namespace {

void write_run_manifest(const SimConfig& cfg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  write_manifest(make_manifest(cfg), out_dir / "manifest.json");
}

int cmd_simulate(const std::string& config_file, const std::string& out) {
  const SimConfig cfg = load_config(config_file);
  const fs::path out_dir{out};
  const auto u0 = make_initial_condition(cfg);
  const auto inc =
      sample_increments(cfg.seed, cfg.steps(), cfg.dt, cfg.noise.m());
  const auto traj = run_path(cfg, u0, inc);

  write_run_manifest(cfg, out_dir);
  write_timeseries(traj, out_dir / "timeseries.csv");
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    char name[48];
    std::snprintf(name, sizeof(name), "snapshot_%06zu.scns",
                  i * std::size_t(traj.snapshot_stride));
    write_snapshot(traj.snapshots[i], out_dir / name);
  }
  std::cout << "simulate: " << traj.times.size() - 1 << " steps, max constraint "
            << constraint_error(traj) << ", wrote " << out_dir.string() << "\n";
  return 0;
}

int cmd_ensemble(const std::string& config_file, int paths,
                 std::vector<double> p_list, const std::string& out,
                 int workers) {
  const SimConfig cfg = load_config(config_file);
  const fs::path out_dir{out};
  if (p_list.empty()) p_list = {1.0};
  const auto u0 = make_initial_condition(cfg);
  const auto stats = run_ensemble(cfg, u0, paths, p_list, workers);

  write_run_manifest(cfg, out_dir);
  write_ensemble_stats(stats, out_dir / "ensemble_stats.csv",
                       out_dir / "ensemble_summary.json");
  const auto check = moment_check(stats, std::sqrt(norms(u0).v_sq));
  std::cout << "ensemble: " << paths << " paths; moment bound " << check.summary
            << "\n";
  return 0;
}

int cmd_verify() {
  const auto report = run_verify_suite(std::cout);
  return report.pass() ? 0 : 3;
}

int cmd_converge(const std::string& config_file, int dt_levels, int n_levels,
                 const std::string& out) {
  const SimConfig cfg = load_config(config_file);
  const fs::path out_dir{out};
  fs::create_directories(out_dir);
  bool pass = true;

  if (dt_levels > 0) {
    const auto u0 = make_initial_condition(cfg);
    const auto study = dt_convergence_study(cfg, u0, dt_levels);
    print_study(std::cout, study);
    std::ofstream csv(out_dir / "converge_dt.csv");
    csv << "dt,strong_error\n";
    for (std::size_t l = 0; l < study.errors.size(); ++l)
      csv << study.dts[l] << ',' << study.errors[l] << '\n';
    pass = pass && study.pass;
  }
  if (n_levels > 0) {
    const auto study = n_convergence_study(cfg, n_levels);
    print_study(std::cout, study);
    std::ofstream csv(out_dir / "converge_n.csv");
    csv << "n_coarse,n_fine,strong_diff\n";
    for (std::size_t l = 0; l < study.diffs.size(); ++l)
      csv << study.cutoffs[l] << ',' << study.cutoffs[l + 1] << ','
          << study.diffs[l] << '\n';
    pass = pass && study.pass;
  }
  write_run_manifest(cfg, out_dir);
  return pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral simulator for constrained 2D Navier-Stokes with "
               "transport noise"};
  app.require_subcommand(1);

  std::string config_file, out_dir = "out";
  int paths = 64, workers = 0, dt_levels = 0, n_levels = 0;
  std::vector<double> p_list;

  auto* sim = app.add_subcommand("simulate", "integrate one path");
  sim->add_option("--config", config_file, "JSON config or manifest")
      ->required();
  sim->add_option("--out", out_dir, "output directory");

  auto* ens = app.add_subcommand("ensemble", "Monte Carlo over paths");
  ens->add_option("--config", config_file, "JSON config or manifest")
      ->required();
  ens->add_option("--paths", paths, "number of independent paths");
  ens->add_option("--p", p_list, "moment exponents (comma separated)")
      ->delimiter(',');
  ens->add_option("--workers", workers,
                  "worker threads (default: SCNS_WORKERS or OpenMP)");
  ens->add_option("--out", out_dir, "output directory");

  app.add_subcommand("verify", "run the operator identity suite");

  auto* conv = app.add_subcommand("converge", "refinement studies");
  conv->add_option("--config", config_file, "JSON config or manifest")
      ->required();
  conv->add_option("--dt-levels", dt_levels, "dt refinement levels (>= 3)");
  conv->add_option("--n-levels", n_levels, "Galerkin refinement levels (>= 3)");
  conv->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("simulate")) return cmd_simulate(config_file, out_dir);
    if (app.got_subcommand("ensemble"))
      return cmd_ensemble(config_file, paths, p_list, out_dir, workers);
    if (app.got_subcommand("verify")) return cmd_verify();
    if (app.got_subcommand("converge")) {
      if (dt_levels <= 0 && n_levels <= 0) {
        std::cerr << "converge: pass --dt-levels and/or --n-levels\n";
        return 1;
      }
      return cmd_converge(config_file, dt_levels, n_levels, out_dir);
    }
  } catch (const BlowupError& e) {
    std::cerr << "blowup: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
