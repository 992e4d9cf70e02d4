#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scns/integrator.hpp"

namespace scns {

/// SplitMix64 mix of (master, path index). Injective over the full index
/// range; changing the master reseeds every path.
std::uint64_t derive_path_seed(std::uint64_t master, std::uint64_t path_index);

/// Largest admissible moment exponent: p < 1 + 1/K_c^2 (infinite for
/// noiseless models).
double admissible_p_bound(const NoiseModel& model);

/// Monte Carlo aggregates over independent paths. All means/SEs are reduced
/// with pairwise summation in fixed path order, so results do not depend on
/// the worker count.
struct EnsembleStats {
  int n_paths = 0;
  std::vector<double> times;
  std::vector<double> p_values;

  std::vector<double> mean_v_sq;  // per time: E ||u(t)||_V^2
  std::vector<double> se_v_sq;

  std::vector<double> mean_mu;  // per time: E mu(t) (left-point integral)
  std::vector<double> se_mu;

  // Per requested p, per time: E ||u(t)||_V^{2p}.
  std::vector<std::vector<double>> mean_v_2p;
  std::vector<std::vector<double>> se_v_2p;

  // Per requested p: E sup_t ||u||_V^{2p} (sup over the step grid).
  std::vector<double> mean_sup_v_2p;
  std::vector<double> se_sup_v_2p;

  double mean_int_da = 0.0;  // E int_0^T |u|_{D(A)}^2 dt (graph norm)
  double se_int_da = 0.0;
  double mean_int_diss = 0.0;  // E int_0^T |Au - ||u||_V^2 u|_H^2 dt
  double se_int_diss = 0.0;
};

/// Runs n_paths independent paths (seeds derived from cfg.seed) and
/// aggregates. `workers` <= 0 reads the SCNS_WORKERS environment variable,
/// falling back to the OpenMP default.
EnsembleStats run_ensemble(const SimConfig& cfg, const SpectralVelocity& u0,
                           int n_paths, std::span<const double> p_list,
                           int workers = 0);

struct MomentCheckReport {
  bool pass = false;
  double worst_margin = 0.0;  // min over checks of bound + 3SE - mean
  double worst_t = 0.0;
  std::string worst_what;
  std::string summary;
};

/// Checks E||u(t)||_V^{2p} <= ||u0||_V^{2p} + 3 SE at every recorded time,
/// for p = 1 and each requested p.
MomentCheckReport moment_check(const EnsembleStats& stats, double u0_v_norm);

}  // namespace scns
