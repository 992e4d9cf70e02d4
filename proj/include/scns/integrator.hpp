#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scns/operators.hpp"
#include "scns/spectral.hpp"

namespace scns {

/// Discretized Brownian drivers: dw[i*m + j] ~ Normal(0, dt), deterministic
/// in (seed, level). `level` counts bridge refinements from the originally
/// sampled grid (level 0).
struct BrownianIncrements {
  double dt = 0.0;
  int m = 0;
  std::uint64_t seed = 0;
  int level = 0;
  std::vector<double> dw;

  int steps() const { return m == 0 ? steps_no_noise : int(dw.size()) / m; }
  std::span<const double> row(int i) const {
    return {dw.data() + std::size_t(i) * m, std::size_t(m)};
  }
  int steps_no_noise = 0;  // step count when m == 0 (dw is empty)
};

BrownianIncrements sample_increments(std::uint64_t seed, int steps, double dt,
                                     int m);

/// Conditional (Brownian bridge) refinement: halves dt, doubles the step
/// count, and the two fine increments of each coarse step sum to the coarse
/// increment exactly. Bridge noise is seeded from (seed, level+1), so a
/// refinement chain is reproducible from the original seed alone.
BrownianIncrements refine(const BrownianIncrements& inc);

enum class Scheme { splitting, heun };

/// How the initial field is built (echoed verbatim into manifests).
struct InitialSpec {
  enum class Kind { random, eigenmode };
  Kind kind = Kind::random;
  double decay = 3.0;
  std::uint64_t seed = 0;
  ModeIndex k{1, 0};  // eigenmode only
};

struct SimConfig {
  int n_max = 0;
  double dt = 0.0;
  double t_end = 0.0;
  Scheme scheme = Scheme::splitting;
  bool project_each_step = true;
  std::uint64_t seed = 0;
  int snapshot_stride = 0;  // 0 = no snapshots
  NoiseModel noise;
  InitialSpec initial;

  int steps() const;  // t_end/dt, validated integral
};

/// Per-step diagnostics: the three norms, the dissipation
/// D = |Au - ||u||_V^2 u|_H^2, the constraint defect ||u|_H - 1|, and the
/// running left-point stochastic integral mu = sum_j int <Au, C_j u> dW_j.
struct StepDiag {
  NormTriple norm;
  double dissipation = 0.0;
  double constraint_err = 0.0;
  double mu = 0.0;
};

struct TrajectoryRecord {
  std::vector<double> times;    // times[0] = 0, strictly increasing
  std::vector<StepDiag> diag;   // one entry per time
  BrownianIncrements increments;
  int snapshot_stride = 0;
  std::vector<SpectralVelocity> snapshots;  // at times[i*stride]

  const StepDiag& at_time(double t) const;  // exact grid lookup
};

/// Exact flow of the pure Stratonovich noise over one step:
/// psi_k -> e^{i sum_j (c_j.k) dw_j} psi_k. Preserves every norm.
SpectralVelocity noise_flow_exact(const NoiseModel& model,
                                  const SpectralVelocity& u,
                                  std::span<const double> dw);

/// Strang step: half noise flow, one deterministic drift step (two explicit
/// midpoint half-steps), half noise flow, optional renormalization.
SpectralVelocity step_splitting(const SimConfig& cfg, const SpectralVelocity& u,
                                std::span<const double> dw);

/// Stratonovich Heun predictor-corrector step, optional renormalization.
SpectralVelocity step_heun(const SimConfig& cfg, const SpectralVelocity& u,
                           std::span<const double> dw);

/// Integrates the configured scheme over all increments, recording
/// diagnostics at every step and snapshots at the configured stride.
TrajectoryRecord run_path(const SimConfig& cfg, const SpectralVelocity& u0,
                          const BrownianIncrements& inc);

}  // namespace scns
