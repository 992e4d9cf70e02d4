#include "scns/converge.hpp"

#include <cmath>
#include <cstdio>

#include "scns/errors.hpp"
#include "scns/io.hpp"

namespace scns {

namespace {

// Max H-distance over the coarse snapshot grid; `fine` holds snapshots at a
// stride that lands on the same times.
double strong_distance(const TrajectoryRecord& coarse,
                       const TrajectoryRecord& fine) {
  double worst = 0.0;
  for (std::size_t i = 0; i < coarse.snapshots.size(); ++i)
    worst = std::max(
        worst, norms(sub(coarse.snapshots[i], fine.snapshots[i])).h);
  return worst;
}

}  // namespace

DtStudy dt_convergence_study(const SimConfig& base, const SpectralVelocity& u0,
                             int levels) {
  if (levels < 3)
    throw ValidationError("dt study: need at least 3 refinement levels");
  const int steps0 = base.steps();

  std::vector<TrajectoryRecord> trajs;
  BrownianIncrements inc =
      sample_increments(base.seed, steps0, base.dt, base.noise.m());
  for (int l = 0; l < levels; ++l) {
    SimConfig cfg = base;
    cfg.dt = inc.dt;
    cfg.snapshot_stride = 1 << l;  // snapshots on the level-0 grid
    trajs.push_back(run_path(cfg, u0, inc));
    if (l + 1 < levels) inc = refine(inc);
  }

  DtStudy s;
  for (int l = 0; l < levels; ++l)
    s.dts.push_back(base.dt / double(1 << l));
  for (int l = 0; l + 1 < levels; ++l)
    s.errors.push_back(strong_distance(trajs[std::size_t(l)],
                                       trajs[std::size_t(l) + 1]));
  for (std::size_t l = 0; l + 1 < s.errors.size(); ++l)
    s.ratios.push_back(s.errors[l] / s.errors[l + 1]);

  // Least-squares slope of log e against log dt.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = double(s.errors.size());
  for (std::size_t l = 0; l < s.errors.size(); ++l) {
    const double x = std::log(s.dts[l]);
    const double y = std::log(s.errors[l]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  s.fitted_order = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  s.pass = true;
  for (const double r : s.ratios)
    if (!(r >= 1.8)) s.pass = false;
  return s;
}

NStudy n_convergence_study(const SimConfig& base, int levels) {
  if (levels < 3)
    throw ValidationError("n study: need at least 3 cutoff levels");
  const int steps = base.steps();
  const auto inc =
      sample_increments(base.seed, steps, base.dt, base.noise.m());

  NStudy s;
  for (int l = 0; l < levels; ++l) s.cutoffs.push_back(base.n_max << l);

  // Common initial field: built on the coarsest space, zero-padded upward,
  // so every level starts from the same element of H.
  SimConfig coarse_cfg = base;
  const SpectralVelocity u0 = make_initial_condition(coarse_cfg);

  std::vector<TrajectoryRecord> trajs;
  for (int l = 0; l < levels; ++l) {
    SimConfig cfg = base;
    cfg.n_max = s.cutoffs[std::size_t(l)];
    cfg.snapshot_stride = 1;
    trajs.push_back(run_path(cfg, embed(build_space(cfg.n_max), u0), inc));
  }

  for (int l = 0; l + 1 < levels; ++l) {
    const auto fine_space = build_space(s.cutoffs[std::size_t(l) + 1]);
    double worst = 0.0;
    for (std::size_t i = 0; i < trajs[std::size_t(l)].snapshots.size(); ++i) {
      const auto lifted =
          embed(fine_space, trajs[std::size_t(l)].snapshots[i]);
      worst = std::max(
          worst,
          norms(sub(lifted, trajs[std::size_t(l) + 1].snapshots[i])).h);
    }
    s.diffs.push_back(worst);
  }
  s.pass = true;
  for (std::size_t l = 0; l + 1 < s.diffs.size(); ++l)
    if (!(s.diffs[l] > s.diffs[l + 1])) s.pass = false;
  return s;
}

void print_study(std::ostream& out, const DtStudy& s) {
  out << "dt-refinement study (strong error in C([0,T];H))\n";
  for (std::size_t l = 0; l < s.errors.size(); ++l) {
    char line[120];
    std::snprintf(line, sizeof(line), "  dt = %-10.4g |u - u_half| = %.6e%s",
                  s.dts[l], s.errors[l],
                  l < s.ratios.size()
                      ? ("  ratio " + std::to_string(s.ratios[l])).c_str()
                      : "");
    out << line << '\n';
  }
  char tail[80];
  std::snprintf(tail, sizeof(tail), "  fitted order %.3f  %s\n",
                s.fitted_order, s.pass ? "PASS" : "FAIL");
  out << tail;
}

void print_study(std::ostream& out, const NStudy& s) {
  out << "Galerkin n-refinement study (C([0,T];H) differences)\n";
  for (std::size_t l = 0; l < s.diffs.size(); ++l) {
    char line[120];
    std::snprintf(line, sizeof(line), "  n = %-4d vs n = %-4d  |diff| = %.6e",
                  s.cutoffs[l], s.cutoffs[l + 1], s.diffs[l]);
    out << line << '\n';
  }
  out << "  " << (s.pass ? "PASS (strictly decreasing)" : "FAIL") << '\n';
}

}  // namespace scns
