#pragma once

#include <span>
#include <vector>

#include "scns/integrator.hpp"

namespace scns {

/// max_t | |u(t)|_H - 1 |.
double constraint_error(const TrajectoryRecord& traj);

/// Residual of the pathwise enstrophy identity,
/// R(t) = ||u(t)||_V^2 + 2 int_0^t D ds - ||u0||_V^2 - 2 mu(t),
/// with the time integral by trapezoid on the step grid.
std::vector<double> enstrophy_balance(const TrajectoryRecord& traj);

/// Weighted two-trajectory stability functional:
/// r(t) = int_0^t [ 8 ||u1||_V^2 + 2 (|grad u1| + |grad u2|)^2 |u1|_H^2 ] ds,
/// weighted_dist(t) = e^{-r(t)} |u1(t) - u2(t)|_H^2.
struct StabilityReport {
  std::vector<double> times;
  std::vector<double> r_of_t;          // non-decreasing, r[0] = 0
  std::vector<double> weighted_dist;
  double monotone_violation = 0.0;     // max positive jump of weighted_dist
};

/// Requires both records to carry snapshots at every step and to share the
/// time grid and Brownian increments.
StabilityReport stability_functional(const TrajectoryRecord& traj1,
                                     const TrajectoryRecord& traj2);

struct MartingaleStat {
  double mean = 0.0;
  double se = 0.0;
  bool se_defined = false;  // false for a single path
};

/// Sample mean and standard error of mu(t) across an ensemble of records.
MartingaleStat martingale_stat(std::span<const TrajectoryRecord> records,
                               double t);

/// Trapezoid rule on a shared time grid.
double trapezoid(std::span<const double> times, std::span<const double> values);

}  // namespace scns
