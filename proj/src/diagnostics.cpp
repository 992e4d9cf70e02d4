#include "scns/diagnostics.hpp"

#include <cmath>

#include "scns/errors.hpp"

namespace scns {

double constraint_error(const TrajectoryRecord& traj) {
  double worst = 0.0;
  for (const auto& d : traj.diag)
    worst = std::max(worst, d.constraint_err);
  return worst;
}

double trapezoid(std::span<const double> times,
                 std::span<const double> values) {
  if (times.size() != values.size())
    throw ValidationError("trapezoid: grid/value length mismatch");
  double s = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i)
    s += 0.5 * (times[i] - times[i - 1]) * (values[i] + values[i - 1]);
  return s;
}

std::vector<double> enstrophy_balance(const TrajectoryRecord& traj) {
  const std::size_t n = traj.times.size();
  std::vector<double> residual(n);
  const double v0 = traj.diag[0].norm.v_sq;
  double integral = 0.0;
  residual[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    integral += 0.5 * (traj.times[i] - traj.times[i - 1]) *
                (traj.diag[i].dissipation + traj.diag[i - 1].dissipation);
    residual[i] =
        traj.diag[i].norm.v_sq + 2.0 * integral - v0 - 2.0 * traj.diag[i].mu;
  }
  return residual;
}

StabilityReport stability_functional(const TrajectoryRecord& a,
                                     const TrajectoryRecord& b) {
  if (a.times != b.times)
    throw ValidationError("stability_functional: time grids differ");
  if (a.increments.dw != b.increments.dw ||
      a.increments.m != b.increments.m)
    throw ValidationError("stability_functional: Brownian increments differ");
  if (a.snapshot_stride != 1 || b.snapshot_stride != 1 ||
      a.snapshots.size() != a.times.size() ||
      b.snapshots.size() != b.times.size())
    throw ValidationError(
        "stability_functional: per-step snapshots required (stride 1)");

  StabilityReport rep;
  rep.times = a.times;
  const std::size_t n = a.times.size();
  rep.r_of_t.resize(n);
  rep.weighted_dist.resize(n);

  auto integrand = [&](std::size_t i) {
    const double v1 = a.diag[i].norm.v_sq;
    const double v2 = b.diag[i].norm.v_sq;
    const double g = std::sqrt(v1) + std::sqrt(v2);
    const double h1 = a.diag[i].norm.h;
    return 8.0 * v1 + 2.0 * g * g * h1 * h1;
  };

  double r = 0.0;
  rep.r_of_t[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      r += 0.5 * (a.times[i] - a.times[i - 1]) *
           (integrand(i) + integrand(i - 1));
      rep.r_of_t[i] = r;
    }
    const SpectralVelocity diff = sub(a.snapshots[i], b.snapshots[i]);
    const double dist = norms(diff).h;
    rep.weighted_dist[i] = std::exp(-rep.r_of_t[i]) * dist * dist;
  }
  double violation = 0.0;
  for (std::size_t i = 1; i < n; ++i)
    violation =
        std::max(violation, rep.weighted_dist[i] - rep.weighted_dist[i - 1]);
  rep.monotone_violation = std::max(0.0, violation);
  return rep;
}

MartingaleStat martingale_stat(std::span<const TrajectoryRecord> records,
                               double t) {
  if (records.empty())
    throw ValidationError("martingale_stat: empty ensemble");
  MartingaleStat st;
  double sum = 0.0;
  for (const auto& r : records) sum += r.at_time(t).mu;
  st.mean = sum / double(records.size());
  if (records.size() < 2) {
    st.se_defined = false;
    return st;
  }
  double ss = 0.0;
  for (const auto& r : records) {
    const double d = r.at_time(t).mu - st.mean;
    ss += d * d;
  }
  st.se = std::sqrt(ss / double(records.size() - 1)) /
          std::sqrt(double(records.size()));
  st.se_defined = true;
  return st;
}

}  // namespace scns
