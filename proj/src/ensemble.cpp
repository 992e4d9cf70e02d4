#include "scns/ensemble.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>

#include "scns/diagnostics.hpp"
#include "scns/errors.hpp"

namespace scns {

std::uint64_t derive_path_seed(std::uint64_t master, std::uint64_t path_index) {
  std::uint64_t x = master + 0x9E3779B97F4A7C15ULL * (path_index + 1);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double admissible_p_bound(const NoiseModel& model) {
  const double kc = model.k_c();
  if (kc <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 + 1.0 / (kc * kc);
}

namespace {

int resolve_workers(int workers) {
  if (workers > 0) return workers;
  if (const char* env = std::getenv("SCNS_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return omp_get_max_threads();
}

// Pairwise sum over [lo, hi); deterministic and exact for equal inputs when
// the count is a power of two.
double pairwise_sum(std::span<const double> x, std::size_t lo,
                    std::size_t hi) {
  const std::size_t n = hi - lo;
  if (n <= 4) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += x[i];
    return s;
  }
  const std::size_t mid = lo + n / 2;
  return pairwise_sum(x, lo, mid) + pairwise_sum(x, mid, hi);
}

double mean_of(std::span<const double> x) {
  return pairwise_sum(x, 0, x.size()) / double(x.size());
}

double se_of(std::span<const double> x, double mean) {
  if (x.size() < 2) return 0.0;
  std::vector<double> dev(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - mean;
    dev[i] = d * d;
  }
  const double var = pairwise_sum(dev, 0, dev.size()) / double(x.size() - 1);
  return std::sqrt(var / double(x.size()));
}

struct PathSummary {
  std::vector<double> v_sq;  // per time
  std::vector<double> mu;    // per time
  double int_da = 0.0;
  double int_diss = 0.0;
};

}  // namespace

EnsembleStats run_ensemble(const SimConfig& cfg, const SpectralVelocity& u0,
                           int n_paths, std::span<const double> p_list,
                           int workers) {
  if (n_paths < 2)
    throw ValidationError("run_ensemble: need at least 2 paths");
  const double bound = admissible_p_bound(cfg.noise);
  for (const double p : p_list) {
    if (!(p >= 1.0) || !(p < bound)) {
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "run_ensemble: moment exponent p = %.4g outside the "
                    "admissible range [1, %.4g) from Assumption (A.1)",
                    p, bound);
      throw ValidationError(buf);
    }
    // K_p = 2p [1 - K_c^2 (p-1)] > 0 exactly on the admissible range.
    const double kc = cfg.noise.k_c();
    const double k_p = 2.0 * p * (1.0 - kc * kc * (p - 1.0));
    if (!(k_p > 0.0))
      throw ValidationError("run_ensemble: K_p must be positive");
  }

  SimConfig path_cfg = cfg;
  path_cfg.snapshot_stride = 0;  // ensembles never keep fields
  const int steps = cfg.steps();

  const auto np = std::size_t(n_paths);
  std::vector<PathSummary> paths(np);
  std::exception_ptr failure = nullptr;

#pragma omp parallel for schedule(dynamic) num_threads(resolve_workers(workers))
  for (int i = 0; i < n_paths; ++i) {
    try {
      const auto seed = derive_path_seed(cfg.seed, std::uint64_t(i));
      const auto inc =
          sample_increments(seed, steps, cfg.dt, cfg.noise.m());
      const TrajectoryRecord traj = run_path(path_cfg, u0, inc);
      PathSummary& s = paths[std::size_t(i)];
      s.v_sq.resize(traj.times.size());
      s.mu.resize(traj.times.size());
      std::vector<double> da(traj.times.size()), diss(traj.times.size());
      for (std::size_t t = 0; t < traj.times.size(); ++t) {
        s.v_sq[t] = traj.diag[t].norm.v_sq;
        s.mu[t] = traj.diag[t].mu;
        const double h = traj.diag[t].norm.h;
        da[t] = h * h + traj.diag[t].norm.da_sq;  // graph norm squared
        diss[t] = traj.diag[t].dissipation;
      }
      s.int_da = trapezoid(traj.times, da);
      s.int_diss = trapezoid(traj.times, diss);
    } catch (...) {
#pragma omp critical
      {
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);

  // Fixed-order fold over path index; independent of scheduling above.
  EnsembleStats st;
  st.n_paths = n_paths;
  st.p_values.assign(p_list.begin(), p_list.end());
  st.times.resize(std::size_t(steps) + 1);
  for (int i = 0; i <= steps; ++i) st.times[std::size_t(i)] = i * cfg.dt;

  const std::size_t nt = st.times.size();
  st.mean_v_sq.resize(nt);
  st.se_v_sq.resize(nt);
  st.mean_mu.resize(nt);
  st.se_mu.resize(nt);
  st.mean_v_2p.assign(p_list.size(), std::vector<double>(nt));
  st.se_v_2p.assign(p_list.size(), std::vector<double>(nt));

  std::vector<double> col(np);
  for (std::size_t t = 0; t < nt; ++t) {
    for (int i = 0; i < n_paths; ++i) col[std::size_t(i)] = paths[std::size_t(i)].v_sq[t];
    st.mean_v_sq[t] = mean_of(col);
    st.se_v_sq[t] = se_of(col, st.mean_v_sq[t]);
    for (int i = 0; i < n_paths; ++i)
      col[std::size_t(i)] = paths[std::size_t(i)].mu[t];
    st.mean_mu[t] = mean_of(col);
    st.se_mu[t] = se_of(col, st.mean_mu[t]);
    for (std::size_t pi = 0; pi < p_list.size(); ++pi) {
      std::vector<double> powered(np);
      for (int i = 0; i < n_paths; ++i)
        powered[std::size_t(i)] =
            std::pow(paths[std::size_t(i)].v_sq[t], p_list[pi]);
      st.mean_v_2p[pi][t] = mean_of(powered);
      st.se_v_2p[pi][t] = se_of(powered, st.mean_v_2p[pi][t]);
    }
  }

  st.mean_sup_v_2p.resize(p_list.size());
  st.se_sup_v_2p.resize(p_list.size());
  for (std::size_t pi = 0; pi < p_list.size(); ++pi) {
    std::vector<double> sup(np);
    for (int i = 0; i < n_paths; ++i) {
      double mx = 0.0;
      for (const double v : paths[std::size_t(i)].v_sq) mx = std::max(mx, v);
      sup[std::size_t(i)] = std::pow(mx, p_list[pi]);
    }
    st.mean_sup_v_2p[pi] = mean_of(sup);
    st.se_sup_v_2p[pi] = se_of(sup, st.mean_sup_v_2p[pi]);
  }

  for (int i = 0; i < n_paths; ++i) col[std::size_t(i)] = paths[std::size_t(i)].int_da;
  st.mean_int_da = mean_of(col);
  st.se_int_da = se_of(col, st.mean_int_da);
  for (int i = 0; i < n_paths; ++i) col[std::size_t(i)] = paths[std::size_t(i)].int_diss;
  st.mean_int_diss = mean_of(col);
  st.se_int_diss = se_of(col, st.mean_int_diss);
  return st;
}

MomentCheckReport moment_check(const EnsembleStats& stats, double u0_v_norm) {
  MomentCheckReport rep;
  rep.pass = true;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  const double v0_sq = u0_v_norm * u0_v_norm;

  auto check_series = [&](std::span<const double> mean,
                          std::span<const double> se, double bound,
                          const std::string& what) {
    // Roundoff allowance: at t = 0 the bound holds with equality by
    // construction, so an ulp of slack is required, not a weaker band.
    const double slack = 1e-12 * std::max(1.0, bound);
    for (std::size_t t = 0; t < mean.size(); ++t) {
      const double margin = bound + 3.0 * se[t] - mean[t];
      if (margin < rep.worst_margin) {
        rep.worst_margin = margin;
        rep.worst_t = stats.times[t];
        rep.worst_what = what;
      }
      if (margin < -slack) rep.pass = false;
    }
  };

  check_series(stats.mean_v_sq, stats.se_v_sq, v0_sq, "E||u||_V^2");
  for (std::size_t pi = 0; pi < stats.p_values.size(); ++pi) {
    char what[64];
    std::snprintf(what, sizeof(what), "E||u||_V^{2p}, p = %g",
                  stats.p_values[pi]);
    check_series(stats.mean_v_2p[pi], stats.se_v_2p[pi],
                 std::pow(v0_sq, stats.p_values[pi]), what);
  }

  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "%s: worst margin %.6g at t = %.6g (%s)",
                rep.pass ? "pass" : "FAIL", rep.worst_margin, rep.worst_t,
                rep.worst_what.c_str());
  rep.summary = buf;
  return rep;
}

}  // namespace scns
