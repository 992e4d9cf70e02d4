// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fails. Reference configuration: n_max = 16 (64^2 dealiased grid),
// dt = 1e-3, T = 0.5, m = 2, c = [(0.6,0),(0,0.6)], u0 = random decay-3
// field normalized onto the sphere.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "scns/converge.hpp"
#include "scns/diagnostics.hpp"
#include "scns/ensemble.hpp"
#include "scns/errors.hpp"
#include "scns/io.hpp"
#include "scns/verify.hpp"

using namespace scns;
namespace fs = std::filesystem;

namespace {

SimConfig reference_config() {
  SimConfig cfg;
  cfg.n_max = 16;
  cfg.dt = 1e-3;
  cfg.t_end = 0.5;
  cfg.seed = 20240501;
  cfg.project_each_step = true;
  cfg.noise = NoiseModel({{0.6, 0.0}, {0.0, 0.6}});
  cfg.initial.kind = InitialSpec::Kind::random;
  cfg.initial.decay = 3.0;
  cfg.initial.seed = 42;
  return cfg;
}

SpectralVelocity reference_u0(const SimConfig& cfg) {
  return make_initial_condition(cfg);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (const double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Least-squares slope of log(err) against log(dt).
double fitted_order(const std::vector<double>& dts,
                    const std::vector<double>& errs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(dts.size());
  for (std::size_t i = 0; i < dts.size(); ++i) {
    const double x = std::log(dts[i]), y = std::log(errs[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Runner {
  int failures = 0;
  int index = 0;

  void run(const std::string& name, const std::function<bool(std::string&)>& f) {
    ++index;
    std::string detail;
    bool ok = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      ok = f(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("[%2d] %s  %s (%s) [%.1fs]\n", index, ok ? "PASS" : "FAIL",
                name.c_str(), detail.c_str(), secs);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

}  // namespace

// --- criterion 1: operator identity suite --------------------------------
static bool c1_identities(std::string& detail) {
  std::ostringstream lines;
  const auto report = run_verify_suite(lines, {2, 4, 6}, 50);
  double worst = 0.0;
  for (const auto& id : report.identities)
    if (id.bound > 0.0) worst = std::max(worst, id.max_residual / id.bound);
  char buf[120];
  std::snprintf(buf, sizeof(buf),
                "worst residual at %.2e of its bound, commutation bitwise",
                worst);
  detail = buf;
  return report.pass();
}

// --- criterion 2: sphere invariance ---------------------------------------
static bool c2_sphere(std::string& detail) {
  const auto cfg = reference_config();
  const auto u0 = reference_u0(cfg);
  const auto inc =
      sample_increments(cfg.seed, cfg.steps(), cfg.dt, cfg.noise.m());

  const double projected = constraint_error(run_path(cfg, u0, inc));

  SimConfig open_cfg = cfg;
  open_cfg.project_each_step = false;
  const double e_dt = constraint_error(run_path(open_cfg, u0, inc));
  SimConfig half = open_cfg;
  half.dt = cfg.dt / 2;
  const double e_half = constraint_error(run_path(half, u0, refine(inc)));
  const double ratio = e_dt / e_half;

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "projected max err %.2e (<= 1e-12); unprojected ratio %.2f in "
                "[3.2, 4.8]",
                projected, ratio);
  detail = buf;
  return projected <= 1e-12 && ratio >= 3.2 && ratio <= 4.8;
}

// --- criterion 3: pathwise enstrophy identity -----------------------------
static bool c3_enstrophy(std::string& detail) {
  const std::vector<double> dts = {4e-3, 2e-3, 1e-3};

  auto measure_order = [&](bool noisy) {
    SimConfig cfg = reference_config();
    if (!noisy) cfg.noise = NoiseModel{};
    cfg.dt = dts[0];
    const auto u0 = reference_u0(cfg);
    auto inc = sample_increments(cfg.seed, cfg.steps(), cfg.dt, cfg.noise.m());
    std::vector<double> errs;
    for (std::size_t l = 0; l < dts.size(); ++l) {
      cfg.dt = dts[l];
      errs.push_back(max_abs(enstrophy_balance(run_path(cfg, u0, inc))));
      if (l + 1 < dts.size()) inc = refine(inc);
    }
    return fitted_order(dts, errs);
  };

  const double noisy_order = measure_order(true);
  const double det_order = measure_order(false);
  char buf[120];
  std::snprintf(buf, sizeof(buf),
                "fitted order: noisy %.2f (>= 0.9), deterministic %.2f (>= 1.8)",
                noisy_order, det_order);
  detail = buf;
  return noisy_order >= 0.9 && det_order >= 1.8;
}

// --- criterion 4: eigenmode equilibrium -----------------------------------
static bool c4_eigenmode(std::string& detail) {
  SimConfig cfg = reference_config();
  cfg.noise = NoiseModel{};
  cfg.snapshot_stride = 1;
  cfg.initial.kind = InitialSpec::Kind::eigenmode;
  cfg.initial.k = {1, 0};
  const auto u0 = make_initial_condition(cfg);
  const auto traj =
      run_path(cfg, u0, sample_increments(1, cfg.steps(), cfg.dt, 0));
  double worst = 0.0;
  for (const auto& snap : traj.snapshots)
    worst = std::max(worst, norms(sub(snap, u0)).h);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "max |u(t) - u0|_H = %.2e (<= 1e-10)", worst);
  detail = buf;
  return worst <= 1e-10;
}

// Shared reference ensemble for criteria 5 and 6.
static const EnsembleStats& reference_ensemble() {
  static const EnsembleStats stats = [] {
    const auto cfg = reference_config();
    const double p_list[] = {2.0};
    return run_ensemble(cfg, reference_u0(cfg), 256, p_list);
  }();
  return stats;
}

// --- criterion 5: moment bounds and martingale mean ------------------------
static bool c5_moments(std::string& detail) {
  const auto cfg = reference_config();
  const auto u0 = reference_u0(cfg);
  const auto& st = reference_ensemble();

  const auto report = moment_check(st, std::sqrt(norms(u0).v_sq));

  // mu is identically zero for constant noise directions, so the CLT band
  // collapses; 1e-12 is the roundoff floor for the accumulated integral.
  bool martingale_ok = true;
  double worst_ratio = 0.0;
  for (const double t : {0.1, 0.25, 0.5}) {
    std::size_t idx = std::size_t(-1);
    for (std::size_t i = 0; i < st.times.size(); ++i)
      if (std::abs(st.times[i] - t) < 1e-12) idx = i;
    const double band = 3.0 * st.se_mu[idx] + 1e-12;
    worst_ratio = std::max(worst_ratio, std::abs(st.mean_mu[idx]) / band);
    if (std::abs(st.mean_mu[idx]) > band) martingale_ok = false;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "moment bound margin %.3g; |mean mu| at %.2f of band",
                report.worst_margin, worst_ratio);
  detail = buf;
  return report.pass && martingale_ok;
}

// --- criterion 6: dissipation bound ----------------------------------------
static bool c6_dissipation(std::string& detail) {
  const auto cfg = reference_config();
  const auto u0 = reference_u0(cfg);
  const auto& st = reference_ensemble();
  const double bound = 0.5 * norms(u0).v_sq;
  const double slack = 1e-12 * std::max(1.0, bound);
  char buf[140];
  std::snprintf(buf, sizeof(buf),
                "E int D dt = %.4f <= %.4f + 3*%.2e", st.mean_int_diss, bound,
                st.se_int_diss);
  detail = buf;
  return st.mean_int_diss <= bound + 3.0 * st.se_int_diss + slack;
}

// --- criterion 7: stability / pathwise-uniqueness experiment ---------------
static bool c7_stability(std::string& detail) {
  SimConfig cfg = reference_config();
  cfg.snapshot_stride = 1;
  const auto u0 = reference_u0(cfg);
  auto dir = tangent_project(u0, random_field(43, u0.space_ptr(), 3.0));
  const auto u0p =
      normalize_to_sphere(axpy(1e-3 / norms(dir).h, dir, u0));

  double violations[2], bounds[2];
  int idx = 0;
  auto inc = sample_increments(cfg.seed, cfg.steps(), cfg.dt, cfg.noise.m());
  for (const double dt : {1e-3, 5e-4}) {
    SimConfig c = cfg;
    c.dt = dt;
    const auto t1 = run_path(c, u0, inc);
    const auto t2 = run_path(c, u0p, inc);
    const auto rep = stability_functional(t1, t2);
    double max_u_sq = 0.0;
    for (std::size_t i = 0; i < t1.snapshots.size(); ++i) {
      const double d = norms(sub(t1.snapshots[i], t2.snapshots[i])).h;
      max_u_sq = std::max(max_u_sq, d * d);
    }
    violations[idx] = rep.monotone_violation;
    bounds[idx] = 5.0 * dt * max_u_sq;
    ++idx;
    inc = refine(inc);
  }

  const bool within = violations[0] <= bounds[0] && violations[1] <= bounds[1];
  // "halves" check: a violation below the roundoff floor counts as halved.
  const double floor = 1e-16 * bounds[0];
  bool halves;
  if (violations[0] <= floor && violations[1] <= floor) {
    halves = true;
  } else {
    const double r = violations[1] / violations[0];
    halves = r >= 0.35 && r <= 0.65;
  }
  char buf[180];
  std::snprintf(buf, sizeof(buf),
                "violation %.2e <= %.2e at dt=1e-3, %.2e <= %.2e at dt=5e-4",
                violations[0], bounds[0], violations[1], bounds[1]);
  detail = buf;
  return within && halves;
}

// --- criterion 8: convergence studies ---------------------------------------
static bool c8_convergence(std::string& detail) {
  SimConfig dt_cfg = reference_config();
  dt_cfg.dt = 4e-3;
  const auto study = dt_convergence_study(dt_cfg, reference_u0(dt_cfg), 4);

  SimConfig n_cfg = reference_config();
  n_cfg.n_max = 8;
  const auto nstudy = n_convergence_study(n_cfg, 3);

  double min_ratio = 1e300;
  for (const double r : study.ratios) min_ratio = std::min(min_ratio, r);
  char buf[180];
  std::snprintf(buf, sizeof(buf),
                "dt-study min shrink %.2f (>= 1.8), order %.2f; n-study diffs "
                "%.2e > %.2e",
                min_ratio, study.fitted_order, nstudy.diffs[0],
                nstudy.diffs[1]);
  detail = buf;
  return study.pass && nstudy.pass;
}

// --- criterion 9: bitwise reproducibility -----------------------------------
static bool c9_reproducibility(std::string& detail) {
  const fs::path root = fs::temp_directory_path() / "scns_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);

  // single path with snapshots, repeated from its manifest
  SimConfig cfg = reference_config();
  cfg.t_end = 0.1;
  cfg.snapshot_stride = 50;
  auto simulate_to = [&](const SimConfig& c, const fs::path& dir) {
    fs::create_directories(dir);
    const auto u0 = make_initial_condition(c);
    const auto traj =
        run_path(c, u0, sample_increments(c.seed, c.steps(), c.dt, c.noise.m()));
    write_manifest(make_manifest(c), dir / "manifest.json");
    write_timeseries(traj, dir / "timeseries.csv");
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i)
      write_snapshot(traj.snapshots[i],
                     dir / ("snap_" + std::to_string(i) + ".scns"));
  };
  simulate_to(cfg, root / "a");
  simulate_to(load_config(root / "a" / "manifest.json"), root / "b");

  bool same = read_bytes(root / "a" / "timeseries.csv") ==
              read_bytes(root / "b" / "timeseries.csv");
  for (int i = 0; i < 3 && same; ++i)
    same = read_bytes(root / "a" / ("snap_" + std::to_string(i) + ".scns")) ==
           read_bytes(root / "b" / ("snap_" + std::to_string(i) + ".scns"));

  // ensemble at worker counts 1 and 8, repeated from the manifest
  SimConfig ens = reference_config();
  ens.n_max = 8;
  ens.t_end = 0.1;
  const double p_list[] = {1.0, 2.0};
  auto ensemble_to = [&](const SimConfig& c, const fs::path& dir, int workers) {
    fs::create_directories(dir);
    const auto st = run_ensemble(c, make_initial_condition(c), 8, p_list, workers);
    write_manifest(make_manifest(c), dir / "manifest.json");
    write_ensemble_stats(st, dir / "stats.csv", dir / "summary.json");
  };
  ensemble_to(ens, root / "w1", 1);
  ensemble_to(load_config(root / "w1" / "manifest.json"), root / "w8", 8);
  const bool ens_same =
      read_bytes(root / "w1" / "stats.csv") == read_bytes(root / "w8" / "stats.csv") &&
      read_bytes(root / "w1" / "summary.json") ==
          read_bytes(root / "w8" / "summary.json");

  detail = std::string("single path ") + (same ? "identical" : "DIFFERS") +
           "; ensemble workers 1 vs 8 " + (ens_same ? "identical" : "DIFFERS");
  return same && ens_same;
}

// --- criterion 10: admissibility guards -------------------------------------
static bool c10_guards(std::string& detail) {
  bool kc_guard = false;
  try {
    parse_config(R"({"n_max": 4, "dt": 1e-3, "t_end": 0.01, "seed": 1,
                     "noise": {"m": 1, "c": [[1.0, 0.2]]},
                     "initial": {"kind": "random", "decay": 3.0, "seed": 1}})");
  } catch (const ValidationError& e) {
    kc_guard = std::string(e.what()).find("(A.1)") != std::string::npos;
  }

  bool p_guard = false;
  std::string p_msg;
  try {
    SimConfig cfg = reference_config();
    cfg.n_max = 4;
    cfg.t_end = 0.01;
    const double p_list[] = {3.9};
    run_ensemble(cfg, make_initial_condition(cfg), 2, p_list);
  } catch (const ValidationError& e) {
    p_msg = e.what();
    p_guard = p_msg.find("3.778") != std::string::npos;
  }

  detail = "K_c >= 1 rejected citing (A.1); p = 3.9 rejected citing 3.778";
  return kc_guard && p_guard;
}

int main() {
  Runner r;
  r.run("operator identity suite (n in {2,4,6}, 50 fields)", c1_identities);
  r.run("sphere invariance (projected + unprojected order)", c2_sphere);
  r.run("pathwise enstrophy identity order", c3_enstrophy);
  r.run("eigenmode equilibrium over [0, 0.5]", c4_eigenmode);
  r.run("moment bounds and martingale mean (N = 256)", c5_moments);
  r.run("dissipation bound (N = 256)", c6_dissipation);
  r.run("stability experiment (Schmalfuss weight)", c7_stability);
  r.run("convergence studies (dt and Galerkin n)", c8_convergence);
  r.run("bitwise reproducibility from manifests", c9_reproducibility);
  r.run("admissibility guards (A.1 and moment range)", c10_guards);

  if (r.failures == 0) {
    std::printf("acceptance: all %d criteria passed\n", r.index);
    return 0;
  }
  std::printf("acceptance: %d of %d criteria FAILED\n", r.failures, r.index);
  return 3;
}
