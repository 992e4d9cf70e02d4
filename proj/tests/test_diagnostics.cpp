#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "scns/diagnostics.hpp"
#include "scns/errors.hpp"

using namespace scns;

namespace {
SimConfig base_config() {
  SimConfig cfg;
  cfg.n_max = 8;
  cfg.dt = 1e-3;
  cfg.t_end = 0.1;
  cfg.seed = 7;
  cfg.noise = NoiseModel({{0.6, 0.0}, {0.0, 0.6}});
  return cfg;
}

TrajectoryRecord run(const SimConfig& cfg, const SpectralVelocity& u0,
                     std::uint64_t inc_seed) {
  return run_path(cfg, u0,
                  sample_increments(inc_seed, cfg.steps(), cfg.dt,
                                    cfg.noise.m()));
}
}  // namespace

TEST_CASE("constraint_error") {
  auto cfg = base_config();
  auto space = build_space(cfg.n_max);
  auto u0 = random_field(1, space, 3.0);
  CHECK(constraint_error(run(cfg, u0, 2)) <= 1e-12);

  SUBCASE("single-entry record reduces to |h0 - 1|") {
    TrajectoryRecord t;
    t.times = {0.0};
    StepDiag d;
    d.norm = norms(u0);
    d.constraint_err = std::abs(d.norm.h - 1.0);
    t.diag = {d};
    CHECK(constraint_error(t) == std::abs(norms(u0).h - 1.0));
  }
  SUBCASE("unprojected error scales like dt^2") {
    SimConfig c = cfg;
    c.project_each_step = false;
    auto inc = sample_increments(3, c.steps(), c.dt, 2);
    const double e1 = constraint_error(run_path(c, u0, inc));
    SimConfig h = c;
    h.dt = c.dt / 2;
    const double e2 = constraint_error(run_path(h, u0, refine(inc)));
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.25));
  }
}

TEST_CASE("enstrophy_balance") {
  auto cfg = base_config();
  auto space = build_space(cfg.n_max);

  SUBCASE("eigenmode equilibrium: residual vanishes") {
    SimConfig c = cfg;
    c.noise = NoiseModel{};
    auto R = enstrophy_balance(run(c, eigenmode_field(space, {1, 0}), 4));
    for (const double r : R) CHECK(std::abs(r) <= 1e-10);
  }
  SUBCASE("deterministic residual shrinks with order >= 0.9") {
    SimConfig c = cfg;
    c.noise = NoiseModel{};
    c.dt = 2e-3;
    auto u0 = random_field(5, space, 3.0);
    double prev = 0.0;
    for (int level = 0; level < 2; ++level) {
      auto R = enstrophy_balance(run(c, u0, 6));
      double mx = 0.0;
      for (const double r : R) mx = std::max(mx, std::abs(r));
      if (level) CHECK(prev / mx >= std::pow(2.0, 0.9));
      prev = mx;
      c.dt /= 2;
    }
  }
  SUBCASE("noisy residual shrinks under bridge refinement") {
    SimConfig c = cfg;
    c.dt = 2e-3;
    auto u0 = random_field(5, space, 3.0);
    auto inc = sample_increments(8, c.steps(), c.dt, 2);
    auto max_resid = [](const std::vector<double>& R) {
      double mx = 0.0;
      for (const double r : R) mx = std::max(mx, std::abs(r));
      return mx;
    };
    const double r1 = max_resid(enstrophy_balance(run_path(c, u0, inc)));
    SimConfig h = c;
    h.dt = c.dt / 2;
    const double r2 = max_resid(enstrophy_balance(run_path(h, u0, refine(inc))));
    CHECK(r2 < r1);
  }
  SUBCASE("deterministic residual is seed-independent") {
    SimConfig c = cfg;
    c.noise = NoiseModel{};
    auto u0 = random_field(5, space, 3.0);
    auto ra = enstrophy_balance(run(c, u0, 1));
    auto rb = enstrophy_balance(run(c, u0, 2));
    CHECK(ra == rb);
  }
}

TEST_CASE("stability_functional") {
  auto cfg = base_config();
  cfg.snapshot_stride = 1;
  auto space = build_space(cfg.n_max);
  auto u0 = random_field(1, space, 3.0);
  auto inc = sample_increments(9, cfg.steps(), cfg.dt, 2);

  SUBCASE("a trajectory against itself is identically zero") {
    auto t1 = run_path(cfg, u0, inc);
    auto rep = stability_functional(t1, t1);
    for (const double w : rep.weighted_dist) CHECK(w == 0.0);
    CHECK(rep.monotone_violation == 0.0);
    CHECK(rep.r_of_t.front() == 0.0);
    for (std::size_t i = 1; i < rep.r_of_t.size(); ++i)
      CHECK(rep.r_of_t[i] >= rep.r_of_t[i - 1]);
  }
  SUBCASE("perturbed initial data: weighted distance stays monotone") {
    auto dir = tangent_project(u0, random_field(2, space, 3.0));
    auto u0p = normalize_to_sphere(axpy(1e-3 / norms(dir).h, dir, u0));
    auto t1 = run_path(cfg, u0, inc);
    auto t2 = run_path(cfg, u0p, inc);
    auto rep = stability_functional(t1, t2);
    CHECK(rep.weighted_dist.front() ==
          doctest::Approx(std::pow(norms(sub(u0, u0p)).h, 2)).epsilon(1e-12));
    double max_u_sq = 0.0;
    for (std::size_t i = 0; i < t1.snapshots.size(); ++i) {
      const double d = norms(sub(t1.snapshots[i], t2.snapshots[i])).h;
      max_u_sq = std::max(max_u_sq, d * d);
    }
    CHECK(rep.monotone_violation <= 5.0 * cfg.dt * max_u_sq);
  }
  SUBCASE("zero noise, distinct eigenmodes: bounded by the initial value") {
    SimConfig c = cfg;
    c.noise = NoiseModel{};
    auto inc0 = sample_increments(1, c.steps(), c.dt, 0);
    auto t1 = run_path(c, eigenmode_field(space, {1, 0}), inc0);
    auto t2 = run_path(c, eigenmode_field(space, {2, 1}), inc0);
    auto rep = stability_functional(t1, t2);
    for (const double w : rep.weighted_dist)
      CHECK(w <= rep.weighted_dist.front() * (1.0 + 1e-12));
  }
  SUBCASE("mismatched inputs are rejected") {
    auto t1 = run_path(cfg, u0, inc);
    auto t2 = run_path(cfg, u0, sample_increments(10, cfg.steps(), cfg.dt, 2));
    CHECK_THROWS_AS(stability_functional(t1, t2), ValidationError);
    SimConfig nostride = cfg;
    nostride.snapshot_stride = 0;
    auto t3 = run_path(nostride, u0, inc);
    CHECK_THROWS_AS(stability_functional(t3, t3), ValidationError);
  }
}

TEST_CASE("martingale_stat") {
  auto cfg = base_config();
  auto space = build_space(cfg.n_max);
  auto u0 = random_field(1, space, 3.0);

  SUBCASE("no noise: mean exactly zero") {
    SimConfig c = cfg;
    c.noise = NoiseModel{};
    std::vector<TrajectoryRecord> recs;
    for (int i = 0; i < 3; ++i) recs.push_back(run(c, u0, std::uint64_t(i)));
    const auto st = martingale_stat(recs, 0.05);
    CHECK(st.mean == 0.0);
    CHECK(st.se == 0.0);
    CHECK(st.se_defined);
  }
  SUBCASE("noisy ensemble: mean within the CLT band (roundoff floor)") {
    std::vector<TrajectoryRecord> recs;
    for (int i = 0; i < 16; ++i) recs.push_back(run(cfg, u0, std::uint64_t(i)));
    const auto st = martingale_stat(recs, 0.1);
    CHECK(std::abs(st.mean) <= 3.0 * st.se + 1e-12);
  }
  SUBCASE("single path flagged, empty rejected") {
    std::vector<TrajectoryRecord> recs{run(cfg, u0, 1)};
    CHECK_FALSE(martingale_stat(recs, 0.05).se_defined);
    CHECK_THROWS_AS(martingale_stat({}, 0.05), ValidationError);
    CHECK_THROWS_AS(martingale_stat(recs, 0.0505), ValidationError);  // off-grid
  }
}
