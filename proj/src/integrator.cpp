#include "scns/integrator.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "scns/errors.hpp"

namespace scns {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

BrownianIncrements sample_increments(std::uint64_t seed, int steps, double dt,
                                     int m) {
  if (steps < 1) throw ValidationError("sample_increments: steps must be >= 1");
  if (!(dt > 0.0)) throw ValidationError("sample_increments: dt must be > 0");
  if (m < 0) throw ValidationError("sample_increments: m must be >= 0");
  BrownianIncrements inc;
  inc.dt = dt;
  inc.m = m;
  inc.seed = seed;
  inc.level = 0;
  inc.steps_no_noise = steps;
  if (m > 0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(dt));
    inc.dw.resize(std::size_t(steps) * m);
    for (auto& x : inc.dw) x = gauss(rng);
  }
  return inc;
}

BrownianIncrements refine(const BrownianIncrements& inc) {
  BrownianIncrements fine;
  fine.dt = 0.5 * inc.dt;
  fine.m = inc.m;
  fine.seed = inc.seed;
  fine.level = inc.level + 1;
  fine.steps_no_noise = 2 * inc.steps();
  if (inc.m > 0) {
    // First half-increment conditioned on the coarse total: N(W/2, dt/4).
    std::mt19937_64 rng(splitmix64(inc.seed + 0x9E3779B97F4A7C15ULL *
                                                  std::uint64_t(inc.level + 1)));
    std::normal_distribution<double> gauss(0.0, 0.5 * std::sqrt(inc.dt));
    fine.dw.resize(std::size_t(2) * inc.dw.size());
    const int m = inc.m;
    for (int i = 0; i < inc.steps(); ++i) {
      for (int j = 0; j < m; ++j) {
        const double total = inc.dw[std::size_t(i) * m + j];
        const double first = 0.5 * total + gauss(rng);
        fine.dw[std::size_t(2 * i) * m + j] = first;
        fine.dw[std::size_t(2 * i + 1) * m + j] = total - first;
      }
    }
  }
  return fine;
}

int SimConfig::steps() const {
  if (!(dt > 0.0)) throw ValidationError("config: dt must be > 0");
  if (!(t_end >= dt)) throw ValidationError("config: t_end must be >= dt");
  const double raw = t_end / dt;
  const auto n = static_cast<long long>(std::llround(raw));
  if (n < 1 || n > 100'000'000)
    throw ValidationError("config: step count out of budget");
  if (std::abs(raw - double(n)) > 1e-6 * raw)
    throw ValidationError("config: t_end must be an integer multiple of dt");
  return static_cast<int>(n);
}

const StepDiag& TrajectoryRecord::at_time(double t) const {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - t) <= 1e-12 * std::max(1.0, std::abs(t)))
      return diag[i];
  throw ValidationError("TrajectoryRecord: time not on the recorded grid");
}

SpectralVelocity noise_flow_exact(const NoiseModel& model,
                                  const SpectralVelocity& u,
                                  std::span<const double> dw) {
  if (int(dw.size()) != model.m())
    throw ValidationError("noise_flow_exact: increment count mismatch");
  const auto& space = u.space();
  std::vector<Complex> psi(space.size());
  // Phases are applied pairwise so the Hermitian pairing survives exactly.
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& k = space.mode(i);
    if (!GalerkinSpace::is_canonical(k)) continue;
    double theta = 0.0;
    for (int j = 0; j < model.m(); ++j) theta += model.dot(j, k) * dw[j];
    const double c = std::cos(theta), s = std::sin(theta);
    const Complex p = u.psi(i);
    psi[i] = Complex{p.real() * c - p.imag() * s, p.real() * s + p.imag() * c};
    psi[std::size_t(space.conjugate_index(i))] = std::conj(psi[i]);
  }
  return SpectralVelocity::unchecked(u.space_ptr(), std::move(psi));
}

namespace {

// One deterministic drift step u' = -Au - B(u) + ||u||_V^2 u, advanced as two
// explicit midpoint half-steps. Second order, with a real-axis stability
// interval of 4, which covers |k|^2 dt up to the reference configurations
// (n_max = 32 at dt = 1e-3, and dt = 4e-3 at n_max = 16).
SpectralVelocity drift_step(const NoiseModel& noise, const SpectralVelocity& u0,
                            double dt) {
  SpectralVelocity u = u0;
  const double h = 0.5 * dt;
  for (int sub = 0; sub < 2; ++sub) {
    const SpectralVelocity k1 = constrained_drift(noise, u);
    const SpectralVelocity k2 = constrained_drift(noise, axpy(0.5 * h, k1, u));
    u = axpy(h, k2, u);
  }
  return u;
}

std::vector<double> halved(std::span<const double> dw) {
  std::vector<double> half(dw.size());
  for (std::size_t j = 0; j < dw.size(); ++j) half[j] = 0.5 * dw[j];
  return half;
}

}  // namespace

SpectralVelocity step_splitting(const SimConfig& cfg, const SpectralVelocity& u,
                                std::span<const double> dw) {
  const auto half = halved(dw);
  SpectralVelocity v = noise_flow_exact(cfg.noise, u, half);
  v = drift_step(cfg.noise, v, cfg.dt);
  v = noise_flow_exact(cfg.noise, v, half);
  if (cfg.project_each_step) v = normalize_to_sphere(v);
  return v;
}

SpectralVelocity step_heun(const SimConfig& cfg, const SpectralVelocity& u,
                           std::span<const double> dw) {
  const int m = cfg.noise.m();
  auto add_noise = [&](const SpectralVelocity& base, const SpectralVelocity& w,
                       double factor) {
    SpectralVelocity out = base;
    for (int j = 0; j < m; ++j)
      out = axpy(factor * dw[std::size_t(j)], transport(cfg.noise, j, w), out);
    return out;
  };
  const SpectralVelocity a0 = constrained_drift(cfg.noise, u);
  SpectralVelocity pred = add_noise(axpy(cfg.dt, a0, u), u, 1.0);
  const SpectralVelocity a1 = constrained_drift(cfg.noise, pred);
  SpectralVelocity out = axpy(0.5 * cfg.dt, a0, u);
  out = axpy(0.5 * cfg.dt, a1, out);
  out = add_noise(out, u, 0.5);
  out = add_noise(out, pred, 0.5);
  if (cfg.project_each_step) out = normalize_to_sphere(out);
  return out;
}

namespace {

StepDiag make_diag(const SpectralVelocity& u, double mu) {
  StepDiag d;
  d.norm = norms(u);
  // D = |Au - ||u||_V^2 u|_H^2, diagonal in the mode basis.
  double s = 0.0;
  const auto& modes = u.space().modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const double k2 = modes[i].abs_sq();
    const double f = k2 - d.norm.v_sq;
    s += k2 * f * f * std::norm(u.psi(i));
  }
  d.dissipation = kDomainMeasure * s;
  d.constraint_err = std::abs(d.norm.h - 1.0);
  d.mu = mu;
  return d;
}

void check_state(const StepDiag& d, double t, const StepDiag& last_valid,
                 double t_last) {
  const bool finite = std::isfinite(d.norm.h) && std::isfinite(d.norm.v_sq) &&
                      std::isfinite(d.norm.da_sq);
  if (finite && d.norm.h <= 1e12 && d.norm.v_sq <= 1e24 && d.norm.da_sq <= 1e24)
    return;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "integrator blowup at t = %.6g (|u|_H = %.3g); last valid "
                "state t = %.6g, |u|_H = %.6g, ||u||_V^2 = %.6g; check dt "
                "against the cutoff",
                t, d.norm.h, t_last, last_valid.norm.h, last_valid.norm.v_sq);
  throw BlowupError(buf, t_last, last_valid.norm.h, last_valid.norm.v_sq);
}

}  // namespace

TrajectoryRecord run_path(const SimConfig& cfg, const SpectralVelocity& u0,
                          const BrownianIncrements& inc) {
  if (inc.m != cfg.noise.m())
    throw ValidationError("run_path: increments do not match the noise model");
  if (std::abs(inc.dt - cfg.dt) > 1e-12 * cfg.dt)
    throw ValidationError("run_path: increment step does not match config dt");
  const int steps = inc.steps();
  if (steps != cfg.steps())
    throw ValidationError("run_path: increment count does not match horizon");
  if (std::abs(norms(u0).h - 1.0) > 1e-8)
    throw ValidationError("run_path: u0 must lie on the unit sphere of H");

  TrajectoryRecord rec;
  rec.increments = inc;
  rec.snapshot_stride = cfg.snapshot_stride;
  rec.times.reserve(std::size_t(steps) + 1);
  rec.diag.reserve(std::size_t(steps) + 1);

  SpectralVelocity u = u0;
  double mu = 0.0;
  rec.times.push_back(0.0);
  rec.diag.push_back(make_diag(u, mu));
  if (cfg.snapshot_stride > 0) rec.snapshots.push_back(u);

  const int m = cfg.noise.m();
  for (int i = 0; i < steps; ++i) {
    if (m > 0) {
      // Left-point evaluation of sum_j <Au, C_j u> dW_j on [t_i, t_{i+1}).
      const SpectralVelocity au = stokes(u);
      const auto dw = inc.row(i);
      for (int j = 0; j < m; ++j)
        mu += inner_h(au, transport(cfg.noise, j, u)) * dw[std::size_t(j)];
    }
    const auto dw = m > 0 ? inc.row(i) : std::span<const double>{};
    u = cfg.scheme == Scheme::splitting ? step_splitting(cfg, u, dw)
                                        : step_heun(cfg, u, dw);
    const double t = double(i + 1) * cfg.dt;
    rec.times.push_back(t);
    rec.diag.push_back(make_diag(u, mu));
    check_state(rec.diag.back(), t, rec.diag[rec.diag.size() - 2],
                rec.times[rec.times.size() - 2]);
    if (cfg.snapshot_stride > 0 && (i + 1) % cfg.snapshot_stride == 0)
      rec.snapshots.push_back(u);
  }
  return rec;
}

}  // namespace scns
