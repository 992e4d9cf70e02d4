#include "scns/operators.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "scns/errors.hpp"
#include "scns/fft.hpp"

namespace scns {

NoiseModel::NoiseModel(std::vector<std::array<double, 2>> c) : c_(std::move(c)) {
  const double kc = k_c();
  if (!(kc < 1.0)) {
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "noise amplitude K_c = %.6g violates Assumption (A.1): "
                  "K_c < 1 required",
                  kc);
    throw ValidationError(buf);
  }
}

const std::array<double, 2>& NoiseModel::c(int j) const {
  if (j < 0 || j >= m())
    throw std::out_of_range("NoiseModel: direction index out of range");
  return c_[static_cast<std::size_t>(j)];
}

double NoiseModel::k_c() const {
  double kc = 0.0;
  for (const auto& v : c_) kc = std::max(kc, std::hypot(v[0], v[1]));
  return kc;
}

SpectralVelocity stokes(const SpectralVelocity& u) {
  std::vector<Complex> psi(u.space().size());
  const auto& modes = u.space().modes();
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double s = modes[i].abs_sq();
    psi[i] = Complex{s * u.psi(i).real(), s * u.psi(i).imag()};
  }
  return SpectralVelocity::unchecked(u.space_ptr(), std::move(psi));
}

SpectralVelocity transport(const NoiseModel& model, int j,
                           const SpectralVelocity& u) {
  if (j < 0 || j >= model.m())
    throw std::out_of_range("transport: direction index out of range");
  std::vector<Complex> psi(u.space().size());
  const auto& modes = u.space().modes();
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double a = model.dot(j, modes[i]);
    psi[i] = Complex{-a * u.psi(i).imag(), a * u.psi(i).real()};
  }
  return SpectralVelocity::unchecked(u.space_ptr(), std::move(psi));
}

SpectralVelocity ito_correction(const NoiseModel& model,
                                const SpectralVelocity& u) {
  std::vector<Complex> psi(u.space().size());
  const auto& modes = u.space().modes();
  for (std::size_t i = 0; i < psi.size(); ++i) {
    double s = 0.0;
    for (int j = 0; j < model.m(); ++j) {
      const double a = model.dot(j, modes[i]);
      s += a * a;
    }
    psi[i] = Complex{-0.5 * s * u.psi(i).real(), -0.5 * s * u.psi(i).imag()};
  }
  return SpectralVelocity::unchecked(u.space_ptr(), std::move(psi));
}

SpectralVelocity tangent_project(const SpectralVelocity& u,
                                 const SpectralVelocity& v) {
  const double h = norms(u).h;
  if (std::abs(h - 1.0) > 1e-8)
    throw ValidationError("tangent_project: base point is not on the sphere");
  return axpy(-inner_h(v, u), u, v);
}

// ---------------------------------------------------------------------------
// Pseudo-spectral nonlinearity.
//
// Per-thread scratch keyed by grid size; a path integration reuses its
// buffers across every step without touching other threads.
namespace {

struct Workspace {
  std::vector<Complex> spec;                  // mode staging
  std::array<std::vector<Complex>, 6> grids;  // physical-space scratch
};

Workspace& workspace_for(int n) {
  thread_local std::map<int, Workspace> cache;
  Workspace& w = cache[n];
  const std::size_t cells = static_cast<std::size_t>(n) * n;
  if (w.spec.size() != cells) {
    w.spec.resize(cells);
    for (auto& g : w.grids) g.resize(cells);
  }
  return w;
}

inline int bin(int k, int n) { return (k % n + n) % n; }

// Backward transform of {mult(k) * psi_k} into grid.
template <typename MultFn>
void synthesize(const SpectralVelocity& u, MultFn mult, const Fft2d& fft,
                std::vector<Complex>& spec, std::vector<Complex>& grid) {
  const int n = fft.n();
  std::fill(spec.begin(), spec.end(), Complex{0.0, 0.0});
  const auto& modes = u.space().modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const auto& k = modes[i];
    spec[static_cast<std::size_t>(bin(k.k1, n)) * n + bin(k.k2, n)] =
        mult(k) * u.psi(i);
  }
  fft.backward(spec.data(), grid.data());
}

// Streamfunction coefficients of the divergence-free part of a vector field
// given its physical samples, restricted to the target space.
std::vector<Complex> analyze_leray(const Fft2d& fft, const GalerkinSpace& space,
                                   std::vector<Complex>& g1,
                                   std::vector<Complex>& g2,
                                   std::vector<Complex>& s1,
                                   std::vector<Complex>& s2) {
  const int n = fft.n();
  fft.forward(g1.data(), s1.data());
  fft.forward(g2.data(), s2.data());
  const double inv = 1.0 / (double(n) * double(n));
  std::vector<Complex> psi(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& k = space.mode(i);
    const std::size_t cell =
        static_cast<std::size_t>(bin(k.k1, n)) * n + bin(k.k2, n);
    // psi = -i (k_perp . g_hat) / |k|^2; the k-parallel part drops out.
    const Complex kp_dot =
        (-double(k.k2) * s1[cell] + double(k.k1) * s2[cell]) * inv;
    psi[i] = Complex{kp_dot.imag(), -kp_dot.real()} / double(k.abs_sq());
  }
  return psi;
}

void symmetrize(const GalerkinSpace& space, std::vector<Complex>& psi) {
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (!GalerkinSpace::is_canonical(space.mode(i))) continue;
    const auto j = static_cast<std::size_t>(space.conjugate_index(i));
    psi[i] = 0.5 * (psi[i] + std::conj(psi[j]));
    psi[j] = std::conj(psi[i]);
  }
}

}  // namespace

SpectralVelocity nonlinear(const SpectralVelocity& u) {
  // Vorticity form: curl B(u) = (u.grad) omega with omega_hat = -|k|^2 psi.
  const int n = u.space().dealias_grid();
  const auto& fft = Fft2d::plan_for(n);
  Workspace& w = workspace_for(n);
  auto& [u1, u2, w1, w2, p1, p2] = w.grids;

  synthesize(u, [](const ModeIndex& k) { return Complex{0.0, -double(k.k2)}; },
             fft, w.spec, u1);
  synthesize(u, [](const ModeIndex& k) { return Complex{0.0, double(k.k1)}; },
             fft, w.spec, u2);
  // d_i omega: multiplier i k_i * (-|k|^2)
  synthesize(u,
             [](const ModeIndex& k) {
               return Complex{0.0, -double(k.k1) * k.abs_sq()};
             },
             fft, w.spec, w1);
  synthesize(u,
             [](const ModeIndex& k) {
               return Complex{0.0, -double(k.k2) * k.abs_sq()};
             },
             fft, w.spec, w2);

  const std::size_t cells = u1.size();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(cells); ++i)
    p1[static_cast<std::size_t>(i)] =
        Complex{u1[static_cast<std::size_t>(i)].real() *
                        w1[static_cast<std::size_t>(i)].real() +
                    u2[static_cast<std::size_t>(i)].real() *
                        w2[static_cast<std::size_t>(i)].real(),
                0.0};

  fft.forward(p1.data(), p2.data());
  const double inv = 1.0 / (double(n) * double(n));
  std::vector<Complex> psi(u.space().size());
  for (std::size_t i = 0; i < u.space().size(); ++i) {
    const auto& k = u.space().mode(i);
    const std::size_t cell =
        static_cast<std::size_t>(bin(k.k1, n)) * n + bin(k.k2, n);
    // advected vorticity m_hat -> psi = -m_hat / |k|^2
    psi[i] = p2[cell] * (-inv / double(k.abs_sq()));
  }
  symmetrize(u.space(), psi);
  return SpectralVelocity::unchecked(u.space_ptr(), std::move(psi));
}

SpectralVelocity nonlinear_pair(const SpectralVelocity& u,
                                const SpectralVelocity& v) {
  if (u.space().n_max() != v.space().n_max())
    throw ValidationError("nonlinear_pair: fields live on different spaces");
  const int n = u.space().dealias_grid();
  const auto& fft = Fft2d::plan_for(n);
  Workspace& w = workspace_for(n);
  auto& [u1, u2, g1, g2, dv, spare] = w.grids;
  const std::size_t cells = static_cast<std::size_t>(n) * n;

  synthesize(u, [](const ModeIndex& k) { return Complex{0.0, -double(k.k2)}; },
             fft, w.spec, u1);
  synthesize(u, [](const ModeIndex& k) { return Complex{0.0, double(k.k1)}; },
             fft, w.spec, u2);

  // g^j = u . grad v^j, accumulated one derivative grid at a time:
  // v_hat^j = i k_perp_j psi_v, (d_i v^j)_hat = i k_i v_hat^j.
  for (int comp = 0; comp < 2; ++comp) {
    auto& acc = comp == 0 ? g1 : g2;
    std::fill(acc.begin(), acc.end(), Complex{0.0, 0.0});
    for (int deriv = 0; deriv < 2; ++deriv) {
      synthesize(v,
                 [comp, deriv](const ModeIndex& k) {
                   const double kp = comp == 0 ? -double(k.k2) : double(k.k1);
                   const double kd = deriv == 0 ? double(k.k1) : double(k.k2);
                   return Complex{-kd * kp, 0.0};  // (i kd)(i kp) = -kd kp
                 },
                 fft, w.spec, dv);
      const auto& adv = deriv == 0 ? u1 : u2;
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(cells); ++i) {
        const auto s = static_cast<std::size_t>(i);
        acc[s] += Complex{adv[s].real() * dv[s].real(), 0.0};
      }
    }
  }

  auto psi = analyze_leray(fft, u.space(), g1, g2, dv, spare);
  symmetrize(u.space(), psi);
  return SpectralVelocity::unchecked(u.space_ptr(), std::move(psi));
}

SpectralVelocity nonlinear_direct(const SpectralVelocity& u) {
  // Momentum form: [(u.grad)u]_k = sum_{p+q=k} i (u_hat_p . q) u_hat_q,
  // with u_hat_p = i p_perp psi_p, followed by explicit Leray projection.
  const auto& space = u.space();
  const auto& modes = space.modes();
  std::vector<Complex> v1(space.size(), Complex{0.0, 0.0});
  std::vector<Complex> v2(space.size(), Complex{0.0, 0.0});
  for (std::size_t ip = 0; ip < modes.size(); ++ip) {
    const auto& p = modes[ip];
    const Complex up1{double(p.k2) * u.psi(ip).imag(),
                      -double(p.k2) * u.psi(ip).real()};
    const Complex up2{-double(p.k1) * u.psi(ip).imag(),
                      double(p.k1) * u.psi(ip).real()};
    for (std::size_t iq = 0; iq < modes.size(); ++iq) {
      const auto& q = modes[iq];
      const int idx = space.index_of(p.k1 + q.k1, p.k2 + q.k2);
      if (idx < 0) continue;
      if (p.k1 + q.k1 == 0 && p.k2 + q.k2 == 0) continue;
      const Complex dot = up1 * double(q.k1) + up2 * double(q.k2);
      const Complex factor{-dot.imag(), dot.real()};  // i * dot
      const Complex uq1{double(q.k2) * u.psi(iq).imag(),
                        -double(q.k2) * u.psi(iq).real()};
      const Complex uq2{-double(q.k1) * u.psi(iq).imag(),
                        double(q.k1) * u.psi(iq).real()};
      v1[static_cast<std::size_t>(idx)] += factor * uq1;
      v2[static_cast<std::size_t>(idx)] += factor * uq2;
    }
  }
  std::vector<Complex> psi(space.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const auto& k = modes[i];
    const double k2 = k.abs_sq();
    // Leray: v - k (k.v)/|k|^2, then psi = -i (k_perp . v) / |k|^2.
    const Complex kdot = (double(k.k1) * v1[i] + double(k.k2) * v2[i]) / k2;
    const Complex w1 = v1[i] - double(k.k1) * kdot;
    const Complex w2 = v2[i] - double(k.k2) * kdot;
    const Complex kp_dot = -double(k.k2) * w1 + double(k.k1) * w2;
    psi[i] = Complex{kp_dot.imag(), -kp_dot.real()} / k2;
  }
  symmetrize(space, psi);
  return SpectralVelocity::unchecked(u.space_ptr(), std::move(psi));
}

double trilinear_b(const SpectralVelocity& u, const SpectralVelocity& v,
                   const SpectralVelocity& w) {
  if (u.space().n_max() != v.space().n_max() ||
      u.space().n_max() != w.space().n_max())
    throw ValidationError("trilinear_b: fields live on different spaces");
  const int n = u.space().dealias_grid();
  const auto& fft = Fft2d::plan_for(n);
  Workspace& ws = workspace_for(n);
  auto& [a1, a2, dv, w1, w2, spare] = ws.grids;
  const std::size_t cells = static_cast<std::size_t>(n) * n;

  synthesize(u, [](const ModeIndex& k) { return Complex{0.0, -double(k.k2)}; },
             fft, ws.spec, a1);
  synthesize(u, [](const ModeIndex& k) { return Complex{0.0, double(k.k1)}; },
             fft, ws.spec, a2);
  synthesize(w, [](const ModeIndex& k) { return Complex{0.0, -double(k.k2)}; },
             fft, ws.spec, w1);
  synthesize(w, [](const ModeIndex& k) { return Complex{0.0, double(k.k1)}; },
             fft, ws.spec, w2);

  double total = 0.0;
  for (int comp = 0; comp < 2; ++comp) {
    const auto& wj = comp == 0 ? w1 : w2;
    for (int deriv = 0; deriv < 2; ++deriv) {
      synthesize(v,
                 [comp, deriv](const ModeIndex& k) {
                   const double kp = comp == 0 ? -double(k.k2) : double(k.k1);
                   const double kd = deriv == 0 ? double(k.k1) : double(k.k2);
                   return Complex{-kd * kp, 0.0};
                 },
                 fft, ws.spec, dv);
      const auto& ui = deriv == 0 ? a1 : a2;
      double s = 0.0;
      for (std::size_t i = 0; i < cells; ++i)
        s += ui[i].real() * dv[i].real() * wj[i].real();
      total += s;
    }
  }
  return total * (kDomainMeasure / double(cells));
}

SpectralVelocity constrained_drift(const NoiseModel& /*model*/,
                                   const SpectralVelocity& u) {
  const SpectralVelocity nl = nonlinear(u);
  const double v_sq = norms(u).v_sq;
  std::vector<Complex> psi(u.space().size());
  const auto& modes = u.space().modes();
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double s = v_sq - modes[i].abs_sq();  // -A u + ||u||_V^2 u
    psi[i] = Complex{s * u.psi(i).real() - nl.psi(i).real(),
                     s * u.psi(i).imag() - nl.psi(i).imag()};
  }
  return SpectralVelocity::unchecked(u.space_ptr(), std::move(psi));
}

}  // namespace scns
