#pragma once

#include <array>
#include <vector>

#include "scns/spectral.hpp"

namespace scns {

/// Constant transport-noise directions c_j. Construction enforces
/// Assumption (A.1): K_c = max_j |c_j| < 1.
class NoiseModel {
 public:
  NoiseModel() = default;  // no noise, m = 0
  explicit NoiseModel(std::vector<std::array<double, 2>> c);

  int m() const { return static_cast<int>(c_.size()); }
  const std::array<double, 2>& c(int j) const;

  /// K_c recomputed from the vectors (never cached).
  double k_c() const;

  /// c_j . k, the transport symbol divided by i.
  double dot(int j, const ModeIndex& k) const {
    return c_[static_cast<std::size_t>(j)][0] * k.k1 +
           c_[static_cast<std::size_t>(j)][1] * k.k2;
  }

 private:
  std::vector<std::array<double, 2>> c_;
};

/// Stokes operator: psi_k -> |k|^2 psi_k.
SpectralVelocity stokes(const SpectralVelocity& u);

/// Transport operator C_j = Pi((c_j . grad) .): psi_k -> i (c_j.k) psi_k.
/// j is a 0-based index into the noise model.
SpectralVelocity transport(const NoiseModel& model, int j,
                           const SpectralVelocity& u);

/// Ito-Stratonovich correction (1/2) sum_j C_j^2:
/// psi_k -> -(1/2) sum_j (c_j.k)^2 psi_k.
SpectralVelocity ito_correction(const NoiseModel& model,
                                const SpectralVelocity& u);

/// pi_u(v) = v - <v,u>_H u for unit u (|u|_H = 1 within 1e-8, else rejected).
SpectralVelocity tangent_project(const SpectralVelocity& u,
                                 const SpectralVelocity& v);

/// B(u) = P_n Pi[(u.grad)u], pseudo-spectral on the dealiased grid
/// (exact for the quadratic product of truncated fields).
SpectralVelocity nonlinear(const SpectralVelocity& u);

/// Two-argument form P_n Pi[(u.grad)v], velocity-form evaluation.
SpectralVelocity nonlinear_pair(const SpectralVelocity& u,
                                const SpectralVelocity& v);

/// Independent O(modes^2) convolution-sum oracle for nonlinear(). Explicit
/// momentum-form double sum with explicit Leray projection; serial, intended
/// for small cutoffs.
SpectralVelocity nonlinear_direct(const SpectralVelocity& u);

/// b(u,v,w) = sum_{i,j} int u^i (d_i v^j) w^j dx by dealiased quadrature.
double trilinear_b(const SpectralVelocity& u, const SpectralVelocity& v,
                   const SpectralVelocity& w);

/// Stratonovich drift of the constrained system:
/// -A u - B(u) + ||u||_V^2 u  (viscosity 1). Independent of the noise model;
/// the parameter is kept so call sites carry the full problem description.
SpectralVelocity constrained_drift(const NoiseModel& model,
                                   const SpectralVelocity& u);

}  // namespace scns
