#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace scns {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.28318530717958647692528676655900577;

/// Lebesgue measure of the periodic box [0,2pi]^2; enters every norm.
inline constexpr double kDomainMeasure = kTwoPi * kTwoPi;

/// Wavevector on the torus. The zero mode is excluded everywhere
/// (fields are mean-zero).
struct ModeIndex {
  int k1 = 0;
  int k2 = 0;

  int abs_sq() const { return k1 * k1 + k2 * k2; }
  ModeIndex negated() const { return {-k1, -k2}; }
  bool operator==(const ModeIndex&) const = default;
};

/// Truncated mode set: all k with max(|k1|,|k2|) <= n_max, k != 0, ordered
/// by (|k|^2, k1, k2). Closed under k -> -k; holds (2*n_max+1)^2 - 1 modes.
class GalerkinSpace {
 public:
  explicit GalerkinSpace(int n_max);

  int n_max() const { return n_max_; }
  std::size_t size() const { return modes_.size(); }
  const std::vector<ModeIndex>& modes() const { return modes_; }
  const ModeIndex& mode(std::size_t i) const { return modes_[i]; }

  /// Position of (k1,k2) in the ordering, or -1 if outside the space.
  int index_of(int k1, int k2) const;

  /// Index of -k for the mode at index i.
  int conjugate_index(std::size_t i) const { return conj_[i]; }

  /// True for one member of each {k,-k} pair: k1 > 0, or k1 == 0 and k2 > 0.
  static bool is_canonical(const ModeIndex& k) {
    return k.k1 > 0 || (k.k1 == 0 && k.k2 > 0);
  }

  /// Smallest power-of-two grid with exact quadratic dealiasing
  /// (>= 3*n_max + 1 points per direction).
  int dealias_grid() const;

 private:
  int n_max_;
  std::vector<ModeIndex> modes_;
  std::vector<int> table_;  // dense (2n+1)^2 lookup
  std::vector<int> conj_;
};

using SpacePtr = std::shared_ptr<const GalerkinSpace>;

SpacePtr build_space(int n_max);

/// Divergence-free, mean-zero velocity field stored as streamfunction
/// coefficients psi_k, one complex scalar per mode:
///
///   u(x) = sum_k i k_perp psi_k e^{i k.x},   k_perp = (-k2, k1).
///
/// Hermitian symmetry psi_{-k} = conj(psi_k) is an invariant; every
/// constructor either checks it or produces it by construction.
class SpectralVelocity {
 public:
  /// Zero field.
  explicit SpectralVelocity(SpacePtr space);

  /// Wraps raw coefficients, rejecting non-Hermitian input.
  static SpectralVelocity from_coefficients(SpacePtr space,
                                            std::vector<Complex> psi);

  /// Trusted constructor for operators that preserve the symmetry exactly.
  static SpectralVelocity unchecked(SpacePtr space, std::vector<Complex> psi);

  const GalerkinSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  std::span<const Complex> psi() const { return psi_; }
  Complex psi(std::size_t i) const { return psi_[i]; }

  /// Coefficient of (k1,k2); zero outside the space.
  Complex psi_at(int k1, int k2) const;

  /// Max |psi_k - conj(psi_{-k})|; exact zero for all library-made fields.
  double hermitian_defect() const;

 private:
  SpacePtr space_;
  std::vector<Complex> psi_;
};

/// |u|_H, ||u||_V^2 and |Au|_{L2}^2 of one field (Parseval sums).
struct NormTriple {
  double h = 0.0;
  double v_sq = 0.0;
  double da_sq = 0.0;
};

NormTriple norms(const SpectralVelocity& u);

/// <u,v>_H = (2pi)^2 sum_k |k|^2 Re(psi_k(u) conj(psi_k(v))).
/// Fields must live on the same cutoff.
double inner_h(const SpectralVelocity& u, const SpectralVelocity& v);

/// Orthogonal projection onto a coarser cutoff (drops high modes).
SpectralVelocity project(const SpacePtr& target, const SpectralVelocity& u);

/// Injection into a finer cutoff (zero-pads high modes).
SpectralVelocity embed(const SpacePtr& target, const SpectralVelocity& u);

/// u / |u|_H. Rejects the zero field.
SpectralVelocity normalize_to_sphere(const SpectralVelocity& u);

/// Seeded random field: |psi_k| = |k|^{-decay}, uniform random phases,
/// normalized to |u|_H = 1. Deterministic in the seed.
SpectralVelocity random_field(std::uint64_t seed, SpacePtr space, double decay);

/// Normalized single eigenmode pair {k,-k} of the Stokes operator.
SpectralVelocity eigenmode_field(SpacePtr space, ModeIndex k);

// Linear combinations (same space required).
SpectralVelocity axpy(double a, const SpectralVelocity& x,
                      const SpectralVelocity& y);  // a*x + y
SpectralVelocity scale(double a, const SpectralVelocity& x);
SpectralVelocity sub(const SpectralVelocity& x, const SpectralVelocity& y);

}  // namespace scns
