#pragma once

#include <vector>

#include "scns/spectral.hpp"

namespace scns {

/// Velocity samples on a uniform grid, row-major u[ix*grid+iy] at
/// x = 2pi*ix/grid, y = 2pi*iy/grid.
struct PhysicalField {
  int grid = 0;
  std::vector<double> u1;
  std::vector<double> u2;
};

/// Cached complex-to-complex FFTW plan pair for one grid size. Plan creation
/// is serialized internally; execution on caller-owned buffers is thread-safe.
/// Plans use FFTW_ESTIMATE so results do not depend on runtime measurement.
class Fft2d {
 public:
  static const Fft2d& plan_for(int n);

  int n() const { return n_; }

  /// Unnormalized sum with e^{-i k.x} (analysis direction).
  void forward(Complex* in, Complex* out) const;

  /// Unnormalized sum with e^{+i k.x} (synthesis direction).
  void backward(Complex* in, Complex* out) const;

 private:
  explicit Fft2d(int n);
  int n_;
  void* fwd_;
  void* bwd_;
};

/// Samples u on a grid_size^2 uniform grid. Requires
/// grid_size >= 2*n_max + 1 (exact trigonometric interpolation).
PhysicalField to_physical(const SpectralVelocity& u, int grid_size);

/// Exact inverse of to_physical for adequately sized grids. The returned
/// field is re-symmetrized so the Hermitian invariant holds exactly.
SpectralVelocity from_physical(const PhysicalField& f, SpacePtr space);

}  // namespace scns
