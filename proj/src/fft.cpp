#include "scns/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "scns/errors.hpp"

namespace scns {

namespace {
std::mutex g_plan_mutex;

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

// Grid bin of wavevector component k on an n-point grid.
inline int bin(int k, int n) { return (k % n + n) % n; }
}  // namespace

Fft2d::Fft2d(int n) : n_(n) {
  // Scratch only for planning; FFTW_UNALIGNED lets execution run on any
  // caller buffer afterwards.
  std::vector<Complex> a(static_cast<std::size_t>(n) * n),
      b(static_cast<std::size_t>(n) * n);
  fwd_ = fftw_plan_dft_2d(n, n, as_fftw(a.data()), as_fftw(b.data()),
                          FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  bwd_ = fftw_plan_dft_2d(n, n, as_fftw(a.data()), as_fftw(b.data()),
                          FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
}

const Fft2d& Fft2d::plan_for(int n) {
  static std::map<int, Fft2d>* cache = new std::map<int, Fft2d>;
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto it = cache->find(n);
  if (it == cache->end()) it = cache->emplace(n, Fft2d(n)).first;
  return it->second;
}

void Fft2d::forward(Complex* in, Complex* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(fwd_), as_fftw(in), as_fftw(out));
}

void Fft2d::backward(Complex* in, Complex* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(bwd_), as_fftw(in), as_fftw(out));
}

PhysicalField to_physical(const SpectralVelocity& u, int grid_size) {
  const int n_max = u.space().n_max();
  if (grid_size < 2 * n_max + 1)
    throw ValidationError("to_physical: grid must have >= 2*n_max+1 points");
  const int n = grid_size;
  const auto& fft = Fft2d::plan_for(n);
  const std::size_t cells = static_cast<std::size_t>(n) * n;
  std::vector<Complex> spec(cells), grid(cells);
  PhysicalField out;
  out.grid = n;
  out.u1.resize(cells);
  out.u2.resize(cells);

  const auto& modes = u.space().modes();
  // u_hat = i k_perp psi, k_perp = (-k2, k1)
  for (int comp = 0; comp < 2; ++comp) {
    std::fill(spec.begin(), spec.end(), Complex{0.0, 0.0});
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const auto& k = modes[m];
      const double kp = comp == 0 ? -double(k.k2) : double(k.k1);
      const Complex p = u.psi(m);
      spec[static_cast<std::size_t>(bin(k.k1, n)) * n + bin(k.k2, n)] =
          Complex{-kp * p.imag(), kp * p.real()};
    }
    fft.backward(spec.data(), grid.data());
    auto& dst = comp == 0 ? out.u1 : out.u2;
    for (std::size_t i = 0; i < cells; ++i) dst[i] = grid[i].real();
  }
  return out;
}

SpectralVelocity from_physical(const PhysicalField& f, SpacePtr space) {
  const int n = f.grid;
  if (n < 2 * space->n_max() + 1)
    throw ValidationError("from_physical: grid must have >= 2*n_max+1 points");
  const std::size_t cells = static_cast<std::size_t>(n) * n;
  if (f.u1.size() != cells || f.u2.size() != cells)
    throw ValidationError("from_physical: sample count does not match grid");
  const auto& fft = Fft2d::plan_for(n);
  std::vector<Complex> in(cells), u1h(cells), u2h(cells);
  for (std::size_t i = 0; i < cells; ++i) in[i] = Complex{f.u1[i], 0.0};
  fft.forward(in.data(), u1h.data());
  for (std::size_t i = 0; i < cells; ++i) in[i] = Complex{f.u2[i], 0.0};
  fft.forward(in.data(), u2h.data());

  const double inv = 1.0 / double(cells);
  std::vector<Complex> psi(space->size());
  for (std::size_t m = 0; m < space->size(); ++m) {
    const auto& k = space->mode(m);
    const std::size_t cell =
        static_cast<std::size_t>(bin(k.k1, n)) * n + bin(k.k2, n);
    const Complex a1 = u1h[cell] * inv, a2 = u2h[cell] * inv;
    // psi = -i (k_perp . u_hat) / |k|^2
    const Complex kp_dot = -double(k.k2) * a1 + double(k.k1) * a2;
    psi[m] = Complex{kp_dot.imag(), -kp_dot.real()} / double(k.abs_sq());
  }
  // Rounding in the transforms breaks the pairing at the last bit; restore it.
  for (std::size_t m = 0; m < space->size(); ++m) {
    const auto& k = space->mode(m);
    if (!GalerkinSpace::is_canonical(k)) continue;
    const auto j = static_cast<std::size_t>(space->conjugate_index(m));
    psi[m] = 0.5 * (psi[m] + std::conj(psi[j]));
    psi[j] = std::conj(psi[m]);
  }
  return SpectralVelocity::unchecked(space, std::move(psi));
}

}  // namespace scns
