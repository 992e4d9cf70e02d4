#include "scns/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "scns/errors.hpp"

namespace scns {

GalerkinSpace::GalerkinSpace(int n_max) : n_max_(n_max) {
  if (n_max < 1) throw ValidationError("GalerkinSpace: n_max must be >= 1");
  const int w = 2 * n_max + 1;
  modes_.reserve(static_cast<std::size_t>(w) * w - 1);
  for (int k1 = -n_max; k1 <= n_max; ++k1)
    for (int k2 = -n_max; k2 <= n_max; ++k2)
      if (k1 != 0 || k2 != 0) modes_.push_back({k1, k2});
  std::sort(modes_.begin(), modes_.end(),
            [](const ModeIndex& a, const ModeIndex& b) {
              if (a.abs_sq() != b.abs_sq()) return a.abs_sq() < b.abs_sq();
              if (a.k1 != b.k1) return a.k1 < b.k1;
              return a.k2 < b.k2;
            });
  table_.assign(static_cast<std::size_t>(w) * w, -1);
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    const auto& k = modes_[i];
    table_[static_cast<std::size_t>(k.k1 + n_max) * w + (k.k2 + n_max)] =
        static_cast<int>(i);
  }
  conj_.resize(modes_.size());
  for (std::size_t i = 0; i < modes_.size(); ++i)
    conj_[i] = index_of(-modes_[i].k1, -modes_[i].k2);
}

int GalerkinSpace::index_of(int k1, int k2) const {
  if (std::abs(k1) > n_max_ || std::abs(k2) > n_max_) return -1;
  const int w = 2 * n_max_ + 1;
  return table_[static_cast<std::size_t>(k1 + n_max_) * w + (k2 + n_max_)];
}

int GalerkinSpace::dealias_grid() const {
  int g = 8;
  while (g < 3 * n_max_ + 1) g *= 2;
  return g;
}

SpacePtr build_space(int n_max) {
  return std::make_shared<const GalerkinSpace>(n_max);
}

SpectralVelocity::SpectralVelocity(SpacePtr space)
    : space_(std::move(space)), psi_(space_->size(), Complex{0.0, 0.0}) {}

SpectralVelocity SpectralVelocity::from_coefficients(SpacePtr space,
                                                     std::vector<Complex> psi) {
  if (psi.size() != space->size())
    throw ValidationError("SpectralVelocity: coefficient count mismatch");
  SpectralVelocity u = unchecked(std::move(space), std::move(psi));
  if (u.hermitian_defect() != 0.0)
    throw ValidationError(
        "SpectralVelocity: coefficients violate Hermitian symmetry");
  return u;
}

SpectralVelocity SpectralVelocity::unchecked(SpacePtr space,
                                             std::vector<Complex> psi) {
  SpectralVelocity u{std::move(space)};
  u.psi_ = std::move(psi);
  return u;
}

Complex SpectralVelocity::psi_at(int k1, int k2) const {
  const int i = space_->index_of(k1, k2);
  return i < 0 ? Complex{0.0, 0.0} : psi_[static_cast<std::size_t>(i)];
}

double SpectralVelocity::hermitian_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < psi_.size(); ++i) {
    const auto j = static_cast<std::size_t>(space_->conjugate_index(i));
    worst = std::max(worst, std::abs(psi_[i] - std::conj(psi_[j])));
  }
  return worst;
}

NormTriple norms(const SpectralVelocity& u) {
  double s_h = 0.0, s_v = 0.0, s_da = 0.0;
  const auto& modes = u.space().modes();
  const auto psi = u.psi();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const double k2 = modes[i].abs_sq();
    const double p2 = std::norm(psi[i]);
    s_h += k2 * p2;
    s_v += k2 * k2 * p2;
    s_da += k2 * k2 * k2 * p2;
  }
  return {std::sqrt(kDomainMeasure * s_h), kDomainMeasure * s_v,
          kDomainMeasure * s_da};
}

namespace {
void require_same_space(const SpectralVelocity& u, const SpectralVelocity& v,
                        const char* op) {
  if (u.space().n_max() != v.space().n_max())
    throw ValidationError(std::string(op) + ": fields live on different spaces");
}
}  // namespace

double inner_h(const SpectralVelocity& u, const SpectralVelocity& v) {
  require_same_space(u, v, "inner_h");
  double s = 0.0;
  const auto& modes = u.space().modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const Complex a = u.psi(i), b = v.psi(i);
    s += modes[i].abs_sq() * (a.real() * b.real() + a.imag() * b.imag());
  }
  return kDomainMeasure * s;
}

SpectralVelocity project(const SpacePtr& target, const SpectralVelocity& u) {
  if (target->n_max() > u.space().n_max())
    throw ValidationError("project: target space larger than source");
  std::vector<Complex> psi(target->size());
  for (std::size_t i = 0; i < target->size(); ++i) {
    const auto& k = target->mode(i);
    psi[i] = u.psi_at(k.k1, k.k2);
  }
  return SpectralVelocity::unchecked(target, std::move(psi));
}

SpectralVelocity embed(const SpacePtr& target, const SpectralVelocity& u) {
  if (target->n_max() < u.space().n_max())
    throw ValidationError("embed: target space smaller than source");
  std::vector<Complex> psi(target->size(), Complex{0.0, 0.0});
  const auto& modes = u.space().modes();
  for (std::size_t i = 0; i < modes.size(); ++i)
    psi[static_cast<std::size_t>(target->index_of(modes[i].k1, modes[i].k2))] =
        u.psi(i);
  return SpectralVelocity::unchecked(target, std::move(psi));
}

SpectralVelocity normalize_to_sphere(const SpectralVelocity& u) {
  const double h = norms(u).h;
  if (!(h > 0.0) || !std::isfinite(h))
    throw ValidationError("normalize_to_sphere: zero or non-finite field");
  return scale(1.0 / h, u);
}

SpectralVelocity random_field(std::uint64_t seed, SpacePtr space,
                              double decay) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  std::vector<Complex> psi(space->size(), Complex{0.0, 0.0});
  for (std::size_t i = 0; i < space->size(); ++i) {
    const auto& k = space->mode(i);
    if (!GalerkinSpace::is_canonical(k)) continue;
    const double r = std::pow(std::sqrt(double(k.abs_sq())), -decay);
    const double ph = phase(rng);
    psi[i] = Complex{r * std::cos(ph), r * std::sin(ph)};
    psi[static_cast<std::size_t>(space->conjugate_index(i))] =
        std::conj(psi[i]);
  }
  return normalize_to_sphere(SpectralVelocity::unchecked(space, std::move(psi)));
}

SpectralVelocity eigenmode_field(SpacePtr space, ModeIndex k) {
  const int i = space->index_of(k.k1, k.k2);
  if (i < 0 || (k.k1 == 0 && k.k2 == 0))
    throw ValidationError("eigenmode_field: mode outside space");
  std::vector<Complex> psi(space->size(), Complex{0.0, 0.0});
  psi[static_cast<std::size_t>(i)] = Complex{1.0, 0.0};
  psi[static_cast<std::size_t>(space->index_of(-k.k1, -k.k2))] =
      Complex{1.0, 0.0};
  return normalize_to_sphere(SpectralVelocity::unchecked(space, std::move(psi)));
}

SpectralVelocity axpy(double a, const SpectralVelocity& x,
                      const SpectralVelocity& y) {
  require_same_space(x, y, "axpy");
  std::vector<Complex> psi(x.space().size());
  for (std::size_t i = 0; i < psi.size(); ++i)
    psi[i] = Complex{a * x.psi(i).real() + y.psi(i).real(),
                     a * x.psi(i).imag() + y.psi(i).imag()};
  return SpectralVelocity::unchecked(x.space_ptr(), std::move(psi));
}

SpectralVelocity scale(double a, const SpectralVelocity& x) {
  std::vector<Complex> psi(x.space().size());
  for (std::size_t i = 0; i < psi.size(); ++i)
    psi[i] = Complex{a * x.psi(i).real(), a * x.psi(i).imag()};
  return SpectralVelocity::unchecked(x.space_ptr(), std::move(psi));
}

SpectralVelocity sub(const SpectralVelocity& x, const SpectralVelocity& y) {
  require_same_space(x, y, "sub");
  std::vector<Complex> psi(x.space().size());
  for (std::size_t i = 0; i < psi.size(); ++i)
    psi[i] = Complex{x.psi(i).real() - y.psi(i).real(),
                     x.psi(i).imag() - y.psi(i).imag()};
  return SpectralVelocity::unchecked(x.space_ptr(), std::move(psi));
}

}  // namespace scns
