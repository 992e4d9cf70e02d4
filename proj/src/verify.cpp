#include "scns/verify.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>

#include "scns/operators.hpp"

namespace scns {

bool VerifyReport::pass() const {
  for (const auto& id : identities)
    if (!id.pass()) return false;
  return true;
}

SpectralVelocity quantized_random_field(std::uint64_t seed, SpacePtr space,
                                        double decay) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  auto quantize = [](double x) {  // keep 26 significant bits
    int e = 0;
    std::frexp(x, &e);
    return std::ldexp(std::round(std::ldexp(x, 26 - e)), e - 26);
  };
  std::vector<Complex> psi(space->size(), Complex{0.0, 0.0});
  for (std::size_t i = 0; i < space->size(); ++i) {
    const auto& k = space->mode(i);
    if (!GalerkinSpace::is_canonical(k)) continue;
    const double r = std::pow(std::sqrt(double(k.abs_sq())), -decay);
    const double ph = phase(rng);
    psi[i] = Complex{quantize(r * std::cos(ph)), quantize(r * std::sin(ph))};
    psi[std::size_t(space->conjugate_index(i))] = std::conj(psi[i]);
  }
  return SpectralVelocity::unchecked(space, std::move(psi));
}

namespace {

double h_dist(const SpectralVelocity& a, const SpectralVelocity& b) {
  return norms(sub(a, b)).h;
}

bool bitwise_equal(const SpectralVelocity& a, const SpectralVelocity& b) {
  return std::memcmp(a.psi().data(), b.psi().data(),
                     a.psi().size() * sizeof(Complex)) == 0;
}

}  // namespace

VerifyReport run_verify_suite(std::ostream& out,
                              const std::vector<int>& cutoffs,
                              int fields_per_cutoff, std::uint64_t seed) {
  // Dyadic directions keep the commutation check exactly representable.
  const NoiseModel noise({{0.5, 0.0}, {0.0, 0.5}, {0.25, 0.375}});

  IdentityResult b_uuu{"b(u,u,u) / ||u||_V^3", 0.0, 1e-12};
  IdentityResult b_energy{"<B(u),u>_H / ||u||_V^3", 0.0, 1e-12};
  IdentityResult b_stokes{"<B(u),Au>_H / (||u||_V^2 |u|_DA)", 0.0, 1e-12};
  IdentityResult skew{"<C u,v> + <u,C v> (scaled)", 0.0, 1e-12};
  IdentityResult cu_u{"<C u,u>_H (scaled)", 0.0, 1e-12};
  IdentityResult comm{"AC - CA (bitwise)", 0.0, 0.0};
  IdentityResult oracle{"nonlinear vs nonlinear_direct (rel)", 0.0, 1e-11};

  std::uint64_t field_seed = seed;
  for (const int n : cutoffs) {
    auto space = build_space(n);
    for (int rep = 0; rep < fields_per_cutoff; ++rep) {
      const auto u = quantized_random_field(field_seed++, space, 2.0);
      const auto v = quantized_random_field(field_seed++, space, 2.0);
      const auto nt = norms(u);
      const double v_norm = std::sqrt(nt.v_sq);
      const double da_graph = std::sqrt(nt.h * nt.h + nt.da_sq);

      const double buuu = std::abs(trilinear_b(u, u, u));
      b_uuu.max_residual =
          std::max(b_uuu.max_residual, buuu / (v_norm * v_norm * v_norm));

      const auto bu = nonlinear(u);
      b_energy.max_residual =
          std::max(b_energy.max_residual,
                   std::abs(inner_h(bu, u)) / (v_norm * v_norm * v_norm));
      b_stokes.max_residual =
          std::max(b_stokes.max_residual,
                   std::abs(inner_h(bu, stokes(u))) / (nt.v_sq * da_graph));

      const auto direct = nonlinear_direct(u);
      oracle.max_residual = std::max(
          oracle.max_residual, h_dist(bu, direct) / norms(direct).h);

      for (int j = 0; j < noise.m(); ++j) {
        const auto cu = transport(noise, j, u);
        const auto cv = transport(noise, j, v);
        const double scale =
            norms(cu).h * norms(v).h + norms(u).h * norms(cv).h;
        skew.max_residual = std::max(
            skew.max_residual,
            std::abs(inner_h(cu, v) + inner_h(u, cv)) / scale);
        cu_u.max_residual =
            std::max(cu_u.max_residual,
                     std::abs(inner_h(cu, u)) / (norms(cu).h * norms(u).h));
        if (!bitwise_equal(stokes(cu), transport(noise, j, stokes(u))))
          comm.max_residual = 1.0;  // any bit difference fails
      }
    }
  }

  VerifyReport rep;
  rep.identities = {b_uuu, b_energy, b_stokes, skew, cu_u, comm, oracle};
  for (const auto& id : rep.identities) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-44s max residual %.3e  bound %.0e  %s",
                  id.name.c_str(), id.max_residual, id.bound,
                  id.pass() ? "PASS" : "FAIL");
    out << line << '\n';
  }
  return rep;
}

}  // namespace scns
