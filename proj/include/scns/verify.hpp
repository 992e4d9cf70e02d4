#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "scns/spectral.hpp"

namespace scns {

/// One identity of the operator verification suite: the worst observed
/// residual over all sampled fields, and the bound it must satisfy.
struct IdentityResult {
  std::string name;
  double max_residual = 0.0;
  double bound = 0.0;
  bool pass() const { return max_residual <= bound; }
};

struct VerifyReport {
  std::vector<IdentityResult> identities;
  bool pass() const;
};

/// Runs the operator identity suite on seeded random fields over the given
/// cutoffs, printing one line per identity. Exercised identities:
/// b(u,u,u), <B(u),u>_H, <B(u),Au>_H, transport skew-symmetry, <C_j u,u>_H,
/// Stokes/transport commutation (bit-exact), and the spectral/direct
/// nonlinearity oracle equivalence.
VerifyReport run_verify_suite(std::ostream& out,
                              const std::vector<int>& cutoffs = {2, 4, 6},
                              int fields_per_cutoff = 50,
                              std::uint64_t seed = 0x5C25ULL);

/// Random field whose coefficient components carry at most 26 significant
/// bits (decay envelope, random phases, no normalization). With dyadic noise
/// directions, products of the Stokes and transport symbols with these
/// coefficients are exactly representable, so the commutation identity can
/// be asserted bitwise.
SpectralVelocity quantized_random_field(std::uint64_t seed, SpacePtr space,
                                        double decay);

}  // namespace scns
