#pragma once

#include <ostream>
#include <vector>

#include "scns/integrator.hpp"

namespace scns {

/// Strong dt-refinement study on one Brownian path (bridge-refined across
/// levels): errors e_l = max_t |u_{dt_l}(t) - u_{dt_l/2}(t)|_H over the
/// coarsest time grid, plus the least-squares order fit.
struct DtStudy {
  std::vector<double> dts;     // coarsest first, halved per level
  std::vector<double> errors;  // one per adjacent level pair
  std::vector<double> ratios;  // e_l / e_{l+1}
  double fitted_order = 0.0;
  bool pass = false;  // every ratio >= 1.8
};

DtStudy dt_convergence_study(const SimConfig& base, const SpectralVelocity& u0,
                             int levels);

/// Galerkin refinement study: same path and initial field (zero-padded into
/// the finer space), differences |u_n - u_{2n}|_{C([0,T];H)}.
struct NStudy {
  std::vector<int> cutoffs;  // n, 2n, 4n, ...
  std::vector<double> diffs;
  bool pass = false;  // strictly decreasing
};

NStudy n_convergence_study(const SimConfig& base, int levels);

void print_study(std::ostream& out, const DtStudy& s);
void print_study(std::ostream& out, const NStudy& s);

}  // namespace scns
