#pragma once

#include <stdexcept>
#include <string>

namespace scns {

/// Invalid configuration or precondition violation (CLI exit code 1).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A time integration produced a non-finite or absurdly large state
/// (CLI exit code 2). Carries the time of the last valid state.
class BlowupError : public std::runtime_error {
 public:
  BlowupError(const std::string& what, double t_last, double h, double v_sq)
      : std::runtime_error(what), t_last(t_last), h_norm(h), v_norm_sq(v_sq) {}
  double t_last;
  double h_norm;
  double v_norm_sq;
};

}  // namespace scns
