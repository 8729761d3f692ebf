#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace gptlab {

/// Numerical thresholds shared by every module.
struct Tolerances {
  double herm = 1e-9;     ///< Hermiticity and inner-product imaginary parts
  double norm = 1e-9;     ///< ket norms, unit trace
  double open = 1e-9;     ///< "(0,1)" is tested as (open, 1 - open); "= 1" within open
  double hull = 1e-7;     ///< LP residual for hull membership and vertex feasibility
  double sing = 1e-10;    ///< |det| below which a 3x3 hyperplane system is skipped
  double dedupe = 1e-7;   ///< merge radius for enumerated vertices
  double prob = 1e-9;     ///< normalization, non-signalling and negativity checks

  /// Defaults, with GPTLAB_TOLERANCE (if set) replacing the arithmetic
  /// tolerances herm, norm, open and prob.
  static Tolerances from_environment() {
    Tolerances t;
    if (const char* env = std::getenv("GPTLAB_TOLERANCE"); env != nullptr && *env != '\0') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(env, &used);
      } catch (const std::exception&) {
        throw std::invalid_argument(std::string("GPTLAB_TOLERANCE is not a number: ") + env);
      }
      if (used != std::string(env).size() || !(v > 0.0))
        throw std::invalid_argument(std::string("GPTLAB_TOLERANCE must be a positive number: ") + env);
      t.herm = t.norm = t.open = t.prob = v;
    }
    return t;
  }
};

/// A checked invariant failed on a computed object (distribution, space, ...).
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gptlab
