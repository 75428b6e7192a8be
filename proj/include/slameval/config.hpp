#pragma once

#include <cmath>
#include <limits>

#include "slameval/errors.hpp"

namespace slameval {

// Evaluation parameters. Defaults follow the benchmark conventions for a
// small indoor scene: 1 m / 30 deg correctness thresholds, 1 s validity
// window, 60 s re-localization decay.
struct MetricConfig {
  double epsilon = 1.0;       // ATE correctness threshold, meters; +inf allowed
  double phi = 30.0;          // AOE correctness threshold, degrees; +inf allowed
  double delta = 1.0;         // validity window of one estimate, seconds
  double tau = 60.0;          // re-localization score decay constant, seconds
  double rpe_interval = 1.0;  // relative-error evaluation interval, seconds

  void validate() const {
    if (!(epsilon > 0.0)) throw InvalidInputError("epsilon must be positive");
    if (!(phi > 0.0)) throw InvalidInputError("phi must be positive");
    if (!(delta > 0.0) || !std::isfinite(delta)) {
      throw InvalidInputError("delta must be positive and finite");
    }
    if (!(tau > 0.0) || !std::isfinite(tau)) {
      throw InvalidInputError("tau must be positive and finite");
    }
    if (!(rpe_interval > 0.0) || !std::isfinite(rpe_interval)) {
      throw InvalidInputError("rpe_interval must be positive and finite");
    }
  }
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace slameval
