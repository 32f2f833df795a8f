#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace alasso {

/// Gaussian location problem: n i.i.d. N(theta, 1) observations, estimated
/// with tuning parameter mu (same units as theta).
struct LocationModel {
  std::int64_t n = 1;
  double theta = 0.0;
  double mu = 1.0;

  LocationModel() = default;
  LocationModel(std::int64_t n_, double theta_, double mu_) : n(n_), theta(theta_), mu(mu_) {
    if (n < 1) throw std::domain_error("LocationModel: n must be >= 1");
    if (!std::isfinite(theta)) throw std::domain_error("LocationModel: theta must be finite");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw std::domain_error("LocationModel: mu must be positive and finite");
  }

  double sqrt_n() const { return std::sqrt(static_cast<double>(n)); }
};

}  // namespace alasso
