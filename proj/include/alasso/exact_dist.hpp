#pragma once

#include <cmath>
#include <stdexcept>

#include "alasso/estimators.hpp"
#include "alasso/location_model.hpp"
#include "alasso/normal.hpp"
#include "alasso/quadrature.hpp"

namespace alasso {

// Exact finite-sample distribution of the centered and scaled location-model
// estimate: sqrt(n)*(est - theta) under scale sqrt_n, (est - theta)/mu under
// scale inv_mu.  The law is a mixture of a point mass (the event est = 0,
// located at -sqrt(n)*theta resp. -theta/mu) and an absolutely continuous
// part whose density follows from the two roots of a quadratic.

enum class DistScale { sqrt_n, inv_mu };

/// Probability that the estimate is exactly zero, i.e. that the restricted
/// model is selected.
inline double selection_prob(const LocationModel& m) {
  const double s = m.sqrt_n() * m.theta;
  const double h = m.sqrt_n() * m.mu;
  return phi_cdf(-s + h) - phi_cdf(-s - h);
}

/// The ordered roots z1 <= z2 of
///   z^2 + (sqrt(n) theta - x) z - (n mu^2 + sqrt(n) theta x) = 0.
struct RootPair {
  double z1;
  double z2;
};

/// Roots evaluated with the cancellation-safe quadratic formula: the
/// larger-magnitude root first, the other from the product of roots.  The
/// naive form loses the small root entirely once sqrt(n)|theta| >> mu.
inline RootPair roots(const LocationModel& m, double x) {
  if (!std::isfinite(x)) throw std::domain_error("roots: x must be finite");
  const double s = m.sqrt_n() * m.theta;
  const double b = s - x;                                    // z^2 + b z + c
  const double c = -(static_cast<double>(m.n) * m.mu * m.mu + s * x);
  const double disc = std::hypot(0.5 * (s + x), m.sqrt_n() * m.mu);  // > 0 always
  if (b == 0.0) return {-disc, disc};
  const double z_far = -0.5 * b - (b > 0.0 ? disc : -disc);  // |z_far| = |b|/2 + disc > 0
  const double z_near = c / z_far;
  return z_far < z_near ? RootPair{z_far, z_near} : RootPair{z_near, z_far};
}

/// Finite-sample cdf of sqrt(n)*(est - theta) at x (right-continuous).
inline double cdf_F(const LocationModel& m, double x) {
  if (!std::isfinite(x)) throw std::domain_error("cdf_F: x must be finite");
  const double s = m.sqrt_n() * m.theta;
  const RootPair z = roots(m, x);
  return s + x >= 0.0 ? phi_cdf(z.z2) : phi_cdf(z.z1);
}

/// Left limit of cdf_F at x, computed analytically (the indicator flips to a
/// strict inequality); differs from cdf_F only at the atom.
inline double cdf_F_left(const LocationModel& m, double x) {
  if (!std::isfinite(x)) throw std::domain_error("cdf_F_left: x must be finite");
  const double s = m.sqrt_n() * m.theta;
  const RootPair z = roots(m, x);
  return s + x > 0.0 ? phi_cdf(z.z2) : phi_cdf(z.z1);
}

/// Lebesgue density of the absolutely continuous part of cdf_F.  Undefined
/// exactly at the atom x = -sqrt(n)*theta (throws).
inline double density_f(const LocationModel& m, double x) {
  if (!std::isfinite(x)) throw std::domain_error("density_f: x must be finite");
  const double s = m.sqrt_n() * m.theta;
  if (s + x == 0.0) throw std::domain_error("density_f: undefined at the atom x = -sqrt(n)*theta");
  const double disc = std::hypot(0.5 * (s + x), m.sqrt_n() * m.mu);
  const double t = 0.5 * (s + x) / disc;
  const RootPair z = roots(m, x);
  if (s + x > 0.0) return 0.5 * phi_pdf(z.z2) * (1.0 + t);
  return 0.5 * phi_pdf(z.z1) * (1.0 - t);
}

/// Finite-sample cdf of (est - theta)/mu at x; equals cdf_F(sqrt(n)*mu*x).
inline double cdf_G(const LocationModel& m, double x) {
  if (!std::isfinite(x)) throw std::domain_error("cdf_G: x must be finite");
  return cdf_F(m, m.sqrt_n() * m.mu * x);
}

/// Density of the absolutely continuous part of cdf_G (chain rule from
/// density_f); undefined at the atom x = -theta/mu.
inline double density_g(const LocationModel& m, double x) {
  if (!std::isfinite(x)) throw std::domain_error("density_g: x must be finite");
  const double scale = m.sqrt_n() * m.mu;
  if (m.theta / m.mu + x == 0.0) throw std::domain_error("density_g: undefined at the atom x = -theta/mu");
  return scale * density_f(m, scale * x);
}

/// cdf_G through the rescaled roots
///   w = sqrt(n) mu [(-theta/mu + x) -/+ sqrt((theta/mu + x)^2 + 4)]/2;
/// must agree with cdf_G to rounding.  Kept as an independent evaluation
/// route for cross-checking.
inline double cdf_G_wform(const LocationModel& m, double x) {
  if (!std::isfinite(x)) throw std::domain_error("cdf_G_wform: x must be finite");
  const double u = m.theta / m.mu;
  const double h = m.sqrt_n() * m.mu;
  const double rad = std::hypot(u + x, 2.0);
  const double w1 = 0.5 * h * ((-u + x) - rad);
  const double w2 = 0.5 * h * ((-u + x) + rad);
  return u + x >= 0.0 ? phi_cdf(w2) : phi_cdf(w1);
}

struct FiniteSampleDist {
  LocationModel model;
  double atom_location = 0.0;
  double atom_mass = 0.0;
  DistScale scale = DistScale::sqrt_n;
};

inline FiniteSampleDist finite_sample_dist(const LocationModel& m, DistScale scale = DistScale::sqrt_n) {
  FiniteSampleDist d;
  d.model = m;
  d.scale = scale;
  d.atom_mass = selection_prob(m);
  d.atom_location = scale == DistScale::sqrt_n ? -m.sqrt_n() * m.theta : -m.theta / m.mu;
  return d;
}

/// Integral of density_f over [lo, hi], splitting at the atom (where the
/// integrand has a kink and is undefined pointwise).
inline double integrate_density(const LocationModel& m, double lo, double hi, double abs_tol = 1e-9) {
  const double atom = -m.sqrt_n() * m.theta;
  auto f = [&m, atom](double x) {
    if (x == atom) return 0.0;  // Lebesgue-null point; any value integrates the same
    return density_f(m, x);
  };
  if (atom > lo && atom < hi)
    return integrate(f, lo, atom, 0.5 * abs_tol) + integrate(f, atom, hi, 0.5 * abs_tol);
  return integrate(f, lo, hi, abs_tol);
}

/// One draw of the centered/scaled estimate under the model (sqrt_n scale).
inline double sample_scaled_estimate(const LocationModel& m, Rng& rng) {
  const double y_bar = m.theta + rng.normal() / m.sqrt_n();
  return m.sqrt_n() * (alasso_location(y_bar, m.mu) - m.theta);
}

}  // namespace alasso
