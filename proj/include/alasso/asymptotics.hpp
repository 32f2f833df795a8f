#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "alasso/exact_dist.hpp"
#include "alasso/extended_real.hpp"
#include "alasso/location_model.hpp"
#include "alasso/normal.hpp"
#include "alasso/power_law.hpp"

namespace alasso {

// Large-sample regimes of the tuning sequence mu_n = c * n^(-alpha) and the
// limit laws of the centered/scaled estimate along parameter sequences
// theta_n.  Within the power-law family every relevant limit (sqrt(n)*mu_n,
// theta_n/mu_n, sqrt(n)*mu_n^2/theta_n, ...) is computed exactly from
// coefficients and exponents.

enum class TuningKind { conservative, consistent, degenerate_zero };

struct TuningRegime {
  ExtendedReal m_limit;      // lim sqrt(n) * mu_n
  TuningKind kind = TuningKind::conservative;
  bool oracle_condition = false;  // n^(1/4) * mu_n -> 0
  ExtendedReal rho_limit;    // lim sqrt(n) * mu_n^2
};

/// Parameter sequences theta_n.  Two families:
///  - signed power law  b * n^(-beta)  (b may be any real, including 0);
///  - knife edge        sign * mu_n + s * n^(-1/2)  with sign in {-1, +1},
///    the only way to reach |theta_n/mu_n| -> 1 with a nontrivial limit of
///    sqrt(n) * (mu_n - zeta * theta_n).
struct ThetaSequence {
  enum class Kind { power_law, knife_edge };
  Kind kind = Kind::power_law;
  double coef = 0.0;      // b (power law) or s (knife edge)
  double exponent = 0.0;  // beta (power law only)
  int edge_sign = 1;      // zeta in {-1,+1} (knife edge only)

  static ThetaSequence zero() { return power(0.0, 0.0); }
  static ThetaSequence fixed(double b) { return power(b, 0.0); }
  static ThetaSequence power(double b, double beta) {
    if (!std::isfinite(b) || !std::isfinite(beta)) throw std::domain_error("ThetaSequence: non-finite parameter");
    ThetaSequence t;
    t.kind = Kind::power_law;
    t.coef = b;
    t.exponent = beta;
    return t;
  }
  static ThetaSequence knife_edge(int sign, double s) {
    if (sign != 1 && sign != -1) throw std::domain_error("ThetaSequence: knife-edge sign must be +/-1");
    if (!std::isfinite(s)) throw std::domain_error("ThetaSequence: non-finite parameter");
    ThetaSequence t;
    t.kind = Kind::knife_edge;
    t.coef = s;
    t.edge_sign = sign;
    return t;
  }

  double eval(const PowerLawSequence& mu, double n) const {
    if (kind == Kind::power_law) return coef * std::pow(n, -exponent);
    return edge_sign * mu.eval(n) + coef / std::sqrt(n);
  }
};

namespace seq_limits {

/// nu = lim sqrt(n) * theta_n
inline ExtendedReal nu(const PowerLawSequence& mu, const ThetaSequence& th) {
  if (th.kind == ThetaSequence::Kind::power_law)
    return detail::signed_power_limit(th.coef, 0.5 - th.exponent);
  return detail::signed_power_limit(th.edge_sign * mu.coef, 0.5 - mu.exponent) + ExtendedReal(th.coef);
}

/// zeta = lim theta_n / mu_n
inline ExtendedReal zeta(const PowerLawSequence& mu, const ThetaSequence& th) {
  if (th.kind == ThetaSequence::Kind::power_law)
    return detail::signed_power_limit(th.coef / mu.coef, mu.exponent - th.exponent);
  return ExtendedReal(th.edge_sign) + detail::signed_power_limit(th.coef / mu.coef, mu.exponent - 0.5);
}

/// r = lim sqrt(n) * (mu_n - zeta * theta_n), defined when |zeta| = 1.
inline ExtendedReal knife_edge_r(const PowerLawSequence& mu, const ThetaSequence& th, double zeta_value) {
  if (th.kind == ThetaSequence::Kind::power_law) {
    // |zeta| = 1 forces beta = alpha, so mu_n - zeta*theta_n is again a
    // power law with coefficient c - zeta*b
    return detail::signed_power_limit(mu.coef - zeta_value * th.coef, 0.5 - mu.exponent);
  }
  return ExtendedReal(-th.edge_sign * th.coef);
}

/// lim sqrt(n) * mu_n^2 / theta_n, defined when theta_n != 0 eventually.
inline ExtendedReal mu_sq_over_theta(const PowerLawSequence& mu, const ThetaSequence& th) {
  if (th.kind == ThetaSequence::Kind::power_law) {
    if (th.coef == 0.0) throw std::domain_error("mu_sq_over_theta: theta sequence is identically zero");
    return detail::signed_power_limit(mu.coef * mu.coef / th.coef, 0.5 - 2.0 * mu.exponent + th.exponent);
  }
  // theta_n ~ sign * mu_n, so the ratio behaves like sign * sqrt(n) * mu_n
  return detail::signed_power_limit(static_cast<double>(th.edge_sign) * mu.coef, 0.5 - mu.exponent);
}

}  // namespace seq_limits

/// Phi extended to +/-inf arguments.
inline double phi_cdf_ext(const ExtendedReal& x) {
  if (x.is_pos_inf()) return 1.0;
  if (x.is_neg_inf()) return 0.0;
  return phi_cdf(x.finite_value());
}

/// Classify the tuning sequence.  Requires mu_n -> 0 (exponent > 0); the
/// estimator is not consistent otherwise and no regime applies.
inline TuningRegime classify_tuning(const PowerLawSequence& mu_seq) {
  if (!(mu_seq.exponent > 0.0))
    throw std::domain_error("classify_tuning: mu_n does not tend to 0 (estimator not consistent)");
  TuningRegime r;
  r.m_limit = detail::signed_power_limit(mu_seq.coef, 0.5 - mu_seq.exponent);
  r.rho_limit = detail::signed_power_limit(mu_seq.coef * mu_seq.coef, 0.5 - 2.0 * mu_seq.exponent);
  if (r.m_limit.is_pos_inf())
    r.kind = TuningKind::consistent;
  else if (r.m_limit == ExtendedReal(0.0))
    r.kind = TuningKind::degenerate_zero;
  else
    r.kind = TuningKind::conservative;
  r.oracle_condition = mu_seq.exponent > 0.25;  // n^(1/4) mu_n -> 0
  return r;
}

enum class SelProbCase {
  conservative_local,       // finite-m formula at nu = lim sqrt(n) theta_n
  consistent_subthreshold,  // |zeta| < 1: restricted model chosen in the limit
  consistent_knife_edge,    // |zeta| = 1: limit Phi(r)
  consistent_suprathreshold // |zeta| > 1: unrestricted model chosen in the limit
};

struct SelProbLimit {
  double value = 0.0;
  SelProbCase which = SelProbCase::conservative_local;
};

/// Limit of the probability of selecting the restricted model (estimate = 0)
/// along the given sequences.
inline SelProbLimit selprob_limit(const TuningRegime& regime, const PowerLawSequence& mu_seq,
                                  const ThetaSequence& theta_seq) {
  SelProbLimit out;
  if (regime.kind != TuningKind::consistent) {
    const ExtendedReal nu = seq_limits::nu(mu_seq, theta_seq);
    const ExtendedReal m = regime.m_limit;
    out.which = SelProbCase::conservative_local;
    out.value = phi_cdf_ext(-nu + m) - phi_cdf_ext(-nu - m);
    return out;
  }
  const ExtendedReal zeta = seq_limits::zeta(mu_seq, theta_seq);
  if (zeta.abs() < 1.0) {
    out.which = SelProbCase::consistent_subthreshold;
    out.value = 1.0;
  } else if (zeta.abs() > 1.0) {
    out.which = SelProbCase::consistent_suprathreshold;
    out.value = 0.0;
  } else {
    const ExtendedReal r = seq_limits::knife_edge_r(mu_seq, theta_seq, zeta.as_double());
    out.which = SelProbCase::consistent_knife_edge;
    out.value = phi_cdf_ext(r);
  }
  return out;
}

/// Tagged union of every limit law of the centered/scaled estimate.
struct LimitDistribution {
  enum class Tag { point_mass, shifted_normal, conservative_mixture, escape_pos, escape_neg, standard_normal };

  Tag tag = Tag::standard_normal;
  ExtendedReal location;  // point mass position
  double shift = 0.0;     // r in Phi(. + r)
  double nu = 0.0;        // mixture local parameter
  double m = 0.0;         // mixture tuning limit, >= 0
  std::string case_id;    // which classifier branch fired

  static LimitDistribution point_mass(double loc, std::string id) {
    LimitDistribution d;
    d.tag = Tag::point_mass;
    d.location = ExtendedReal(loc);
    d.case_id = std::move(id);
    return d;
  }
  static LimitDistribution shifted_normal(double r, std::string id) {
    LimitDistribution d;
    d.tag = Tag::shifted_normal;
    d.shift = r;
    d.case_id = std::move(id);
    return d;
  }
  static LimitDistribution conservative_mixture(double nu, double m, std::string id) {
    LimitDistribution d;
    d.tag = Tag::conservative_mixture;
    d.nu = nu;
    d.m = m;
    d.case_id = std::move(id);
    return d;
  }
  static LimitDistribution escape(bool cdf_to_one, std::string id) {
    LimitDistribution d;
    d.tag = cdf_to_one ? Tag::escape_pos : Tag::escape_neg;
    d.case_id = std::move(id);
    return d;
  }
  static LimitDistribution standard_normal_law(std::string id) {
    LimitDistribution d;
    d.tag = Tag::standard_normal;
    d.case_id = std::move(id);
    return d;
  }

  /// Pointwise limit of the cdf at x (escape variants are the constant 1/0).
  double cdf(double x) const {
    switch (tag) {
      case Tag::point_mass:
        return x >= location.as_double() ? 1.0 : 0.0;
      case Tag::shifted_normal:
        return phi_cdf(x + shift);
      case Tag::standard_normal:
        return phi_cdf(x);
      case Tag::escape_pos:
        return 1.0;
      case Tag::escape_neg:
        return 0.0;
      case Tag::conservative_mixture: {
        const double rad = std::hypot(0.5 * (nu + x), m);
        if (x + nu >= 0.0) return phi_cdf(-0.5 * (nu - x) + rad);
        return phi_cdf(-0.5 * (nu - x) - rad);
      }
    }
    throw std::logic_error("LimitDistribution::cdf: unknown tag");
  }
};

/// Limit law of sqrt(n)*(est - theta_n) along the given sequences.
inline LimitDistribution limit_F(const TuningRegime& regime, const PowerLawSequence& mu_seq,
                                 const ThetaSequence& theta_seq) {
  if (regime.kind != TuningKind::consistent) {
    const ExtendedReal nu = seq_limits::nu(mu_seq, theta_seq);
    if (nu.is_finite())
      return LimitDistribution::conservative_mixture(nu.finite_value(), regime.m_limit.finite_value(),
                                                     "conservative: finite local parameter nu");
    return LimitDistribution::standard_normal_law("conservative: |nu| = inf");
  }

  const ExtendedReal zeta = seq_limits::zeta(mu_seq, theta_seq);
  if (zeta == ExtendedReal(0.0)) {
    const ExtendedReal nu = seq_limits::nu(mu_seq, theta_seq);
    if (nu.is_finite())
      return LimitDistribution::point_mass(-nu.finite_value(), "consistent: zeta = 0, finite sqrt(n)*theta_n");
    return LimitDistribution::escape(nu.is_pos_inf(), nu.is_pos_inf()
                                                          ? "consistent escape: zeta = 0, sqrt(n)*theta_n -> +inf"
                                                          : "consistent escape: zeta = 0, sqrt(n)*theta_n -> -inf");
  }
  if (zeta.is_finite()) {
    return LimitDistribution::escape(zeta.as_double() > 0.0, zeta.as_double() > 0.0
                                                                 ? "consistent escape: 0 < zeta < inf"
                                                                 : "consistent escape: -inf < zeta < 0");
  }
  const ExtendedReal r = seq_limits::mu_sq_over_theta(mu_seq, theta_seq);
  if (r.is_finite())
    return LimitDistribution::shifted_normal(r.finite_value(), "consistent: |zeta| = inf, finite shift r");
  return LimitDistribution::escape(r.is_pos_inf(), r.is_pos_inf()
                                                       ? "consistent escape: zeta = +inf, sqrt(n)*mu_n^2/theta_n -> +inf"
                                                       : "consistent escape: zeta = -inf, sqrt(n)*mu_n^2/theta_n -> -inf");
}

/// Limit law of (est - theta_n)/mu_n; only the consistent regime is covered
/// (the limits are always point masses).
inline LimitDistribution limit_G(const PowerLawSequence& mu_seq, const ThetaSequence& theta_seq) {
  const TuningRegime regime = classify_tuning(mu_seq);
  if (regime.kind != TuningKind::consistent)
    throw std::domain_error("limit_G: requires a consistent tuning regime (sqrt(n)*mu_n -> inf)");
  const ExtendedReal zeta = seq_limits::zeta(mu_seq, theta_seq);
  if (zeta.abs() < 1.0)
    return LimitDistribution::point_mass(-zeta.finite_value(), "rescaled: |zeta| < 1, mass at -zeta");
  if (zeta.is_finite())
    return LimitDistribution::point_mass(-1.0 / zeta.finite_value(), "rescaled: 1 <= |zeta| < inf, mass at -1/zeta");
  return LimitDistribution::point_mass(0.0, "rescaled: |zeta| = inf, mass at 0");
}

/// Uniform convergence rate a_n = min(sqrt(n), 1/mu_n).
inline double uniform_rate(const PowerLawSequence& mu_seq, std::int64_t n) {
  if (n < 1) throw std::domain_error("uniform_rate: n must be >= 1");
  const double nn = static_cast<double>(n);
  return std::min(std::sqrt(nn), 1.0 / mu_seq.eval(nn));
}

/// Finite-n upper bound on sup_theta P(sqrt(n)|est - y_bar| > eps): the
/// deviation is at most mu_n deterministically, so the bound is
/// 2 * 1(sqrt(n) mu_n > eps).
inline double ml_equivalence_bound(const PowerLawSequence& mu_seq, std::int64_t n, double eps) {
  const double nn = static_cast<double>(n);
  return std::sqrt(nn) * mu_seq.eval(nn) > eps ? 2.0 : 0.0;
}

/// Ratios (z(x) - x) / (sqrt(n) mu_n^2 / theta_n) along n_grid, using the
/// upper root when theta_n -> +inf side and the lower root on the negative
/// side.  The ratios must approach 1.  Requires theta_n/mu_n -> +/-inf and
/// sqrt(n)*theta_n -> +/-inf with matching signs.
inline std::vector<double> root_asymptotics_check(const PowerLawSequence& mu_seq, const ThetaSequence& theta_seq,
                                                  double x, const std::vector<std::int64_t>& n_grid) {
  const ExtendedReal zeta = seq_limits::zeta(mu_seq, theta_seq);
  const ExtendedReal nu = seq_limits::nu(mu_seq, theta_seq);
  const bool pos = zeta.is_pos_inf() && nu.is_pos_inf();
  const bool neg = zeta.is_neg_inf() && nu.is_neg_inf();
  if (!pos && !neg)
    throw std::domain_error(
        "root_asymptotics_check: requires theta_n/mu_n and sqrt(n)*theta_n to diverge with matching signs");
  std::vector<double> ratios;
  ratios.reserve(n_grid.size());
  for (std::int64_t n : n_grid) {
    const double nn = static_cast<double>(n);
    const double theta_n = theta_seq.eval(mu_seq, nn);
    const double mu_n = mu_seq.eval(nn);
    const LocationModel m(n, theta_n, mu_n);
    const RootPair z = roots(m, x);
    const double scale = std::sqrt(nn) * mu_n * mu_n / theta_n;
    ratios.push_back(((pos ? z.z2 : z.z1) - x) / scale);
  }
  return ratios;
}

}  // namespace alasso
