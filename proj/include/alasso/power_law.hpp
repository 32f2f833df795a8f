#pragma once

#include <cmath>
#include <stdexcept>

#include "alasso/extended_real.hpp"

namespace alasso {

/// The sequence coef * n^(-exponent), coef > 0.
///
/// Tuning and parameter sequences are restricted to this family: it realizes
/// every limit regime the classifier distinguishes while keeping limits such
/// as n^(1/2)*mu_n or theta_n/mu_n exactly computable from the exponents.
struct PowerLawSequence {
  double coef = 1.0;
  double exponent = 0.0;

  PowerLawSequence() = default;
  PowerLawSequence(double c, double a) : coef(c), exponent(a) {
    if (!(c > 0.0) || !std::isfinite(c)) throw std::domain_error("PowerLawSequence: coef must be positive and finite");
    if (!std::isfinite(a)) throw std::domain_error("PowerLawSequence: exponent must be finite");
  }

  double eval(double n) const { return coef * std::pow(n, -exponent); }
};

enum class LimitForm { ratio, product, sqrt_n_scaled };

namespace detail {

/// Limit of coef * n^(exponent_of_n) as n -> inf, for any real coef.
inline ExtendedReal signed_power_limit(double coef, double exponent_of_n) {
  if (coef == 0.0) return ExtendedReal(0.0);
  if (exponent_of_n > 0.0) return coef > 0.0 ? ExtendedReal::pos_inf() : ExtendedReal::neg_inf();
  if (exponent_of_n < 0.0) return ExtendedReal(0.0);
  return ExtendedReal(coef);
}

}  // namespace detail

/// Exact limit (as n -> inf) of a_n/b_n, a_n*b_n, or n^(1/2)*a_n, read off
/// the coefficients and exponents.  seq_b is ignored for sqrt_n_scaled.
inline ExtendedReal limit_of(const PowerLawSequence& seq_a, const PowerLawSequence& seq_b, LimitForm form) {
  switch (form) {
    case LimitForm::ratio:
      return detail::signed_power_limit(seq_a.coef / seq_b.coef, seq_b.exponent - seq_a.exponent);
    case LimitForm::product:
      return detail::signed_power_limit(seq_a.coef * seq_b.coef, -(seq_a.exponent + seq_b.exponent));
    case LimitForm::sqrt_n_scaled:
      return detail::signed_power_limit(seq_a.coef, 0.5 - seq_a.exponent);
  }
  throw std::logic_error("limit_of: unknown form");
}

}  // namespace alasso
