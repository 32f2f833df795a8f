#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace alasso {

/// A real number extended with -inf/+inf, totally ordered.
///
/// Limits of scaled parameter sequences live in the extended reals, so this
/// type shows up wherever a regime is classified.  Indeterminate forms
/// (inf - inf, 0 * inf) throw instead of producing a sentinel: every such
/// case is excluded by a regime precondition, so reaching one is a caller
/// bug that must not propagate silently as NaN.
class ExtendedReal {
 public:
  ExtendedReal() : v_(0.0) {}
  ExtendedReal(double v) : v_(v) {
    if (std::isnan(v)) throw std::domain_error("ExtendedReal: NaN is not an extended real");
  }

  static ExtendedReal pos_inf() { return ExtendedReal(std::numeric_limits<double>::infinity()); }
  static ExtendedReal neg_inf() { return ExtendedReal(-std::numeric_limits<double>::infinity()); }

  bool is_finite() const { return std::isfinite(v_); }
  bool is_pos_inf() const { return v_ == std::numeric_limits<double>::infinity(); }
  bool is_neg_inf() const { return v_ == -std::numeric_limits<double>::infinity(); }
  bool is_inf() const { return !is_finite(); }

  /// Finite value; throws if infinite.
  double finite_value() const {
    if (!is_finite()) throw std::domain_error("ExtendedReal: value is infinite");
    return v_;
  }

  /// Raw double, with infinities mapped to IEEE +/-inf.
  double as_double() const { return v_; }

  int sign() const { return v_ > 0 ? 1 : (v_ < 0 ? -1 : 0); }

  friend bool operator<(const ExtendedReal& a, const ExtendedReal& b) { return a.v_ < b.v_; }
  friend bool operator<=(const ExtendedReal& a, const ExtendedReal& b) { return a.v_ <= b.v_; }
  friend bool operator>(const ExtendedReal& a, const ExtendedReal& b) { return a.v_ > b.v_; }
  friend bool operator>=(const ExtendedReal& a, const ExtendedReal& b) { return a.v_ >= b.v_; }
  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) { return a.v_ == b.v_; }
  friend bool operator!=(const ExtendedReal& a, const ExtendedReal& b) { return a.v_ != b.v_; }

  friend ExtendedReal operator-(const ExtendedReal& a) { return ExtendedReal(-a.v_); }

  friend ExtendedReal operator+(const ExtendedReal& a, const ExtendedReal& b) {
    if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf()))
      throw std::domain_error("ExtendedReal: indeterminate form inf - inf");
    return ExtendedReal(a.v_ + b.v_);
  }

  friend ExtendedReal operator-(const ExtendedReal& a, const ExtendedReal& b) { return a + (-b); }

  friend ExtendedReal operator*(const ExtendedReal& a, const ExtendedReal& b) {
    if ((a.v_ == 0.0 && b.is_inf()) || (a.is_inf() && b.v_ == 0.0))
      throw std::domain_error("ExtendedReal: indeterminate form 0 * inf");
    return ExtendedReal(a.v_ * b.v_);
  }

  double abs() const { return std::fabs(v_); }

  std::string str() const {
    if (is_pos_inf()) return "inf";
    if (is_neg_inf()) return "-inf";
    return std::to_string(v_);
  }

 private:
  double v_;
};

}  // namespace alasso
