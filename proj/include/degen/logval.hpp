#pragma once

#include <cmath>
#include <limits>

#include "degen/errors.hpp"

namespace degen {

/// Nonnegative real carried in log-domain: stores ln(value) plus a zero flag.
///
/// The Young-function chains evaluated in this project reach values like
/// exp((theta+j)^m), far beyond double range, so every quantity that can pass
/// through such a chain is kept as its natural log.  Multiplication adds
/// logs, powers scale logs, and addition goes through log-sum-exp.
class LogVal {
 public:
  constexpr LogVal() : log_(-std::numeric_limits<double>::infinity()), zero_(true) {}

  static constexpr LogVal zero() { return LogVal(); }
  static constexpr LogVal one() { return LogVal(0.0); }

  static LogVal from_log(double log_value) { return LogVal(log_value); }

  static LogVal from_value(double v) {
    if (v < 0.0 || std::isnan(v)) throw domain_error("LogVal::from_value: negative or NaN");
    if (v == 0.0) return zero();
    return LogVal(std::log(v));
  }

  bool is_zero() const { return zero_; }

  /// ln of the represented value; throws on exact zero.
  double log() const {
    if (zero_) throw domain_error("LogVal::log: value is exactly zero");
    return log_;
  }

  double log_or(double if_zero) const { return zero_ ? if_zero : log_; }

  /// exp(log); may overflow to +inf or underflow to 0 for extreme magnitudes.
  double value() const { return zero_ ? 0.0 : std::exp(log_); }

  LogVal operator*(const LogVal& o) const {
    if (zero_ || o.zero_) return zero();
    return LogVal(log_ + o.log_);
  }

  LogVal operator/(const LogVal& o) const {
    if (o.zero_) throw domain_error("LogVal: division by zero");
    if (zero_) return zero();
    return LogVal(log_ - o.log_);
  }

  /// v^p.  0^p = 0 for p > 0; 0^0 and negative powers of zero are domain errors.
  LogVal pow(double p) const {
    if (zero_) {
      if (p > 0.0) return zero();
      throw domain_error("LogVal::pow: zero base with nonpositive exponent");
    }
    return LogVal(log_ * p);
  }

  /// Log-sum-exp addition.
  LogVal operator+(const LogVal& o) const {
    if (zero_) return o;
    if (o.zero_) return *this;
    const double a = std::max(log_, o.log_);
    const double b = std::min(log_, o.log_);
    return LogVal(a + std::log1p(std::exp(b - a)));
  }

  LogVal& operator+=(const LogVal& o) {
    *this = *this + o;
    return *this;
  }

  /// a - b for a >= b; throws if the difference would be negative.
  static LogVal diff(const LogVal& a, const LogVal& b) {
    if (b.zero_) return a;
    if (a < b) throw domain_error("LogVal::diff: negative result");
    if (a.log_ == b.log_) return zero();
    // log(e^x - e^y) = x + log(1 - e^(y-x))
    const double d = b.log_ - a.log_;
    const double t = -std::expm1(d);
    if (t <= 0.0) return zero();
    return LogVal(a.log_ + std::log(t));
  }

  bool operator==(const LogVal& o) const {
    if (zero_ || o.zero_) return zero_ == o.zero_;
    return log_ == o.log_;
  }
  bool operator<(const LogVal& o) const {
    if (zero_) return !o.zero_;
    if (o.zero_) return false;
    return log_ < o.log_;
  }
  bool operator<=(const LogVal& o) const { return *this < o || *this == o; }
  bool operator>(const LogVal& o) const { return o < *this; }
  bool operator>=(const LogVal& o) const { return o <= *this; }

 private:
  explicit constexpr LogVal(double log_value) : log_(log_value), zero_(false) {}

  double log_;
  bool zero_;
};

}  // namespace degen
