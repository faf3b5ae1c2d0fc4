#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <numbers>
#include <utility>

#include "qsc/exact.hpp"

namespace qsc {

/// Signed real stored as sign and log2 of its magnitude.
///
/// Used for the float tower when intermediate quantities (binomials with n in
/// the thousands, n_{r,h} counts, products of small probabilities) would
/// overflow or underflow a double. Sign 0 encodes exactly zero.
class LogReal {
 public:
  constexpr LogReal() = default;

  static LogReal from_log2(int sign, double log2_magnitude) {
    LogReal r;
    if (sign == 0 || log2_magnitude == -std::numeric_limits<double>::infinity()) return r;
    r.sign_ = sign > 0 ? 1 : -1;
    r.log2_ = log2_magnitude;
    return r;
  }

  explicit LogReal(double x) {
    if (x == 0.0) return;
    sign_ = x > 0 ? 1 : -1;
    log2_ = std::log2(std::fabs(x));
  }

  explicit LogReal(const BigInt& x) {
    if (x == 0) return;
    sign_ = x > 0 ? 1 : -1;
    log2_ = log2_big(abs(x));
  }

  explicit LogReal(const Rational& x) {
    if (x == 0) return;
    sign_ = x > 0 ? 1 : -1;
    log2_ = log2_rational(abs(x));
  }

  int sign() const { return sign_; }
  // Meaningless when sign() == 0.
  double log2_magnitude() const { return log2_; }
  bool is_zero() const { return sign_ == 0; }

  double to_double() const { return sign_ == 0 ? 0.0 : sign_ * std::exp2(log2_); }

  LogReal operator-() const {
    LogReal r = *this;
    r.sign_ = -r.sign_;
    return r;
  }

  friend LogReal operator*(const LogReal& a, const LogReal& b) {
    if (a.is_zero() || b.is_zero()) return {};
    return from_log2(a.sign_ * b.sign_, a.log2_ + b.log2_);
  }

  friend LogReal operator/(const LogReal& a, const LogReal& b) {
    if (b.is_zero()) throw DomainError("LogReal division by zero");
    if (a.is_zero()) return {};
    return from_log2(a.sign_ * b.sign_, a.log2_ - b.log2_);
  }

  friend LogReal operator+(const LogReal& a, const LogReal& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const LogReal& big = a.log2_ >= b.log2_ ? a : b;
    const LogReal& small = a.log2_ >= b.log2_ ? b : a;
    const double ratio = std::exp2(small.log2_ - big.log2_);  // in (0, 1]
    if (big.sign_ == small.sign_) {
      return from_log2(big.sign_, big.log2_ + std::log1p(ratio) / std::numbers::ln2);
    }
    if (ratio == 1.0) return {};
    return from_log2(big.sign_, big.log2_ + std::log1p(-ratio) / std::numbers::ln2);
  }

  friend LogReal operator-(const LogReal& a, const LogReal& b) { return a + (-b); }

  LogReal& operator+=(const LogReal& o) { return *this = *this + o; }
  LogReal& operator*=(const LogReal& o) { return *this = *this * o; }

  friend std::partial_ordering operator<=>(const LogReal& a, const LogReal& b) {
    if (a.sign_ != b.sign_) return a.sign_ <=> b.sign_;
    if (a.sign_ == 0) return std::partial_ordering::equivalent;
    return a.sign_ > 0 ? (a.log2_ <=> b.log2_) : (b.log2_ <=> a.log2_);
  }
  friend bool operator==(const LogReal& a, const LogReal& b) {
    return (a <=> b) == std::partial_ordering::equivalent;
  }

  // x^p for x >= 0.
  LogReal pow(double p) const {
    if (sign_ < 0) throw DomainError("LogReal::pow of negative value");
    if (sign_ == 0) return p == 0.0 ? LogReal(1.0) : LogReal{};
    return from_log2(1, log2_ * p);
  }

 private:
  int sign_ = 0;
  double log2_ = 0.0;
};

}  // namespace qsc
