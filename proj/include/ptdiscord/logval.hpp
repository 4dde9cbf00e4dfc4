#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ptdiscord {

// Signed log-domain scalar: value = sign * exp(log_abs). Covariance
// invariants grow like exp(4 kappa t) in the unstable regimes, where products
// such as a*b*d leave double range long before the entries do; all invariant
// algebra downstream of the propagators runs on this type.
class LogVal {
 public:
  constexpr LogVal() = default;

  static LogVal from_value(double x) {
    if (x == 0.0) return LogVal{};
    if (std::isnan(x)) throw std::invalid_argument("LogVal: NaN input");
    return LogVal{x > 0.0 ? 1 : -1, std::log(std::abs(x))};
  }

  static LogVal from_log(int sign, double log_abs) {
    if (sign == 0) return LogVal{};
    return LogVal{sign > 0 ? 1 : -1, log_abs};
  }

  int sign() const { return sign_; }
  double log_abs() const { return log_; }
  bool is_zero() const { return sign_ == 0; }

  // Rounds to 0 below and +-inf above double range.
  double value() const { return sign_ == 0 ? 0.0 : sign_ * std::exp(log_); }

  LogVal operator-() const { return LogVal{-sign_, log_}; }

  LogVal operator*(const LogVal& o) const {
    if (sign_ == 0 || o.sign_ == 0) return LogVal{};
    return LogVal{sign_ * o.sign_, log_ + o.log_};
  }

  LogVal operator/(const LogVal& o) const {
    if (o.sign_ == 0) throw std::domain_error("LogVal: division by zero");
    if (sign_ == 0) return LogVal{};
    return LogVal{sign_ * o.sign_, log_ - o.log_};
  }

  LogVal operator+(const LogVal& o) const {
    if (sign_ == 0) return o;
    if (o.sign_ == 0) return *this;
    const LogVal& big = (log_ >= o.log_) ? *this : o;
    const LogVal& small = (log_ >= o.log_) ? o : *this;
    const double r = std::exp(small.log_ - big.log_);  // in (0, 1]
    if (big.sign_ == small.sign_)
      return LogVal{big.sign_, big.log_ + std::log1p(r)};
    const double m = 1.0 - r;
    if (m <= 0.0) return LogVal{};  // exact cancellation
    return LogVal{big.sign_, big.log_ + std::log(m)};
  }

  LogVal operator-(const LogVal& o) const { return *this + (-o); }

  LogVal sqrt() const {
    if (sign_ < 0) throw std::domain_error("LogVal: sqrt of negative");
    if (sign_ == 0) return LogVal{};
    return LogVal{1, 0.5 * log_};
  }

  // Sign-aware ordering.
  bool operator<(const LogVal& o) const {
    if (sign_ != o.sign_) return sign_ < o.sign_;
    if (sign_ == 0) return false;
    return sign_ > 0 ? log_ < o.log_ : log_ > o.log_;
  }
  bool operator<=(const LogVal& o) const { return !(o < *this); }
  bool operator>(const LogVal& o) const { return o < *this; }
  bool operator>=(const LogVal& o) const { return !(*this < o); }

 private:
  constexpr LogVal(int s, double l) : sign_(s), log_(l) {}
  int sign_ = 0;
  double log_ = -std::numeric_limits<double>::infinity();
};

}  // namespace ptdiscord
