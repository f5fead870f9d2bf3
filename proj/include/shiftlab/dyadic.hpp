#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace shiftlab {

/// Scalar that stays exact as long as the value is representable as
/// mant * 2^exp with a 64-bit odd mantissa.  Anything that leaves that set
/// (division by a non power of two, mantissa overflow, an inexact input)
/// drops the value to a double carrier and clears the exact flag; the flag
/// then propagates through every operation.
class Dyadic {
 public:
  constexpr Dyadic() = default;
  constexpr Dyadic(std::int64_t n) { assign_exact(n, 0); }  // NOLINT(google-explicit-constructor)

  static constexpr Dyadic from_mantissa_exponent(std::int64_t mant, std::int32_t exp) {
    Dyadic d;
    d.assign_exact(mant, exp);
    return d;
  }

  /// 2^e.
  static constexpr Dyadic pow2(std::int32_t e) { return from_mantissa_exponent(1, e); }

  /// Every finite double is a dyadic rational; this stays exact.
  static Dyadic from_double(double v) {
    if (!std::isfinite(v)) return inexact(v);
    if (v == 0.0) return Dyadic{};
    int e = 0;
    const double m = std::frexp(v, &e);
    // m in [0.5, 1); 53 significant bits.
    const auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
    Dyadic d;
    d.assign_exact(mant, e - 53);
    return d;
  }

  /// Double carrier with the exact flag cleared.
  static Dyadic inexact(double v) {
    Dyadic d;
    d.exact_ = false;
    d.approx_ = v;
    return d;
  }

  constexpr bool exact() const { return exact_; }
  constexpr bool is_zero() const { return exact_ ? mant_ == 0 : approx_ == 0.0; }
  constexpr std::int64_t mantissa() const { return mant_; }
  constexpr std::int32_t exponent() const { return exp_; }
  constexpr bool is_power_of_two_magnitude() const { return exact_ && (mant_ == 1 || mant_ == -1); }

  int sign() const {
    if (exact_) return mant_ == 0 ? 0 : (mant_ > 0 ? 1 : -1);
    return approx_ == 0.0 ? 0 : (approx_ > 0.0 ? 1 : -1);
  }

  double to_double() const { return exact_ ? std::ldexp(static_cast<double>(mant_), exp_) : approx_; }

  Dyadic operator-() const {
    if (!exact_) return inexact(-approx_);
    if (mant_ == std::numeric_limits<std::int64_t>::min()) return inexact(-to_double());
    return from_mantissa_exponent(-mant_, exp_);
  }

  Dyadic abs() const { return sign() < 0 ? -*this : *this; }

  /// Exact multiplication by 2^e.
  Dyadic mul_pow2(std::int32_t e) const {
    if (!exact_) return inexact(std::ldexp(approx_, e));
    if (mant_ == 0) return Dyadic{};
    return from_mantissa_exponent(mant_, exp_ + e);
  }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    if (a.exact_ && b.exact_) {
      if (a.mant_ == 0) return b;
      if (b.mant_ == 0) return a;
      const Dyadic& lo = a.exp_ <= b.exp_ ? a : b;
      const Dyadic& hi = a.exp_ <= b.exp_ ? b : a;
      const std::int32_t gap = hi.exp_ - lo.exp_;
      if (gap <= 63) {
        const __int128 sum = (static_cast<__int128>(hi.mant_) << gap) + lo.mant_;
        Dyadic r;
        if (r.try_assign_wide(sum, lo.exp_)) return r;
      }
      // The exact sum needs more than 64 mantissa bits.
    }
    return inexact(a.to_double() + b.to_double());
  }

  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    if (a.exact_ && b.exact_) {
      if (a.mant_ == 0 || b.mant_ == 0) return Dyadic{};
      const __int128 prod = static_cast<__int128>(a.mant_) * b.mant_;
      Dyadic r;
      if (r.try_assign_wide(prod, a.exp_ + b.exp_)) return r;
    }
    return inexact(a.to_double() * b.to_double());
  }

  /// Exact when the divisor's mantissa divides this one's (always true for
  /// power-of-two divisors).
  friend Dyadic operator/(const Dyadic& a, const Dyadic& b) {
    if (a.exact_ && b.exact_ && b.mant_ != 0) {
      if (a.mant_ == 0) return Dyadic{};
      if (a.mant_ % b.mant_ == 0)
        return from_mantissa_exponent(a.mant_ / b.mant_, a.exp_ - b.exp_);
    }
    return inexact(a.to_double() / b.to_double());
  }

  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }
  Dyadic& operator*=(const Dyadic& o) { return *this = *this * o; }

  /// Exact three-way comparison whenever both sides are exact.
  friend int compare(const Dyadic& a, const Dyadic& b) {
    if (a.exact_ && b.exact_) {
      const int sa = a.sign(), sb = b.sign();
      if (sa != sb) return sa < sb ? -1 : 1;
      if (sa == 0) return 0;
      const int la = a.floor_log2_abs(), lb = b.floor_log2_abs();
      if (la != lb) return (la < lb) == (sa > 0) ? -1 : 1;
      // Same binary magnitude: exponents are within 62 of each other.
      const std::int32_t gap = a.exp_ - b.exp_;
      const __int128 ma = gap >= 0 ? (static_cast<__int128>(a.mant_) << gap) : a.mant_;
      const __int128 mb = gap <= 0 ? (static_cast<__int128>(b.mant_) << -gap) : b.mant_;
      return ma == mb ? 0 : (ma < mb ? -1 : 1);
    }
    const double da = a.to_double(), db = b.to_double();
    return da == db ? 0 : (da < db ? -1 : 1);
  }

  friend bool operator==(const Dyadic& a, const Dyadic& b) { return compare(a, b) == 0; }
  friend bool operator!=(const Dyadic& a, const Dyadic& b) { return compare(a, b) != 0; }
  friend bool operator<(const Dyadic& a, const Dyadic& b) { return compare(a, b) < 0; }
  friend bool operator<=(const Dyadic& a, const Dyadic& b) { return compare(a, b) <= 0; }
  friend bool operator>(const Dyadic& a, const Dyadic& b) { return compare(a, b) > 0; }
  friend bool operator>=(const Dyadic& a, const Dyadic& b) { return compare(a, b) >= 0; }

 private:
  constexpr void assign_exact(std::int64_t mant, std::int32_t exp) {
    if (mant == 0) {
      mant_ = 0;
      exp_ = 0;
    } else {
      while ((mant & 1) == 0) {
        mant >>= 1;
        ++exp;
      }
      mant_ = mant;
      exp_ = exp;
    }
    exact_ = true;
    approx_ = 0.0;
  }

  bool try_assign_wide(__int128 mant, std::int32_t exp) {
    if (mant == 0) {
      assign_exact(0, 0);
      return true;
    }
    while ((mant & 1) == 0) {
      mant >>= 1;
      ++exp;
    }
    constexpr __int128 lo = std::numeric_limits<std::int64_t>::min();
    constexpr __int128 hi = std::numeric_limits<std::int64_t>::max();
    if (mant < lo || mant > hi) return false;
    assign_exact(static_cast<std::int64_t>(mant), exp);
    return true;
  }

  int floor_log2_abs() const {
    // Valid for exact nonzero values.
    const auto m = mant_ == std::numeric_limits<std::int64_t>::min()
                       ? static_cast<std::uint64_t>(1) << 63
                       : static_cast<std::uint64_t>(mant_ < 0 ? -mant_ : mant_);
    return 63 - __builtin_clzll(m) + exp_;
  }

  std::int64_t mant_ = 0;
  std::int32_t exp_ = 0;
  double approx_ = 0.0;
  bool exact_ = true;
};

}  // namespace shiftlab
