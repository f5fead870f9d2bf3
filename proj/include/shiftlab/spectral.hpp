#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "shiftlab/natset.hpp"

namespace shiftlab {

template <class T>
struct SquareMatrix {
  Nat dim = 0;
  std::vector<T> a;

  explicit SquareMatrix(Nat d) : dim(d), a(d * d, T{}) {
    if (d == 0) throw std::invalid_argument("SquareMatrix: dimension must be >= 1");
  }

  static SquareMatrix identity(Nat d) {
    SquareMatrix m(d);
    for (Nat i = 0; i < d; ++i) m(i, i) = T{1};
    return m;
  }

  T& operator()(Nat i, Nat j) { return a[i * dim + j]; }
  const T& operator()(Nat i, Nat j) const { return a[i * dim + j]; }

  bool is_zero() const {
    for (const T& v : a)
      if (v != T{}) return false;
    return true;
  }

  friend SquareMatrix operator*(const SquareMatrix& x, const SquareMatrix& y) {
    if (x.dim != y.dim) throw std::invalid_argument("SquareMatrix: dimension mismatch");
    SquareMatrix r(x.dim);
    for (Nat i = 0; i < x.dim; ++i)
      for (Nat k = 0; k < x.dim; ++k) {
        const T v = x(i, k);
        if (v == T{}) continue;
        for (Nat j = 0; j < x.dim; ++j) r(i, j) += v * y(k, j);
      }
    return r;
  }
};

namespace detail {

// Accumulator type wide enough for exact integer runs (d <= 8, n <= 30,
// modest entries); doubles accumulate in double.
template <class T>
struct wide_scalar {
  using type = T;
};
template <>
struct wide_scalar<std::int64_t> {
  using type = __int128;
};
template <class T>
using wide_t = typename wide_scalar<T>::type;

template <class T>
std::vector<wide_t<T>> apply(const SquareMatrix<T>& m, const std::vector<wide_t<T>>& v) {
  std::vector<wide_t<T>> out(m.dim, wide_t<T>{});
  for (Nat i = 0; i < m.dim; ++i)
    for (Nat j = 0; j < m.dim; ++j) out[i] += static_cast<wide_t<T>>(m(i, j)) * v[j];
  return out;
}

template <class T>
wide_t<T> pair(const std::vector<wide_t<T>>& v, const std::vector<T>& functional) {
  wide_t<T> s{};
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * static_cast<wide_t<T>>(functional[i]);
  return s;
}

}  // namespace detail

template <class T>
struct BinomialCheck {
  detail::wide_t<T> lhs{};         // binomial-sum route
  detail::wide_t<T> rhs{};         // iterated-power route
  detail::wide_t<T> term_scale{};  // sum of |C(n,k) <(S-I)^k x, x*>|

  bool exact_equal() const { return lhs == rhs; }

  /// Defect relative to the magnitude of the summed terms.  The two routes
  /// agree exactly in exact arithmetic; in floating point the cancellation
  /// across terms makes this the meaningful error measure.
  double relative_defect() const {
    const double scale = std::max(static_cast<double>(term_scale), 1e-300);
    return std::abs(static_cast<double>(lhs) - static_cast<double>(rhs)) / scale;
  }
};

/// Both sides of the binomial-transform identity
///   sum_{k=0}^n C(n,k) <(S-I)^k x, x*>  =  <S^n x, x*>.
/// The left side evaluates the binomial sum, the right side iterates the
/// matrix; they are independent computation routes for the same number.
template <class T>
BinomialCheck<T> binomial_transform(const SquareMatrix<T>& s, const std::vector<T>& x,
                                    const std::vector<T>& xstar, Nat n) {
  using W = detail::wide_t<T>;
  if (x.size() != s.dim || xstar.size() != s.dim)
    throw std::invalid_argument("binomial_transform: dimension mismatch");

  SquareMatrix<T> d = s;
  for (Nat i = 0; i < s.dim; ++i) d(i, i) -= T{1};

  std::vector<W> v(x.begin(), x.end());
  BinomialCheck<T> out;
  W binom{1};
  for (Nat k = 0; k <= n; ++k) {
    if (k > 0) {
      binom = binom * static_cast<W>(n - k + 1) / static_cast<W>(k);
      v = detail::apply(d, v);
    }
    const W term = binom * detail::pair<T>(v, xstar);
    out.lhs += term;
    out.term_scale += term < W{} ? -term : term;
  }

  std::vector<W> w(x.begin(), x.end());
  for (Nat k = 0; k < n; ++k) w = detail::apply(s, w);
  out.rhs = detail::pair<T>(w, xstar);
  return out;
}

/// Sign-change return times of f(n) = <S^n x, x*>:
///   {n in [1, horizon] : f(n) > 0 and f(n+1) < 0},
/// together with the lower-density profile of that set.  f is evaluated by
/// iterated application; the state is rescaled by powers of two when it
/// leaves [2^-512, 2^512], which preserves every sign.
inline std::pair<NatSet, DensityProfile> return_count_by_sign_change(const SquareMatrix<double>& s,
                                                                     const std::vector<double>& x,
                                                                     const std::vector<double>& xstar,
                                                                     Nat horizon) {
  if (x.size() != s.dim || xstar.size() != s.dim)
    throw std::invalid_argument("return_count_by_sign_change: dimension mismatch");
  if (horizon < 1) throw std::invalid_argument("return_count_by_sign_change: horizon must be >= 1");

  std::vector<double> y(x);
  std::vector<Nat> hits;
  double f_cur = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) f_cur += y[i] * xstar[i];
  auto step = [&]() {
    std::vector<double> out(s.dim, 0.0);
    for (Nat i = 0; i < s.dim; ++i)
      for (Nat j = 0; j < s.dim; ++j) out[i] += s(i, j) * y[j];
    y = std::move(out);
    double peak = 0.0;
    for (double v : y) peak = std::max(peak, std::fabs(v));
    if (peak > 0x1p512 || (peak > 0.0 && peak < 0x1p-512)) {
      int e = 0;
      std::frexp(peak, &e);
      for (double& v : y) v = std::ldexp(v, -e);
    }
    double f = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) f += y[i] * xstar[i];
    return f;
  };
  double f_next = step();  // f(1)
  for (Nat n = 1; n <= horizon; ++n) {
    f_cur = f_next;
    f_next = step();  // f(n+1)
    if (f_cur > 0.0 && f_next < 0.0) hits.push_back(n);
  }
  NatSet returns(std::move(hits), horizon);
  DensityProfile profile = density_profile(returns, DensityKind::lower, horizon);
  return {std::move(returns), std::move(profile)};
}

struct NilpotencyReport {
  bool nilpotent = false;
  Nat index = 0;  // smallest m with S^m = 0 when nilpotent
};

/// S is nilpotent iff S^dim = 0 (finite-dimensional stand-in for a vanishing
/// spectral radius).
template <class T>
NilpotencyReport nilpotency_check(const SquareMatrix<T>& s) {
  SquareMatrix<T> p = s;
  for (Nat m = 1; m <= s.dim; ++m) {
    if (p.is_zero()) return {true, m};
    if (m < s.dim) p = p * s;
  }
  return {false, 0};
}

}  // namespace shiftlab
