#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "shiftlab/spectral.hpp"

using namespace shiftlab;

namespace {

SquareMatrix<std::int64_t> random_int_matrix(std::mt19937& rng, Nat d, int bound) {
  std::uniform_int_distribution<std::int64_t> e(-bound, bound);
  SquareMatrix<std::int64_t> m(d);
  for (Nat i = 0; i < d; ++i)
    for (Nat j = 0; j < d; ++j) m(i, j) = e(rng);
  return m;
}

std::vector<std::int64_t> random_int_vector(std::mt19937& rng, Nat d, int bound) {
  std::uniform_int_distribution<std::int64_t> e(-bound, bound);
  std::vector<std::int64_t> v(d);
  for (auto& x : v) x = e(rng);
  return v;
}

}  // namespace

TEST_CASE("binomial transform: identity operator collapses to the pairing") {
  const auto s = SquareMatrix<std::int64_t>::identity(4);
  std::mt19937 rng(3);
  const auto x = random_int_vector(rng, 4, 9);
  const auto f = random_int_vector(rng, 4, 9);
  __int128 pairing = 0;
  for (Nat i = 0; i < 4; ++i) pairing += static_cast<__int128>(x[i]) * f[i];
  for (Nat n : {Nat{0}, Nat{1}, Nat{5}, Nat{17}}) {
    const auto r = binomial_transform(s, x, f, n);
    CHECK(r.lhs == pairing);
    CHECK(r.rhs == pairing);
  }
}

TEST_CASE("binomial transform: S = 2I gives 2^n") {
  SquareMatrix<std::int64_t> s(3);
  for (Nat i = 0; i < 3; ++i) s(i, i) = 2;
  const std::vector<std::int64_t> x{1, 0, 0}, f{1, 0, 0};  // <x, x*> = 1
  for (Nat n : {Nat{1}, Nat{7}, Nat{20}}) {
    const auto r = binomial_transform(s, x, f, n);
    CHECK(r.lhs == static_cast<__int128>(1) << n);
    CHECK(r.exact_equal());
  }
}

TEST_CASE("binomial transform: exact equality on random integer instances") {
  std::mt19937 rng(20240813);
  std::uniform_int_distribution<Nat> dim(1, 6), order(0, 20);
  for (int trial = 0; trial < 300; ++trial) {
    const Nat d = dim(rng);
    const auto s = random_int_matrix(rng, d, 3);
    const auto x = random_int_vector(rng, d, 4);
    const auto f = random_int_vector(rng, d, 4);
    CHECK(binomial_transform(s, x, f, order(rng)).exact_equal());
  }
}

TEST_CASE("binomial transform: exact up to n = 30, d = 8 on sign matrices") {
  std::mt19937 rng(510);
  std::uniform_int_distribution<std::int64_t> sign(-1, 1);
  for (int trial = 0; trial < 50; ++trial) {
    SquareMatrix<std::int64_t> s(8);
    for (auto& v : s.a) v = sign(rng);
    std::vector<std::int64_t> x(8), f(8);
    for (auto& v : x) v = sign(rng);
    for (auto& v : f) v = sign(rng);
    CHECK(binomial_transform(s, x, f, 30).exact_equal());
  }
}

TEST_CASE("binomial transform: float instances stay within 1e-9 relative error") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  std::uniform_int_distribution<Nat> dim(2, 6), order(1, 20);
  for (int trial = 0; trial < 200; ++trial) {
    const Nat d = dim(rng);
    SquareMatrix<double> s(d);
    double rowsum = 0.0;
    for (Nat i = 0; i < d; ++i) {
      double r = 0.0;
      for (Nat j = 0; j < d; ++j) {
        s(i, j) = entry(rng);
        r += std::fabs(s(i, j));
      }
      rowsum = std::max(rowsum, r);
    }
    if (rowsum > 2.0)  // keep ||S|| <= 2
      for (auto& v : s.a) v *= 2.0 / rowsum;
    std::vector<double> x(d), f(d);
    for (auto& v : x) v = entry(rng);
    for (auto& v : f) v = entry(rng);
    CHECK(binomial_transform(s, x, f, order(rng)).relative_defect() <= 1e-9);
  }
}

TEST_CASE("sign-change returns: rotation by pi visits on the even steps") {
  SquareMatrix<double> s(2);
  s(0, 0) = -1.0;
  s(1, 1) = -1.0;
  const auto [returns, profile] = return_count_by_sign_change(s, {1.0, 0.0}, {1.0, 0.0}, 10000);
  for (Nat n : returns.elements()) CHECK(n % 2 == 0);
  CHECK(returns.size() == 5000);
  CHECK(profile.estimate == Catch::Approx(0.5).margin(1e-3));
}

TEST_CASE("sign-change returns: constant positive f never returns") {
  const auto s = SquareMatrix<double>::identity(3);
  const auto [returns, profile] = return_count_by_sign_change(s, {1.0, 1.0, 0.0}, {1.0, 0.0, 0.0}, 1000);
  CHECK(returns.empty());
  CHECK(profile.estimate == 0.0);
}

TEST_CASE("nilpotent S - I forces the return density to zero") {
  // S = I + N with N the 4x4 Jordan nilpotent: f(n) is a polynomial in n of
  // degree < 4, eventually one-signed, so sign changes stop occurring.
  const Nat d = 4;
  SquareMatrix<double> s(d);
  for (Nat i = 0; i < d; ++i) {
    s(i, i) = 1.0;
    if (i + 1 < d) s(i, i + 1) = 1.0;
  }
  const std::vector<double> x{1.0, -2.0, 3.0, -1.0}, f{2.0, 1.0, -1.0, 1.0};
  const auto [returns, profile] = return_count_by_sign_change(s, x, f, 10000);
  CHECK(returns.size() <= d - 1);
  CHECK(profile.estimate <= static_cast<double>(d) / 1e3);
}

TEST_CASE("growth does not overflow the sign scan") {
  SquareMatrix<double> s(2);
  s(0, 0) = 2.0;
  s(1, 1) = -2.0;
  // f(n) = 2^n - (-2)^n alternates between 0 and positive; no overflow at
  // horizon 10^4 thanks to rescaling, and no spurious sign changes appear.
  const auto [returns, profile] = return_count_by_sign_change(s, {1.0, 1.0}, {1.0, -1.0}, 10000);
  CHECK(returns.empty());
  (void)profile;
}

TEST_CASE("nilpotency check") {
  SquareMatrix<std::int64_t> upper(4);
  upper(0, 1) = 3;
  upper(1, 2) = -2;
  upper(2, 3) = 1;
  const NilpotencyReport rep = nilpotency_check(upper);
  CHECK(rep.nilpotent);
  CHECK(rep.index == 4);

  CHECK_FALSE(nilpotency_check(SquareMatrix<std::int64_t>::identity(3)).nilpotent);

  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto m = random_int_matrix(rng, 4, 5);
    for (Nat i = 0; i < 4; ++i) m(i, i) += 7;  // diagonally dominant, invertible
    CHECK_FALSE(nilpotency_check(m).nilpotent);
  }

  SquareMatrix<std::int64_t> zero(2);
  const NilpotencyReport z = nilpotency_check(zero);
  CHECK(z.nilpotent);
  CHECK(z.index == 1);
}
