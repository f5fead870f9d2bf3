#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "shiftlab/natset.hpp"
#include "shiftlab/shiftop.hpp"

using namespace shiftlab;

namespace {

// Independent oracle: walk every start element.
APWitness brute_longest_ap(const NatSet& a, Nat k) {
  APWitness best{0, k, 0};
  for (Nat s : a.elements()) {
    Nat len = 0;
    for (Nat v = s; v <= a.horizon() && a.contains(v); v += k) ++len;
    if (len > best.length) best = {s, k, len};
  }
  return best;
}

// Independent oracle: every window start.
double brute_banach_upper(const NatSet& a, Nat window) {
  Nat best = 0;
  for (Nat s = 1; s + window - 1 <= a.horizon(); ++s)
    best = std::max(best, a.count_leq(s + window - 1) - a.count_leq(s - 1));
  return static_cast<double>(best) / static_cast<double>(window);
}

NatSet squarefree_set(Nat horizon) {
  std::vector<char> sf(horizon + 1, 1);
  for (Nat d = 2; d * d <= horizon; ++d)
    for (Nat m = d * d; m <= horizon; m += d * d) sf[m] = 0;
  return NatSet::of(horizon, [&](Nat n) { return sf[n] == 1; });
}

NatSet random_set(std::mt19937& rng, Nat horizon, double p) {
  std::bernoulli_distribution coin(p);
  return NatSet::of(horizon, [&](Nat) { return coin(rng); });
}

}  // namespace

TEST_CASE("NatSet validates its invariants") {
  CHECK_THROWS_AS(NatSet({0}, 10), std::invalid_argument);
  CHECK_THROWS_AS(NatSet({3, 3}, 10), std::invalid_argument);
  CHECK_THROWS_AS(NatSet({5, 4}, 10), std::invalid_argument);
  CHECK_THROWS_AS(NatSet({11}, 10), std::invalid_argument);
  const NatSet a({2, 5, 9}, 10);
  CHECK(a.contains(5));
  CHECK_FALSE(a.contains(4));
  CHECK(a.count_leq(5) == 2);
}

TEST_CASE("longest AP: full interval, empty set") {
  const NatSet a({1, 2, 3, 4, 5}, 5);
  const auto w = longest_ap_fixed_difference(a, 1);
  REQUIRE(w.has_value());
  CHECK(w->start == 1);
  CHECK(w->length == 5);
  CHECK(w->verify(a));
  CHECK_FALSE(longest_ap_fixed_difference(NatSet({}, 10), 3).has_value());
}

TEST_CASE("longest AP of difference 1 in the squarefree numbers is 3") {
  const NatSet sf = squarefree_set(10000);
  const auto w = longest_ap_fixed_difference(sf, 1);
  REQUIRE(w.has_value());
  // Oracle one: brute force.  Oracle two: among any 4 consecutive integers
  // one is divisible by 4, so no run of length 4 exists.
  const APWitness brute = brute_longest_ap(sf, 1);
  CHECK(w->length == brute.length);
  CHECK(w->start == brute.start);
  CHECK(w->length == 3);
  CHECK(w->start == 1);
}

TEST_CASE("ap_profile matches the per-k search") {
  const NatSet a({3, 6, 9, 12}, 12);
  const APProfile p = ap_profile(a, 3);
  CHECK(p.at(1)->length == 1);
  CHECK(p.at(2)->length == 1);
  CHECK(p.at(3)->length == 4);
  CHECK(p.at(3)->start == 3);
  CHECK(ap_score(p) == 4);

  const NatSet evens = NatSet::of(100, [](Nat n) { return n % 2 == 0; });
  const APProfile q = ap_profile(evens, 2);
  CHECK(q.at(1)->length == 1);
  CHECK(q.at(2)->length == 50);
}

TEST_CASE("the counterexample support contains 9-term runs") {
  const NatSet s = counterexample::support_set(100000);
  const auto w = longest_ap_fixed_difference(s, 1);
  REQUIRE(w.has_value());
  CHECK(w->length >= 9);  // [l*10^4 - 4, l*10^4 + 4] is a block of S
  // brute-force scan around 10^4 confirms the block
  for (Nat n = 9996; n <= 10004; ++n) CHECK(s.contains(n));
  CHECK_FALSE(s.contains(9995));
  CHECK_FALSE(s.contains(10005));
}

TEST_CASE("DP equals brute force on random sets") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const NatSet a = random_set(rng, 400, 0.35);
    for (Nat k = 1; k <= 7; ++k) {
      const auto w = longest_ap_fixed_difference(a, k);
      const APWitness brute = brute_longest_ap(a, k);
      if (!w) {
        CHECK(brute.length == 0);
        continue;
      }
      CHECK(w->length == brute.length);
      CHECK(w->start == brute.start);
      CHECK(w->verify(a));
    }
  }
}

TEST_CASE("hereditary monotonicity: a subset never has a longer AP") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const NatSet b = random_set(rng, 300, 0.4);
    std::bernoulli_distribution keep(0.7);
    std::vector<Nat> sub;
    for (Nat v : b.elements())
      if (keep(rng)) sub.push_back(v);
    const NatSet a(std::move(sub), b.horizon());
    for (Nat k = 1; k <= 5; ++k) {
      const Nat la = longest_ap_fixed_difference(a, k).value_or(APWitness{}).length;
      const Nat lb = longest_ap_fixed_difference(b, k).value_or(APWitness{}).length;
      CHECK(la <= lb);
    }
  }
}

TEST_CASE("density: evens have lower density 1/2") {
  const NatSet evens = NatSet::of(1000000, [](Nat n) { return n % 2 == 0; });
  const DensityProfile p = density_profile(evens, DensityKind::lower, 1000000);
  CHECK(p.estimate == Catch::Approx(0.5).margin(1e-5));
  for (const auto& s : p.samples) {
    CHECK(s.ratio >= 0.0);
    CHECK(s.ratio <= 1.0);
  }
}

TEST_CASE("density: squarefree numbers against the direct count oracle") {
  const NatSet sf = squarefree_set(1000000);
  const DensityProfile p = density_profile(sf, DensityKind::lower, 1000000);
  const double direct = static_cast<double>(sf.size()) / 1e6;
  CHECK(std::fabs(p.estimate - direct) <= 1e-3);
  CHECK(p.estimate == Catch::Approx(0.6079).margin(1e-3));  // limiting value 6/pi^2
}

TEST_CASE("banach-upper density of the counterexample support is 1 at window 9") {
  const NatSet s = counterexample::support_set(100000);
  const DensityProfile p = density_profile(s, DensityKind::banach_upper, 9);
  CHECK(p.estimate == 1.0);
}

TEST_CASE("banach-upper equals the all-starts oracle") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const NatSet a = random_set(rng, 1500, 0.2);
    for (Nat w : {Nat{3}, Nat{10}, Nat{64}, Nat{1500}})
      CHECK(density_profile(a, DensityKind::banach_upper, w).estimate == brute_banach_upper(a, w));
  }
}

TEST_CASE("invalid window is rejected") {
  const NatSet a({1, 2}, 10);
  CHECK_THROWS_AS(density_profile(a, DensityKind::lower, 11), std::invalid_argument);
  CHECK_THROWS_AS(density_profile(a, DensityKind::banach_upper, 0), std::invalid_argument);
}

TEST_CASE("shift_left") {
  const NatSet a({5, 7, 9}, 9);
  CHECK(shift_left(a, 4) == NatSet({1, 3, 5}, 5));
  CHECK(shift_left(a, 0) == a);
  CHECK(shift_left(a, 6) == NatSet({1, 3}, 3));
  CHECK(shift_left(a, 9).empty());
}

TEST_CASE("an AP forces Banach density m/((m-1)k+1)") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    NatSet a = random_set(rng, 900, 0.1);
    const Nat k = 1 + trial % 4, m = 3 + trial % 5, start = 50 + 10 * (trial % 7);
    std::vector<Nat> elems = a.elements();
    for (Nat j = 0; j < m; ++j) elems.push_back(start + j * k);
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    a = NatSet(std::move(elems), 900);
    const Nat window = (m - 1) * k + 1;
    const double est = density_profile(a, DensityKind::banach_upper, window).estimate;
    CHECK(est >= static_cast<double>(m) / static_cast<double>(window));
  }
}

TEST_CASE("shift compatibility of AP length") {
  std::mt19937 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const NatSet a = random_set(rng, 500, 0.45);
    for (Nat k = 1; k <= 4; ++k) {
      const auto w = longest_ap_fixed_difference(a, k);
      if (!w) continue;
      const Nat n = trial % 3 == 0 ? 0 : w->start > 1 ? w->start - 1 : 0;
      if (w->start <= n) continue;
      const auto ws = longest_ap_fixed_difference(shift_left(a, n), k);
      const Nat ceil_nk = (n + k - 1) / k;
      const Nat bound = w->length > ceil_nk ? w->length - ceil_nk : 0;
      CHECK(ws.value_or(APWitness{}).length >= bound);
    }
  }
}

TEST_CASE("estimator ordering at matched windows") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const NatSet a = random_set(rng, 800, 0.3);
    const DensityProfile lo = density_profile(a, DensityKind::lower, 800);
    const DensityProfile hi = density_profile(a, DensityKind::upper, 800);
    CHECK(lo.estimate <= hi.estimate);
    // [1, n] is itself one of the windows of size n.
    for (const auto& s : hi.samples) {
      const double banach = density_profile(a, DensityKind::banach_upper, s.n).estimate;
      CHECK(s.ratio <= banach + 1e-12);
    }
  }
}
