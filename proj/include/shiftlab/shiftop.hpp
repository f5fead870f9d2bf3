#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shiftlab/dyadic.hpp"
#include "shiftlab/natset.hpp"
#include "shiftlab/seqspace.hpp"

namespace shiftlab {

// ---------------------------------------------------------------------------
// The counterexample support set S = U_{l,j>=1} [l*10^j - j, l*10^j + j].
//
// Every interval of S is centered at a multiple of 10: the one around center
// m has radius v(m) = max{j : 10^j divides m}.  Radii stay below 20 within
// 64 bits, so a membership query only inspects the handful of centers near
// n.  Intervals of distinct centers can touch once radii reach 8 (around
// 10^8 and beyond), which merges them into longer runs; run lookup walks
// across adjacent intervals.
// ---------------------------------------------------------------------------

namespace counterexample {

/// Largest j with 10^j | m, for m a positive multiple of 10.
inline Nat ten_adic_valuation(Nat m) {
  Nat v = 0;
  while (m % 10 == 0) {
    m /= 10;
    ++v;
  }
  return v;
}

/// Some interval center covering n, or 0 when n is outside S.
inline Nat block_center(Nat n) {
  if (n < 9) return 0;
  const Nat anchor = n / 10 * 10;
  for (Nat m = anchor > 30 ? anchor - 30 : 10; m <= anchor + 30; m += 10) {
    const Nat dist = n > m ? n - m : m - n;
    if (dist <= ten_adic_valuation(m)) return m;
  }
  return 0;
}

inline bool in_support(Nat n) { return block_center(n) != 0; }

/// First element of the maximal run of S containing n (n must be in S).
inline Nat block_start(Nat n) {
  Nat m = block_center(n);
  Nat start = m - ten_adic_valuation(m);
  while (start > 1 && in_support(start - 1)) {
    m = block_center(start - 1);
    start = m - ten_adic_valuation(m);
  }
  return start;
}

/// n in (S+1) \ S: the index right after a maximal block, where the running
/// weight product resets to 1.
inline bool is_reset_index(Nat n) { return n >= 2 && !in_support(n) && in_support(n - 1); }

/// S truncated to [1, horizon].
inline NatSet support_set(Nat horizon) {
  std::vector<Nat> e;
  for (Nat m = 10; m <= horizon + 30; m += 10) {
    const Nat v = ten_adic_valuation(m);
    const Nat lo = m - v;
    for (Nat n = lo; n <= m + v && n <= horizon; ++n) e.push_back(n);
  }
  // Intervals overlap near very round centers; normalize.
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return NatSet(std::move(e), horizon);
}

}  // namespace counterexample

// ---------------------------------------------------------------------------
// Weight rules
// ---------------------------------------------------------------------------

/// Rule producing the weight sequence (w_n) of a backward shift.
///
/// The counterexample kind is the weight sequence
///   w_n = 2                    if n in S,
///   w_n = prod_{l<n} w_l^{-1}  if n in (S+1) \ S,
///   w_n = 1                    otherwise,
/// whose running product 2^{E(n)} has exponent E(n) equal to the offset of n
/// into its S-block (and 0 off S); E resets to 0 right after every block.
class WeightRule {
 public:
  enum class Kind { constant, explicit_list, counterexample };

  static WeightRule constant(const Dyadic& lambda) {
    if (lambda.is_zero()) throw std::invalid_argument("WeightRule: weights must be nonzero");
    WeightRule r;
    r.kind_ = Kind::constant;
    r.lambda_ = lambda;
    return r;
  }

  static WeightRule explicit_list(std::vector<Dyadic> weights) {
    WeightRule r;
    r.kind_ = Kind::explicit_list;
    r.list_ = std::move(weights);
    r.list_exponent_exact_ = true;
    r.list_prefix_exp_.assign(1, 0);
    r.list_prefix_log2_.assign(1, 0.0);
    for (const Dyadic& w : r.list_) {
      if (w.is_zero()) throw std::invalid_argument("WeightRule: weights must be nonzero");
      r.list_exponent_exact_ = r.list_exponent_exact_ && w.is_power_of_two_magnitude();
      r.list_prefix_exp_.push_back(r.list_prefix_exp_.back() + (w.is_power_of_two_magnitude() ? w.exponent() : 0));
      r.list_prefix_log2_.push_back(r.list_prefix_log2_.back() + std::log2(std::fabs(w.to_double())));
    }
    return r;
  }

  static WeightRule counterexample() {
    WeightRule r;
    r.kind_ = Kind::counterexample;
    return r;
  }

  Kind kind() const { return kind_; }

  Dyadic weight(Nat n) const {
    if (n == 0) throw std::out_of_range("WeightRule: indices are 1-based");
    switch (kind_) {
      case Kind::constant:
        return lambda_;
      case Kind::explicit_list:
        if (n > list_.size()) throw std::out_of_range("WeightRule: index beyond explicit weight list");
        return list_[n - 1];
      case Kind::counterexample:
        if (counterexample::in_support(n)) return Dyadic(2);
        if (counterexample::is_reset_index(n))
          return Dyadic::pow2(static_cast<std::int32_t>(-product_exponent(n - 1)));
        return Dyadic(1);
    }
    throw std::logic_error("WeightRule: unreachable");
  }

  /// True when |w_1 ... w_n| is an exact power of two for every n, so the
  /// running product is carried as an integer exponent.
  bool exponent_exact() const {
    switch (kind_) {
      case Kind::constant:
        return lambda_.is_power_of_two_magnitude();
      case Kind::explicit_list:
        return list_exponent_exact_;
      case Kind::counterexample:
        return true;
    }
    return false;
  }

  /// e with |w_1 ... w_n| = 2^e (exact rules only); e = 0 for n = 0.
  std::int64_t product_exponent(Nat n) const {
    switch (kind_) {
      case Kind::constant:
        return static_cast<std::int64_t>(lambda_.exponent()) * static_cast<std::int64_t>(n);
      case Kind::explicit_list:
        if (n >= list_prefix_exp_.size()) throw std::out_of_range("WeightRule: index beyond explicit weight list");
        return list_prefix_exp_[n];
      case Kind::counterexample: {
        if (n == 0 || !counterexample::in_support(n)) return 0;
        return static_cast<std::int64_t>(n - counterexample::block_start(n) + 1);
      }
    }
    throw std::logic_error("WeightRule: unreachable");
  }

  /// log2 |w_1 ... w_n|; equals product_exponent on exact rules.
  double product_log2(Nat n) const {
    switch (kind_) {
      case Kind::constant:
        return std::log2(std::fabs(lambda_.to_double())) * static_cast<double>(n);
      case Kind::explicit_list:
        if (n >= list_prefix_log2_.size()) throw std::out_of_range("WeightRule: index beyond explicit weight list");
        return list_prefix_log2_[n];
      case Kind::counterexample:
        return static_cast<double>(product_exponent(n));
    }
    throw std::logic_error("WeightRule: unreachable");
  }

  /// w_{a+1} * ... * w_b as a scalar (exact for power-of-two rules).
  Dyadic weight_product(Nat a, Nat b) const {
    if (b < a) throw std::invalid_argument("WeightRule: empty product bounds reversed");
    if (exponent_exact()) {
      const std::int64_t e = product_exponent(b) - product_exponent(a);
      Dyadic p = Dyadic::pow2(static_cast<std::int32_t>(e));
      return product_sign(a, b) < 0 ? -p : p;
    }
    Dyadic p(1);
    for (Nat v = a + 1; v <= b; ++v) p = p * weight(v);
    return p;
  }

 private:
  int product_sign(Nat a, Nat b) const {
    if (kind_ == Kind::counterexample) return 1;
    if (kind_ == Kind::constant) return lambda_.sign() < 0 && ((b - a) % 2 == 1) ? -1 : 1;
    int s = 1;
    for (Nat v = a + 1; v <= b; ++v)
      if (weight(v).sign() < 0) s = -s;
    return s;
  }

  Kind kind_ = Kind::constant;
  Dyadic lambda_ = Dyadic(1);
  std::vector<Dyadic> list_;
  std::vector<std::int64_t> list_prefix_exp_;
  std::vector<double> list_prefix_log2_;
  bool list_exponent_exact_ = true;
};

// ---------------------------------------------------------------------------
// Shift action and orbits
// ---------------------------------------------------------------------------

/// (B_w x)_n = w_{n+1} x_{n+1}; B_w e_1 = 0.
inline SeqVector apply_shift(const WeightRule& rule, const SeqVector& x) {
  SeqVector out;
  for (const auto& [i, v] : x.coords())
    if (i >= 2) out.set(i - 1, rule.weight(i) * v);
  return out;
}

struct OrbitRecord {
  std::vector<std::pair<Nat, SeqVector>> steps;  // (n, B_w^n x), n = 0..T
  bool exact = true;
};

/// Steps 0..T of the orbit; once the zero vector is reached all later steps
/// are zero and are recorded without further shifting.
inline OrbitRecord orbit(const WeightRule& rule, const SeqVector& x, Nat T) {
  OrbitRecord rec;
  rec.steps.reserve(T + 1);
  SeqVector cur = x;
  rec.exact = cur.exact();
  rec.steps.emplace_back(0, cur);
  for (Nat n = 1; n <= T; ++n) {
    if (!cur.is_zero()) {
      cur = apply_shift(rule, cur);
      rec.exact = rec.exact && cur.exact();
    }
    rec.steps.emplace_back(n, cur);
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Chaos criterion (finite-horizon diagnostic)
// ---------------------------------------------------------------------------

enum class Verdict { pass, fail, inconclusive };

/// Finite-horizon verdict on whether sum_n e_n / (w_1...w_n) can lie in the
/// space.  Thresholds are documented heuristics, not theorems:
///  - a "reset" is an index with running-product exponent <= 0 (a series term
///    of norm >= 1); two or more resets in the top half of the horizon fail
///    the rule, with the entry transitions (exponent dropping from > 0 to
///    <= 0) as witnesses when any exist, otherwise the reset indices
///    themselves;
///  - c0 passes when the exponent over the top half stays >= growth_floor and
///    never dips below its value at horizon/2;
///  - lp passes when the top half contributes at most a 2^-growth_floor share
///    of the partial sums of (w_1...w_n)^-p.
struct ChaosVerdict {
  Verdict verdict = Verdict::inconclusive;
  std::vector<Nat> witnesses;
  std::vector<std::pair<Nat, double>> exponent_samples;
  bool exact = false;
  double growth_floor = 0.0;
};

inline ChaosVerdict chaos_criterion(const WeightRule& rule, const SpaceTag& space, Nat horizon,
                                    double growth_floor = 20.0) {
  if (horizon < 10) throw std::invalid_argument("chaos_criterion: horizon must be >= 10");
  ChaosVerdict out;
  out.exact = rule.exponent_exact();
  out.growth_floor = growth_floor;

  const Nat half = horizon / 2;
  std::vector<Nat> resets;
  std::vector<Nat> transitions;
  Nat resets_top = 0;
  double prev = 0.0;  // exponent at n-1 (E(0) = 0)
  double top_min = 0.0;
  double at_half = 0.0;
  double lp_total = 0.0, lp_top = 0.0;
  for (Nat n = 1; n <= horizon; ++n) {
    const double e = rule.product_log2(n);
    if (e <= 0.0) {
      resets.push_back(n);
      if (n >= half) ++resets_top;
      if (prev > 0.0) transitions.push_back(n);
    }
    if (n == half) at_half = e;
    if (n == half || (n > half && e < top_min)) top_min = e;
    if (space.kind == SpaceKind::lp) {
      const double t = std::exp2(std::min(-space.p * e, 900.0));  // clamp keeps the sum finite
      lp_total += t;
      if (n >= half) lp_top += t;
    }
    prev = e;
  }

  for (Nat n : detail::density_grid(horizon)) out.exponent_samples.emplace_back(n, rule.product_log2(n));

  if (resets_top >= 2) {
    out.verdict = Verdict::fail;
    out.witnesses = transitions.empty() ? resets : transitions;
    return out;
  }
  if (space.kind == SpaceKind::c0) {
    if (top_min >= growth_floor && top_min >= at_half) {
      out.verdict = Verdict::pass;
      return out;
    }
  } else {
    if (lp_total > 0.0 && lp_top <= std::exp2(-growth_floor) * lp_total) {
      out.verdict = Verdict::pass;
      return out;
    }
  }
  out.verdict = Verdict::inconclusive;
  return out;
}

// ---------------------------------------------------------------------------
// Periodic vectors
// ---------------------------------------------------------------------------

/// Truncated k-periodic vector for B_w: coordinates obey
/// x_{n+k} = x_n / (w_{n+1} ... w_{n+k}), so B_w^k x = x on the filled window.
///
/// Accepted when the per-period magnitude peaks over the final decade of
/// periods all fall below tol, never increase, and strictly decrease overall
/// (a c0-membership proxy); a rejection carries the offending magnitude.
struct ExtensionResult {
  bool accepted = false;
  SeqVector x;
  Nat period = 0;
  double offending_magnitude = 0.0;
  std::string reason;
};

inline ExtensionResult periodic_extension(const std::vector<Dyadic>& prefix, const WeightRule& rule,
                                          const SpaceTag& space, Nat horizon, const Dyadic& tol) {
  (void)space;  // the acceptance proxy is sup-based for every supported space
  if (prefix.empty()) throw std::invalid_argument("periodic_extension: empty prefix");
  bool all_zero = true;
  for (const Dyadic& c : prefix) all_zero = all_zero && c.is_zero();
  if (all_zero) throw std::invalid_argument("periodic_extension: degenerate all-zero prefix");
  const Nat k = prefix.size();
  if (horizon < k) throw std::invalid_argument("periodic_extension: horizon shorter than period");

  ExtensionResult res;
  res.period = k;
  std::vector<Dyadic> coords(horizon + 1);
  for (Nat n = 1; n <= std::min(k, horizon); ++n) coords[n] = prefix[n - 1];
  for (Nat n = k + 1; n <= horizon; ++n) coords[n] = coords[n - k] / rule.weight_product(n - k, n);
  for (Nat n = 1; n <= horizon; ++n) res.x.set(n, coords[n]);

  const Nat blocks = horizon / k;
  std::vector<Dyadic> peak(blocks + 1);
  for (Nat i = 1; i <= blocks; ++i) {
    Dyadic m;
    for (Nat n = (i - 1) * k + 1; n <= i * k; ++n) {
      const Dyadic a = coords[n].abs();
      if (compare(a, m) > 0) m = a;
    }
    peak[i] = m;
  }
  const Nat first_decade = blocks / 10 + 1;  // i with 10*i > blocks
  for (Nat i = first_decade; i <= blocks; ++i) {
    if (compare(peak[i], tol) >= 0) {
      res.reason = "tail magnitude does not fall below tol";
      res.offending_magnitude = peak[i].to_double();
      return res;
    }
    if (i > first_decade && compare(peak[i], peak[i - 1]) > 0) {
      res.reason = "tail magnitudes increase over the final decade";
      res.offending_magnitude = peak[i].to_double();
      return res;
    }
  }
  if (blocks < 2 || compare(peak[blocks], peak[first_decade]) >= 0) {
    res.reason = "tail magnitudes do not decrease over the final decade";
    res.offending_magnitude = peak[blocks].to_double();
    return res;
  }
  res.accepted = true;
  return res;
}

/// Searches periods k upward from the target's support and accepts the first
/// k-periodic extension landing strictly within eps of the target.
struct ProbeResult {
  bool success = false;
  Nat period = 0;
  double distance = 0.0;
  SeqVector x;
  std::string reason;
};

inline ProbeResult dense_periodic_probe(const WeightRule& rule, const SeqVector& target, const Dyadic& eps,
                                        const SpaceTag& space, Nat horizon, Nat period_cap = 64) {
  if (!(eps.sign() > 0)) throw std::invalid_argument("dense_periodic_probe: eps must be positive");
  ProbeResult best;
  best.reason = "no period attempted";
  for (Nat k = std::max<Nat>(1, target.max_index()); k <= period_cap && k <= horizon; ++k) {
    std::vector<Dyadic> prefix;
    prefix.reserve(k);
    for (Nat i = 1; i <= k; ++i) prefix.push_back(target.at(i));
    const ExtensionResult ext = periodic_extension(prefix, rule, space, horizon, eps);
    if (!ext.accepted) {
      best.reason = "period " + std::to_string(k) + ": " + ext.reason;
      continue;
    }
    const SeqVector diff = ext.x - target;
    const bool inside = space.kind == SpaceKind::c0 ? compare(sup_norm_exact(diff), eps) < 0
                                                    : norm(diff, space) < eps.to_double();
    const double dist = norm(diff, space);
    if (inside) {
      best.success = true;
      best.period = k;
      best.distance = dist;
      best.x = ext.x;
      best.reason.clear();
      return best;
    }
    best.reason = "period " + std::to_string(k) + ": distance " + std::to_string(dist) + " not below eps";
  }
  return best;
}

// ---------------------------------------------------------------------------
// Hypercyclic vector construction
// ---------------------------------------------------------------------------

class ConstructionError : public std::runtime_error {
 public:
  ConstructionError(std::string msg, Nat blocking_index)
      : std::runtime_error(std::move(msg)), blocking_index_(blocking_index) {}
  Nat blocking_index() const { return blocking_index_; }

 private:
  Nat blocking_index_;
};

struct HypercyclicBuild {
  SeqVector x;
  std::vector<Nat> schedule;
};

namespace detail {

/// log2 of ||F^m y|| where F is the forward right inverse F e_n = e_{n+1}/w_{n+1}
/// (sup over the block's coordinates; an upper bound for lp as well).
inline double forward_block_log2(const WeightRule& rule, const SeqVector& y, Nat m) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [j, v] : y.coords()) {
    const double l = std::log2(std::fabs(v.to_double())) - (rule.product_log2(j + m) - rule.product_log2(j));
    best = std::max(best, l);
  }
  return best;
}

inline SeqVector forward_block(const WeightRule& rule, const SeqVector& y, Nat m) {
  SeqVector out;
  for (const auto& [j, v] : y.coords()) out.set(j + m, v / rule.weight_product(j, j + m));
  return out;
}

inline void validate_build_inputs(const std::vector<SeqVector>& targets, const std::vector<Dyadic>& tols) {
  if (targets.empty()) throw std::invalid_argument("hypercyclic build: no targets");
  if (tols.size() != targets.size()) throw std::invalid_argument("hypercyclic build: one tol per target required");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i].is_zero()) throw std::invalid_argument("hypercyclic build: zero target");
    if (!(tols[i].sign() > 0)) throw std::invalid_argument("hypercyclic build: tols must be positive");
    if (i > 0 && compare(tols[i], tols[i - 1]) > 0)
      throw std::invalid_argument("hypercyclic build: tols must be nonincreasing");
  }
}

}  // namespace detail

/// x = sum_i F^{n_i}(y_i) with greedy earliest positions n_i such that blocks
/// are disjoint, ||F^{n_i} y_i|| <= tol_i, and ||F^{n_i - n_m} y_i|| <= tol_i
/// for every earlier position n_m; then ||B_w^{n_i} x - y_i|| <= sum_{j>i} tol_j.
inline HypercyclicBuild construct_hypercyclic_vector(const WeightRule& rule,
                                                     const std::vector<SeqVector>& targets,
                                                     const std::vector<Dyadic>& tols, const SpaceTag& space,
                                                     Nat max_position = 1000000) {
  (void)space;
  detail::validate_build_inputs(targets, tols);
  HypercyclicBuild build;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double tol_log2 = std::log2(tols[i].to_double());
    Nat n = build.schedule.empty() ? 1 : build.schedule.back() + targets[i - 1].max_index();
    for (;; ++n) {
      if (n > max_position)
        throw ConstructionError("hypercyclic build: tolerance unreachable at target " + std::to_string(i), i);
      bool ok = detail::forward_block_log2(rule, targets[i], n) <= tol_log2;
      for (std::size_t m = 0; ok && m < build.schedule.size(); ++m)
        ok = detail::forward_block_log2(rule, targets[i], n - build.schedule[m]) <= tol_log2;
      if (ok) break;
    }
    build.schedule.push_back(n);
    build.x = build.x + detail::forward_block(rule, targets[i], n);
  }
  return build;
}

/// Same construction at caller-prescribed positions; every greedy-mode bound
/// is validated and a violation raises ConstructionError.
inline HypercyclicBuild construct_hypercyclic_vector_at(const WeightRule& rule,
                                                        const std::vector<SeqVector>& targets,
                                                        const std::vector<Dyadic>& tols, const SpaceTag& space,
                                                        const std::vector<Nat>& schedule) {
  (void)space;
  detail::validate_build_inputs(targets, tols);
  if (schedule.size() != targets.size())
    throw std::invalid_argument("hypercyclic build: one position per target required");
  HypercyclicBuild build;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const Nat n = schedule[i];
    const Nat lower = i == 0 ? 1 : schedule[i - 1] + targets[i - 1].max_index();
    if (n < lower) throw ConstructionError("hypercyclic build: positions overlap at target " + std::to_string(i), i);
    const double tol_log2 = std::log2(tols[i].to_double());
    bool ok = detail::forward_block_log2(rule, targets[i], n) <= tol_log2;
    for (std::size_t m = 0; ok && m < i; ++m)
      ok = detail::forward_block_log2(rule, targets[i], n - schedule[m]) <= tol_log2;
    if (!ok)
      throw ConstructionError("hypercyclic build: tolerance violated at prescribed position " + std::to_string(n), i);
    build.schedule.push_back(n);
    build.x = build.x + detail::forward_block(rule, targets[i], n);
  }
  return build;
}

// ---------------------------------------------------------------------------
// Return sets
// ---------------------------------------------------------------------------

/// N(x, U) = {n in [1, horizon] : B_w^n x in U}, by orbit replay with an
/// early cutoff once the orbit reaches the zero vector.
inline NatSet return_set(const WeightRule& rule, const SeqVector& x, const Ball& u, Nat horizon) {
  std::vector<Nat> hits;
  SeqVector cur = x;
  for (Nat n = 1; n <= horizon; ++n) {
    cur = apply_shift(rule, cur);
    if (cur.is_zero()) {
      if (in_ball(cur, u))
        for (Nat m = n; m <= horizon; ++m) hits.push_back(m);
      break;
    }
    if (in_ball(cur, u)) hits.push_back(n);
  }
  return NatSet(std::move(hits), horizon);
}

/// {n : p*n in N} with horizon floor(horizon/p): the return set of T^p at the
/// same vector and open set.
inline NatSet power_subsample(const NatSet& n_set, Nat p) {
  if (p == 0) throw std::invalid_argument("power_subsample: p must be >= 1");
  std::vector<Nat> e;
  for (Nat v : n_set.elements())
    if (v % p == 0) e.push_back(v / p);
  return NatSet(std::move(e), n_set.horizon() / p);
}

}  // namespace shiftlab
