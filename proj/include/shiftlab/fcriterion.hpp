#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "shiftlab/natset.hpp"
#include "shiftlab/seqspace.hpp"
#include "shiftlab/shiftop.hpp"

namespace shiftlab {

/// One block {10^j0 + difference * l : 0 <= l < length} of an A_k family.
struct APBlock {
  Nat j0 = 0;
  Nat difference = 0;
  Nat length = 0;

  Nat start() const {
    Nat s = 1;
    for (Nat i = 0; i < j0; ++i) s *= 10;
    return s;
  }
  Nat last() const { return start() + difference * (length - 1); }
};

/// The family A_k: a union of AP blocks with common difference 10^(2k).
struct APFamilySpec {
  Nat k = 0;
  std::vector<APBlock> blocks;

  NatSet to_natset(Nat horizon) const {
    std::vector<Nat> e;
    for (const APBlock& b : blocks)
      for (Nat l = 0; l < b.length; ++l) {
        const Nat v = b.start() + b.difference * l;
        if (v <= horizon) e.push_back(v);
      }
    std::sort(e.begin(), e.end());
    return NatSet(std::move(e), horizon);
  }
};

class CapacityError : public std::runtime_error {
 public:
  CapacityError(std::string msg, Nat family_k, Nat block_ordinal)
      : std::runtime_error(std::move(msg)), family_k_(family_k), block_ordinal_(block_ordinal) {}
  Nat family_k() const { return family_k_; }
  Nat block_ordinal() const { return block_ordinal_; }

 private:
  Nat family_k_;
  Nat block_ordinal_;
};

namespace detail {

inline Nat pow10_saturating(Nat e, Nat cap) {
  Nat v = 1;
  for (Nat i = 0; i < e; ++i) {
    if (v > cap / 10) return cap + 1;
    v *= 10;
  }
  return v;
}

}  // namespace detail

/// Deterministic inductive construction of the block families.
///
/// `blocks` new blocks are handed out round-robin to k = 1..kmax.  The r-th
/// block of family k has difference 10^(2k) and requested length r+1 (lengths
/// grow with each new block of the same family); its start 10^j0 takes the
/// minimal exponent with j0 >= 2k that clears every previously placed element
/// by more than the largest separation gap (kmax).  Elements beyond the
/// horizon are clipped; a block whose start itself exceeds the horizon cannot
/// be placed and raises CapacityError.
inline std::vector<APFamilySpec> build_family(Nat kmax, Nat blocks, Nat horizon) {
  if (kmax == 0) throw std::invalid_argument("build_family: kmax must be >= 1");
  std::vector<APFamilySpec> fam(kmax);
  for (Nat k = 1; k <= kmax; ++k) fam[k - 1].k = k;

  Nat max_placed = 0;
  for (Nat b = 0; b < blocks; ++b) {
    const Nat k = b % kmax + 1;
    const Nat ordinal = b / kmax + 1;  // r-th block of this family
    const Nat requested = ordinal + 1;
    const Nat difference = detail::pow10_saturating(2 * k, horizon);
    Nat j0 = 2 * k;
    Nat start = detail::pow10_saturating(j0, horizon);
    while (start <= horizon && start <= max_placed + kmax) {
      ++j0;
      start = detail::pow10_saturating(j0, horizon);
    }
    if (start > horizon || difference > horizon)
      throw CapacityError("build_family: horizon " + std::to_string(horizon) + " too small for block " +
                              std::to_string(ordinal) + " of A_" + std::to_string(k),
                          k, ordinal);
    const Nat fits = (horizon - start) / difference + 1;
    const Nat length = std::min(requested, fits);
    fam[k - 1].blocks.push_back(APBlock{j0, difference, length});
    max_placed = start + difference * (length - 1);
  }
  return fam;
}

struct SeparationReport {
  bool ok = true;
  Nat witness_a = 0;
  Nat witness_b = 0;
};

/// Condition i): |j - j'| >= max(k, k') for every pair of distinct elements
/// j in A_k, j' in A_k'.  A violating pair always includes an adjacent pair
/// in the merged element list, so an ascending scan suffices.
inline SeparationReport check_separation(const std::vector<APFamilySpec>& family) {
  std::vector<std::pair<Nat, Nat>> items;  // (value, owner family index)
  for (const APFamilySpec& f : family)
    for (const APBlock& b : f.blocks)
      for (Nat l = 0; l < b.length; ++l) items.emplace_back(b.start() + b.difference * l, f.k);
  std::sort(items.begin(), items.end());
  // Equal values are the same j (the condition only constrains j != j'); keep
  // the largest owner k per value.
  std::vector<std::pair<Nat, Nat>> merged;
  for (const auto& it : items) {
    if (!merged.empty() && merged.back().first == it.first)
      merged.back().second = std::max(merged.back().second, it.second);
    else
      merged.push_back(it);
  }
  for (std::size_t i = 1; i < merged.size(); ++i) {
    const Nat gap = merged[i].first - merged[i - 1].first;
    if (gap < std::max(merged[i].second, merged[i - 1].second))
      return {false, merged[i - 1].first, merged[i].first};
  }
  return {};
}

/// Condition ii) norm: || sum_{n in (A+k') n [1,horizon]} e_n / (w_1...w_n) ||.
/// Exact in c0 for power-of-two rules (the value is 2^-min exponent).
inline double series_norm(const WeightRule& rule, const NatSet& a, Nat kprime, const SpaceTag& space,
                          Nat horizon) {
  double sup_log2 = -std::numeric_limits<double>::infinity();
  double lp_sum = 0.0;
  bool any = false;
  for (Nat v : a.elements()) {
    const Nat n = v + kprime;
    if (n > horizon) continue;
    any = true;
    const double e = rule.product_log2(n);
    if (space.kind == SpaceKind::c0)
      sup_log2 = std::max(sup_log2, -e);
    else
      lp_sum += std::exp2(std::min(-space.p * e, 900.0));
  }
  if (!any) return 0.0;
  return space.kind == SpaceKind::c0 ? std::exp2(sup_log2) : std::pow(lp_sum, 1.0 / space.p);
}

/// Condition iii) constants:
///   C_{k,l} = sup_{j in A_l} || sum_{n in (A_k - j) n [1,horizon]}
///                               e_{n+k'} / (w_{1+k'}...w_{n+k'}) ||.
inline double compute_Ckl(const WeightRule& rule, const std::vector<APFamilySpec>& family, Nat k, Nat l,
                          Nat kprime, const SpaceTag& space, Nat horizon) {
  if (k == 0 || k > family.size() || l == 0 || l > family.size())
    throw std::invalid_argument("compute_Ckl: family index out of range");
  const NatSet ak = family[k - 1].to_natset(horizon);
  const NatSet al = family[l - 1].to_natset(horizon);
  const double base = rule.product_log2(kprime);
  double sup = 0.0;
  for (Nat j : al.elements()) {
    double sup_log2 = -std::numeric_limits<double>::infinity();
    double lp_sum = 0.0;
    bool any = false;
    for (Nat v : ak.elements()) {
      if (v <= j) continue;
      const Nat n = v - j;
      if (n > horizon) continue;
      any = true;
      const double e = rule.product_log2(n + kprime) - base;
      if (space.kind == SpaceKind::c0)
        sup_log2 = std::max(sup_log2, -e);
      else
        lp_sum += std::exp2(std::min(-space.p * e, 900.0));
    }
    if (!any) continue;
    sup = std::max(sup, space.kind == SpaceKind::c0 ? std::exp2(sup_log2) : std::pow(lp_sum, 1.0 / space.p));
  }
  return sup;
}

/// Aggregated criterion tables.  The decay fields are weak-monotonicity
/// checks (nonincreasing over the computed range), reported as observations
/// about this horizon, never as limits.
struct CriterionReport {
  SeparationReport separation;
  std::map<std::pair<Nat, Nat>, double> series_norms;      // (k, k') -> norm, k > k'
  std::map<std::tuple<Nat, Nat, Nat>, double> ckl;         // (k, l, k') -> C
  std::map<Nat, double> sup_over_l;                        // k -> max over (l, k')
  bool series_decay_in_k = true;
  bool sup_decay_in_k = true;
  bool ckl_decay_in_l = true;

  double max_series_norm() const {
    double m = 0.0;
    for (const auto& [key, v] : series_norms) m = std::max(m, v);
    return m;
  }
};

inline CriterionReport full_report(const WeightRule& rule, const std::vector<APFamilySpec>& family,
                                   const std::vector<Nat>& kprimes, const SpaceTag& space, Nat horizon) {
  CriterionReport rep;
  rep.separation = check_separation(family);
  const Nat kmax = family.size();
  std::vector<bool> empty_k(kmax + 1, true);
  for (Nat k = 1; k <= kmax; ++k) empty_k[k] = family[k - 1].to_natset(horizon).empty();
  for (Nat kp : kprimes) {
    double prev = std::numeric_limits<double>::infinity();
    for (Nat k = 1; k <= kmax; ++k) {
      if (k <= kp || empty_k[k]) continue;
      const double v = series_norm(rule, family[k - 1].to_natset(horizon), kp, space, horizon);
      rep.series_norms[{k, kp}] = v;
      if (v > prev) rep.series_decay_in_k = false;
      prev = v;
    }
  }
  for (Nat kp : kprimes) {
    for (Nat k = 1; k <= kmax; ++k) {
      if (k <= kp || empty_k[k]) continue;
      double prev = std::numeric_limits<double>::infinity();
      for (Nat l = 1; l <= kmax; ++l) {
        if (empty_k[l]) continue;
        const double v = compute_Ckl(rule, family, k, l, kp, space, horizon);
        rep.ckl[{k, l, kp}] = v;
        if (v > prev) rep.ckl_decay_in_l = false;
        prev = v;
        auto [it, inserted] = rep.sup_over_l.try_emplace(k, v);
        if (!inserted) it->second = std::max(it->second, v);
      }
    }
  }
  double prev_sup = std::numeric_limits<double>::infinity();
  for (const auto& [k, v] : rep.sup_over_l) {
    if (v > prev_sup) rep.sup_decay_in_k = false;
    prev_sup = v;
  }
  return rep;
}

}  // namespace shiftlab
