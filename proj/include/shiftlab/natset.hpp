#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace shiftlab {

using Nat = std::uint64_t;

/// Finite truncation of a subset of the positive integers.  Elements are kept
/// strictly increasing and bounded by a declared horizon; everything computed
/// from a NatSet is a statement about [1, horizon] only.
class NatSet {
 public:
  NatSet() = default;

  NatSet(std::vector<Nat> elements, Nat horizon) : elems_(std::move(elements)), horizon_(horizon) {
    for (std::size_t i = 0; i < elems_.size(); ++i) {
      if (elems_[i] == 0) throw std::invalid_argument("NatSet: elements must be positive");
      if (i > 0 && elems_[i] <= elems_[i - 1])
        throw std::invalid_argument("NatSet: elements must be strictly increasing");
      if (elems_[i] > horizon_) throw std::invalid_argument("NatSet: element exceeds horizon");
    }
  }

  template <class Pred>
  static NatSet of(Nat horizon, Pred&& pred) {
    std::vector<Nat> e;
    for (Nat n = 1; n <= horizon; ++n)
      if (pred(n)) e.push_back(n);
    return NatSet(std::move(e), horizon);
  }

  bool contains(Nat n) const { return std::binary_search(elems_.begin(), elems_.end(), n); }

  /// Number of elements <= n.
  Nat count_leq(Nat n) const {
    return static_cast<Nat>(std::upper_bound(elems_.begin(), elems_.end(), n) - elems_.begin());
  }

  const std::vector<Nat>& elements() const { return elems_; }
  Nat horizon() const { return horizon_; }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }

  friend bool operator==(const NatSet& a, const NatSet& b) {
    return a.horizon_ == b.horizon_ && a.elems_ == b.elems_;
  }

 private:
  std::vector<Nat> elems_;
  Nat horizon_ = 0;
};

/// An arithmetic progression {start + j*difference : 0 <= j < length}
/// certified to lie inside some NatSet.
struct APWitness {
  Nat start = 0;
  Nat difference = 0;
  Nat length = 0;

  Nat last() const { return start + (length - 1) * difference; }

  /// Direct membership re-check of the certificate.
  bool verify(const NatSet& a) const {
    if (length == 0 || difference == 0 || last() > a.horizon()) return false;
    for (Nat j = 0; j < length; ++j)
      if (!a.contains(start + j * difference)) return false;
    return true;
  }
};

enum class DensityKind { lower, upper, banach_upper };

struct DensitySample {
  Nat n = 0;
  double ratio = 0.0;
};

struct DensityProfile {
  DensityKind kind = DensityKind::lower;
  std::vector<DensitySample> samples;
  double estimate = 0.0;
};

/// Maximum-length AP of difference exactly k contained in A; smallest start
/// among equals.  Empty result iff A is empty.
///
/// Dynamic programming over the element list: len(a) = 1 + len(a+k) when
/// a+k is in A, scanning elements in descending order.
inline std::optional<APWitness> longest_ap_fixed_difference(const NatSet& a, Nat k) {
  if (k == 0) throw std::invalid_argument("longest_ap_fixed_difference: k must be >= 1");
  const auto& e = a.elements();
  if (e.empty()) return std::nullopt;
  std::vector<Nat> len(e.size(), 1);
  // e is sorted, so the successor index can be found by binary search.
  for (std::size_t i = e.size(); i-- > 0;) {
    const Nat succ = e[i] + k;
    const auto it = std::lower_bound(e.begin() + static_cast<std::ptrdiff_t>(i) + 1, e.end(), succ);
    if (it != e.end() && *it == succ) len[i] = 1 + len[static_cast<std::size_t>(it - e.begin())];
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < e.size(); ++i)
    if (len[i] > len[best]) best = i;  // ties keep the smallest start
  return APWitness{e[best], k, len[best]};
}

using APProfile = std::map<Nat, std::optional<APWitness>>;

/// Entry k = longest_ap_fixed_difference(A, k) for 1 <= k <= kmax.
inline APProfile ap_profile(const NatSet& a, Nat kmax) {
  if (kmax == 0) throw std::invalid_argument("ap_profile: kmax must be >= 1");
  APProfile p;
  for (Nat k = 1; k <= kmax; ++k) p[k] = longest_ap_fixed_difference(a, k);
  return p;
}

/// The profile's maximum witness length over k; 0 for an empty set.
inline Nat ap_score(const APProfile& p) {
  Nat best = 0;
  for (const auto& [k, w] : p)
    if (w && w->length > best) best = w->length;
  return best;
}

namespace detail {

/// Geometric sample grid up to `limit` (every integer when limit is small).
inline std::vector<Nat> density_grid(Nat limit) {
  std::vector<Nat> grid;
  if (limit <= 64) {
    for (Nat n = 1; n <= limit; ++n) grid.push_back(n);
    return grid;
  }
  // 16 samples per decade, starting at 10, always ending exactly at limit.
  double v = 10.0;
  while (v < static_cast<double>(limit)) {
    const Nat n = static_cast<Nat>(v + 0.5);
    if (grid.empty() || n > grid.back()) grid.push_back(n);
    v *= 1.1547819846894583;  // 10^(1/16)
  }
  if (grid.empty() || grid.back() != limit) grid.push_back(limit);
  return grid;
}

}  // namespace detail

/// Density estimates over [1, horizon].
///
/// lower/upper: samples |A n [1,n]| / n on a geometric grid of n up to
/// `window`; the estimate is the min (lower) or max (upper) of the sampled
/// ratios over the final decade (n > window/10).
///
/// banach_upper: the estimate is max over window starts s of
/// |A n [s, s+window-1]| / window, s <= horizon-window+1, computed exactly;
/// samples record the windowed ratio on a geometric grid of starts.
inline DensityProfile density_profile(const NatSet& a, DensityKind kind, Nat window) {
  if (window == 0 || window > a.horizon())
    throw std::invalid_argument("density_profile: invalid window (must satisfy 1 <= window <= horizon)");
  DensityProfile p;
  p.kind = kind;
  if (kind == DensityKind::lower || kind == DensityKind::upper) {
    const auto grid = detail::density_grid(window);
    double lo = 1.0, hi = 0.0;
    bool any = false;
    for (Nat n : grid) {
      const double r = static_cast<double>(a.count_leq(n)) / static_cast<double>(n);
      p.samples.push_back({n, r});
      if (n * 10 > window) {  // final decade
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        any = true;
      }
    }
    p.estimate = !any ? 0.0 : (kind == DensityKind::lower ? lo : hi);
    return p;
  }
  // banach_upper: an optimal window can be assumed to start at an element
  // (clipped so the window stays inside the horizon).
  const Nat last_start = a.horizon() - window + 1;
  Nat best_count = 0;
  for (Nat s : a.elements()) {
    const Nat start = std::min(s, last_start);
    const Nat c = a.count_leq(start + window - 1) - a.count_leq(start - 1);
    if (c > best_count) best_count = c;
  }
  p.estimate = static_cast<double>(best_count) / static_cast<double>(window);
  for (Nat s : detail::density_grid(last_start)) {
    const double r =
        static_cast<double>(a.count_leq(s + window - 1) - a.count_leq(s - 1)) / static_cast<double>(window);
    p.samples.push_back({s, r});
  }
  return p;
}

/// (A - n) with elements clipped to [1, horizon - n]; horizon shrinks by n.
inline NatSet shift_left(const NatSet& a, Nat n) {
  const Nat new_horizon = a.horizon() > n ? a.horizon() - n : 0;
  std::vector<Nat> e;
  for (Nat v : a.elements())
    if (v > n) e.push_back(v - n);
  return NatSet(std::move(e), new_horizon);
}

}  // namespace shiftlab
