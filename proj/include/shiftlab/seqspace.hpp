#pragma once

#include <cmath>
#include <map>
#include <stdexcept>

#include "shiftlab/dyadic.hpp"
#include "shiftlab/natset.hpp"

namespace shiftlab {

/// Finite-support vector with 1-based coordinates.  No zero entries are
/// stored; each entry carries its own exactness via Dyadic.
class SeqVector {
 public:
  SeqVector() = default;

  static SeqVector unit(Nat i) {
    SeqVector v;
    v.set(i, Dyadic(1));
    return v;
  }

  void set(Nat i, const Dyadic& value) {
    if (i == 0) throw std::invalid_argument("SeqVector: coordinates are 1-based");
    if (value.is_zero())
      coords_.erase(i);
    else
      coords_[i] = value;
  }

  Dyadic at(Nat i) const {
    const auto it = coords_.find(i);
    return it == coords_.end() ? Dyadic{} : it->second;
  }

  Nat max_index() const { return coords_.empty() ? 0 : coords_.rbegin()->first; }
  Nat min_index() const { return coords_.empty() ? 0 : coords_.begin()->first; }
  bool is_zero() const { return coords_.empty(); }
  std::size_t support_size() const { return coords_.size(); }
  const std::map<Nat, Dyadic>& coords() const { return coords_; }

  bool exact() const {
    for (const auto& [i, v] : coords_)
      if (!v.exact()) return false;
    return true;
  }

  friend SeqVector operator+(const SeqVector& a, const SeqVector& b) {
    SeqVector r = a;
    for (const auto& [i, v] : b.coords_) r.set(i, r.at(i) + v);
    return r;
  }

  friend SeqVector operator-(const SeqVector& a, const SeqVector& b) {
    SeqVector r = a;
    for (const auto& [i, v] : b.coords_) r.set(i, r.at(i) - v);
    return r;
  }

  friend SeqVector operator*(const Dyadic& s, const SeqVector& a) {
    SeqVector r;
    for (const auto& [i, v] : a.coords_) r.set(i, s * v);
    return r;
  }

  friend bool operator==(const SeqVector& a, const SeqVector& b) {
    if (a.coords_.size() != b.coords_.size()) return false;
    auto it = b.coords_.begin();
    for (const auto& [i, v] : a.coords_) {
      if (it->first != i || compare(it->second, v) != 0) return false;
      ++it;
    }
    return true;
  }

 private:
  std::map<Nat, Dyadic> coords_;
};

enum class SpaceKind { c0, lp };

struct SpaceTag {
  SpaceKind kind = SpaceKind::c0;
  double p = 0.0;

  static SpaceTag c0() { return {SpaceKind::c0, 0.0}; }

  static SpaceTag lp(double p) {
    if (!(p > 1.0)) throw std::invalid_argument("SpaceTag: lp requires p > 1");
    return {SpaceKind::lp, p};
  }
};

/// sup-norm as an exact scalar (exact whenever every entry is).
inline Dyadic sup_norm_exact(const SeqVector& x) {
  Dyadic m;
  for (const auto& [i, v] : x.coords()) {
    const Dyadic a = v.abs();
    if (compare(a, m) > 0) m = a;
  }
  return m;
}

inline double norm(const SeqVector& x, const SpaceTag& space) {
  if (space.kind == SpaceKind::c0) return sup_norm_exact(x).to_double();
  double s = 0.0;
  for (const auto& [i, v] : x.coords()) s += std::pow(std::fabs(v.to_double()), space.p);
  return std::pow(s, 1.0 / space.p);
}

/// Open ball standing in for a general open set; radius kept as a scalar so
/// c0 membership stays an exact comparison.
struct Ball {
  SeqVector center;
  Dyadic radius;
  SpaceTag space;

  Ball(SeqVector c, Dyadic r, SpaceTag s) : center(std::move(c)), radius(r), space(s) {
    if (!(r.sign() > 0)) throw std::invalid_argument("Ball: radius must be positive");
  }
};

/// Strict membership: norm(x - center) < radius.
inline bool in_ball(const SeqVector& x, const Ball& b) {
  if (b.space.kind == SpaceKind::c0) {
    // Exact coordinate-wise comparison; no intermediate norm rounding.
    const SeqVector d = x - b.center;
    for (const auto& [i, v] : d.coords())
      if (compare(v.abs(), b.radius) >= 0) return false;
    return true;
  }
  return norm(x - b.center, b.space) < b.radius.to_double();
}

}  // namespace shiftlab
