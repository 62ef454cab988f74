#pragma once

// Finite unions of half-open subintervals of [0,1): the measurable sets
// of the engine. Kept sorted, disjoint and non-empty piecewise; measure
// is the total length.

#include <initializer_list>
#include <utility>
#include <vector>

#include "ergolab/core.hpp"

namespace ergolab {

template <class S>
class BasicIntervalSet {
 public:
  using Interval = std::pair<S, S>;  // [first, second)

  BasicIntervalSet() = default;

  /// Normalizing constructor: sorts, clips to [0,1], merges overlapping or
  /// touching pieces, drops pieces shorter than the merge tolerance.
  static BasicIntervalSet of(std::vector<Interval> pieces) {
    BasicIntervalSet out;
    for (auto& p : pieces) {
      require(!(p.first < S(0)) && !(S(1) < p.second), Errc::validation,
              "interval set: piece outside [0,1)");
      require(!(p.second < p.first), Errc::validation, "interval set: reversed interval");
    }
    std::sort(pieces.begin(), pieces.end());
    const S eps = ScalarTraits<S>::merge_eps();
    for (auto& p : pieces) {
      if (!(eps < p.second - p.first)) continue;  // null piece
      if (!out.iv_.empty() && !(eps < p.first - out.iv_.back().second)) {
        out.iv_.back().second = std::max(out.iv_.back().second, p.second);
      } else {
        out.iv_.push_back(p);
      }
    }
    return out;
  }

  static BasicIntervalSet interval(const S& a, const S& b) { return of({{a, b}}); }
  static BasicIntervalSet empty_set() { return BasicIntervalSet(); }
  static BasicIntervalSet full() { return of({{S(0), S(1)}}); }

  /// The dyadic interval [index/2^depth, (index+1)/2^depth).
  static BasicIntervalSet dyadic(int depth, long index) {
    require(depth >= 1 && depth < 60, Errc::validation, "dyadic depth out of range");
    require(index >= 0 && index < (1L << depth), Errc::validation, "dyadic index out of range");
    S w = S(1) / S(1L << depth);
    return of({{S(index) * w, S(index + 1) * w}});
  }

  const std::vector<Interval>& pieces() const { return iv_; }
  bool empty() const { return iv_.empty(); }
  std::size_t size() const { return iv_.size(); }

  S measure() const {
    S m(0);
    for (const auto& p : iv_) m += p.second - p.first;
    return m;
  }

  bool contains(const S& x) const {
    auto it = std::upper_bound(iv_.begin(), iv_.end(), x,
                               [](const S& v, const Interval& p) { return v < p.first; });
    if (it == iv_.begin()) return false;
    --it;
    return !(x < it->first) && x < it->second;
  }

  /// Translate every piece by delta; caller guarantees the result stays
  /// inside [0,1) (true for per-cell IET translations).
  BasicIntervalSet translated(const S& delta) const {
    std::vector<Interval> out;
    out.reserve(iv_.size());
    for (const auto& p : iv_) out.push_back({p.first + delta, p.second + delta});
    return of(std::move(out));
  }

  friend BasicIntervalSet intersect(const BasicIntervalSet& a, const BasicIntervalSet& b) {
    std::vector<Interval> out;
    std::size_t i = 0, j = 0;
    while (i < a.iv_.size() && j < b.iv_.size()) {
      const Interval& p = a.iv_[i];
      const Interval& q = b.iv_[j];
      S lo = std::max(p.first, q.first);
      S hi = std::min(p.second, q.second);
      if (lo < hi) out.push_back({lo, hi});
      if (p.second < q.second) ++i; else ++j;
    }
    return of(std::move(out));
  }

  friend BasicIntervalSet unite(const BasicIntervalSet& a, const BasicIntervalSet& b) {
    std::vector<Interval> out = a.iv_;
    out.insert(out.end(), b.iv_.begin(), b.iv_.end());
    return of(std::move(out));
  }

  friend BasicIntervalSet complement(const BasicIntervalSet& a) {
    std::vector<Interval> out;
    S cursor(0);
    for (const auto& p : a.iv_) {
      if (cursor < p.first) out.push_back({cursor, p.first});
      cursor = p.second;
    }
    if (cursor < S(1)) out.push_back({cursor, S(1)});
    return of(std::move(out));
  }

  bool operator==(const BasicIntervalSet& o) const { return iv_ == o.iv_; }

 private:
  std::vector<Interval> iv_;
};

using IntervalSet = BasicIntervalSet<Real>;

}  // namespace ergolab
