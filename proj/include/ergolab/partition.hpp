#pragma once

// Finite interval partitions of [0,1) and their pullbacks under
// interval exchanges. Atom i is [b_i, b_{i+1}) with the last atom
// closing at 1; breakpoints start at 0 and stay strictly increasing.

#include <utility>
#include <vector>

#include "ergolab/core.hpp"
#include "ergolab/interval_exchange.hpp"
#include "ergolab/interval_set.hpp"

namespace ergolab {

/// Pullback/refinement bookkeeping: raised when candidate breakpoints
/// collapsed within tolerance and a degenerate atom was merged away.
struct RefineInfo {
  bool degenerate_atoms_merged = false;
  long merged = 0;
};

template <class S>
class BasicIntervalPartition {
 public:
  explicit BasicIntervalPartition(std::vector<S> breakpoints) : breaks_(std::move(breakpoints)) {
    require(!breaks_.empty(), Errc::validation, "partition needs at least one breakpoint");
    require(!(breaks_.front() < S(0)) && !(S(0) < breaks_.front()), Errc::validation,
            "first breakpoint must be 0");
    for (std::size_t i = 1; i < breaks_.size(); ++i)
      require(breaks_[i - 1] < breaks_[i], Errc::validation, "breakpoints must be strictly increasing");
    require(breaks_.back() < S(1), Errc::validation, "breakpoints must lie in [0,1)");
  }

  static BasicIntervalPartition trivial() { return BasicIntervalPartition({S(0)}); }

  /// The 2^depth uniform dyadic partition.
  static BasicIntervalPartition dyadic(int depth) {
    require(depth >= 0 && depth < 30, Errc::validation, "dyadic depth out of range");
    long n = 1L << depth;
    std::vector<S> b(n);
    for (long i = 0; i < n; ++i) b[i] = S(i) / S(n);
    return BasicIntervalPartition(std::move(b));
  }

  /// Builds from an unsorted candidate list, deduplicating at the merge
  /// tolerance; reports merges through `info`.
  static BasicIntervalPartition from_candidates(std::vector<S> pts, RefineInfo* info = nullptr) {
    std::sort(pts.begin(), pts.end());
    const S eps = ScalarTraits<S>::merge_eps();
    std::vector<S> b;
    b.push_back(S(0));
    long merged = 0;
    for (const S& p : pts) {
      if (!(b.back() + eps < p) || !(p + eps < S(1))) {
        if ((b.back() < p || p < b.back()) && !(p < S(0))) ++merged;
        continue;
      }
      b.push_back(p);
    }
    if (info && merged > 0) {
      info->degenerate_atoms_merged = true;
      info->merged += merged;
    }
    return BasicIntervalPartition(std::move(b));
  }

  const std::vector<S>& breakpoints() const { return breaks_; }
  int cell_count() const { return static_cast<int>(breaks_.size()); }

  int cell_of(const S& x) const {
    auto it = std::upper_bound(breaks_.begin() + 1, breaks_.end(), x);
    return static_cast<int>(it - breaks_.begin()) - 1;
  }

  S cell_lo(int i) const { return breaks_[i]; }
  S cell_hi(int i) const { return i + 1 < cell_count() ? breaks_[i + 1] : S(1); }
  S cell_measure(int i) const { return cell_hi(i) - cell_lo(i); }

  std::vector<S> cell_measures() const {
    std::vector<S> m(cell_count());
    for (int i = 0; i < cell_count(); ++i) m[i] = cell_measure(i);
    return m;
  }

  std::vector<Real> cell_measures_real() const {
    std::vector<Real> m(cell_count());
    for (int i = 0; i < cell_count(); ++i) m[i] = ScalarTraits<S>::to_real(cell_measure(i));
    return m;
  }

  BasicIntervalSet<S> cell_set(int i) const {
    return BasicIntervalSet<S>::interval(cell_lo(i), cell_hi(i));
  }

  bool operator==(const BasicIntervalPartition& o) const { return breaks_ == o.breaks_; }

 private:
  std::vector<S> breaks_;
};

/// Common refinement p ∨ q (union of breakpoints).
template <class S>
BasicIntervalPartition<S> refine(const BasicIntervalPartition<S>& p, const BasicIntervalPartition<S>& q,
                                 RefineInfo* info = nullptr) {
  std::vector<S> pts;
  pts.reserve(p.cell_count() + q.cell_count());
  pts.insert(pts.end(), p.breakpoints().begin() + 1, p.breakpoints().end());
  pts.insert(pts.end(), q.breakpoints().begin() + 1, q.breakpoints().end());
  return BasicIntervalPartition<S>::from_candidates(std::move(pts), info);
}

/// Pullback T^{-1}ξ: breakpoints are the preimages of ξ's breakpoints
/// together with T's own discontinuities.
template <class S>
BasicIntervalPartition<S> pullback(const BasicIntervalExchange<S>& t, const BasicIntervalPartition<S>& xi,
                                   RefineInfo* info = nullptr) {
  BasicIntervalExchange<S> inv = t.inverse();
  std::vector<S> pts;
  pts.reserve(xi.cell_count() + t.piece_count());
  for (int i = 1; i < xi.cell_count(); ++i) pts.push_back(inv.apply(xi.breakpoints()[i]));
  pts.push_back(inv.apply(S(0)));
  const auto& dom = t.domain_breakpoints();
  for (int i = 1; i < t.piece_count(); ++i) pts.push_back(dom[i]);
  return BasicIntervalPartition<S>::from_candidates(std::move(pts), info);
}

using IntervalPartition = BasicIntervalPartition<Real>;

}  // namespace ergolab
