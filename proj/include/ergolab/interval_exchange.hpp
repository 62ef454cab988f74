#pragma once

// Interval exchange transformations: piecewise translations of [0,1)
// given by subinterval lengths and a permutation of their order. All
// maps here preserve Lebesgue measure; composition and powers stay in
// the class, with breakpoint bookkeeping at the global merge tolerance.
//
// Conventions: points live in [0,1) with half-open cells [a,b). The
// permutation is 0-based in C++ (the JSON wire format is 1-based and is
// converted at the descriptor boundary). perm[i] = p means the i-th
// domain subinterval (left to right) lands in slot p of the image.

#include <numeric>
#include <type_traits>
#include <utility>
#include <vector>

#include "ergolab/core.hpp"
#include "ergolab/interval_set.hpp"

namespace ergolab {

/// Composition bookkeeping. `breakpoint_merge` is raised whenever two
/// candidate breakpoints collided within the merge tolerance and a cell
/// was dropped; collisions signal rational resonances that corrupt cell
/// counts, so callers surface the flag.
struct ComposeInfo {
  bool breakpoint_merge = false;
  long merged_cells = 0;

  void absorb(const ComposeInfo& o) {
    breakpoint_merge = breakpoint_merge || o.breakpoint_merge;
    merged_cells += o.merged_cells;
  }
};

template <class S>
class BasicIntervalExchange {
 public:
  BasicIntervalExchange(std::vector<S> lengths, std::vector<int> perm)
      : lengths_(std::move(lengths)), perm_(std::move(perm)) {
    validate_and_finish();
  }

  static BasicIntervalExchange identity() { return BasicIntervalExchange({S(1)}, {0}); }

  /// Rotation by alpha as the two-interval exchange; alpha = 0 degenerates
  /// to the identity.
  static BasicIntervalExchange rotation(const S& alpha) {
    require(!(alpha < S(0)) && alpha < S(1), Errc::validation, "rotation: alpha must be in [0,1)");
    if (!(ScalarTraits<S>::merge_eps() < alpha)) return identity();
    return BasicIntervalExchange({S(1) - alpha, alpha}, {1, 0});
  }

  int piece_count() const { return static_cast<int>(lengths_.size()); }
  const std::vector<S>& lengths() const { return lengths_; }
  const std::vector<int>& permutation() const { return perm_; }
  const std::vector<S>& domain_breakpoints() const { return dom_; }  // size d+1, 0..1
  const std::vector<S>& offsets() const { return off_; }

  int piece_of(const S& x) const {
    require(!(x < S(0)) && x < S(1), Errc::domain, "point outside [0,1)");
    auto it = std::upper_bound(dom_.begin() + 1, dom_.end(), x);
    return static_cast<int>(it - dom_.begin()) - 1;
  }

  S apply(const S& x) const {
    int i = piece_of(x);
    S r = x + off_[i];
    if constexpr (!ScalarTraits<S>::exact) {
      if (r < S(0)) r = S(0);
      if (!(r < S(1))) r = one_minus_ulp();
    }
    return r;
  }

  BasicIntervalExchange inverse() const {
    int d = piece_count();
    std::vector<int> by_slot(d);  // by_slot[p] = domain piece landing in slot p
    for (int i = 0; i < d; ++i) by_slot[perm_[i]] = i;
    std::vector<S> lens(d);
    std::vector<int> perm(d);
    for (int p = 0; p < d; ++p) {
      lens[p] = lengths_[by_slot[p]];
      perm[p] = by_slot[p];
    }
    return BasicIntervalExchange(std::move(lens), std::move(perm));
  }

  /// Forward image of a set: per-cell translation, exact.
  BasicIntervalSet<S> image(const BasicIntervalSet<S>& a) const {
    std::vector<typename BasicIntervalSet<S>::Interval> out;
    for (const auto& p : a.pieces()) {
      // walk the domain cells overlapping [p.first, p.second)
      int i = piece_of(p.first);
      S lo = p.first;
      while (lo < p.second) {
        S cell_hi = dom_[i + 1];
        S hi = std::min(p.second, cell_hi);
        if (lo < hi) out.push_back({lo + off_[i], hi + off_[i]});
        lo = cell_hi;
        ++i;
        if (i >= piece_count()) break;
      }
    }
    return BasicIntervalSet<S>::of(std::move(out));
  }

  /// Preimage T^{-1}(A); measure-preserving, so |preimage(A)| = |A|.
  BasicIntervalSet<S> preimage(const BasicIntervalSet<S>& a) const {
    std::vector<typename BasicIntervalSet<S>::Interval> out;
    for (int i = 0; i < piece_count(); ++i) {
      S img_lo = dom_[i] + off_[i];
      S img_hi = dom_[i + 1] + off_[i];
      for (const auto& p : a.pieces()) {
        S lo = std::max(p.first, img_lo);
        S hi = std::min(p.second, img_hi);
        if (lo < hi) out.push_back({lo - off_[i], hi - off_[i]});
      }
    }
    return BasicIntervalSet<S>::of(std::move(out));
  }

  /// f.compose_after(g) = f∘g (apply g first). Cell count <= d_f + d_g - 1
  /// after canonical merging of adjacent equal-offset cells.
  static BasicIntervalExchange compose(const BasicIntervalExchange& f, const BasicIntervalExchange& g,
                                       ComposeInfo* info = nullptr) {
    BasicIntervalExchange ginv = g.inverse();
    std::vector<S> cuts;
    cuts.reserve(f.piece_count() + g.piece_count());
    for (int i = 1; i < g.piece_count(); ++i) cuts.push_back(g.dom_[i]);
    for (int i = 1; i < f.piece_count(); ++i) cuts.push_back(ginv.apply(f.dom_[i]));
    std::sort(cuts.begin(), cuts.end());

    const S eps = ScalarTraits<S>::merge_eps();
    std::vector<S> breaks;
    breaks.push_back(S(0));
    long merged = 0;
    for (const S& c : cuts) {
      if (!(breaks.back() + eps < c) || !(c + eps < S(1))) {
        ++merged;  // zero-width cell: breakpoints collided within tolerance
        continue;
      }
      breaks.push_back(c);
    }
    if (info && merged > 0) {
      info->breakpoint_merge = true;
      info->merged_cells += merged;
    }

    std::size_t n = breaks.size();
    std::vector<S> cell_off(n);
    for (std::size_t c = 0; c < n; ++c) {
      S hi = (c + 1 < n) ? breaks[c + 1] : S(1);
      S mid = breaks[c] + (hi - breaks[c]) / S(2);
      S gm = g.apply(mid);
      cell_off[c] = g.off_[g.piece_of(mid)] + f.off_[f.piece_of(gm)];
    }

    // canonical form: merge adjacent cells whose offsets agree
    std::vector<S> lens2, offs2, starts2;
    for (std::size_t c = 0; c < n; ++c) {
      S hi = (c + 1 < n) ? breaks[c + 1] : S(1);
      if (!offs2.empty() && offsets_equal(offs2.back(), cell_off[c])) {
        lens2.back() += hi - breaks[c];
      } else {
        lens2.push_back(hi - breaks[c]);
        offs2.push_back(cell_off[c]);
        starts2.push_back(breaks[c]);
      }
    }
    std::size_t d = lens2.size();
    std::vector<S> img_start(d);
    for (std::size_t c = 0; c < d; ++c) img_start[c] = starts2[c] + offs2[c];
    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return img_start[a] < img_start[b]; });
    std::vector<int> perm(d);
    for (std::size_t slot = 0; slot < d; ++slot) perm[order[slot]] = static_cast<int>(slot);
    return BasicIntervalExchange(std::move(lens2), std::move(perm));
  }

  /// T^m by linear composition (m < 0 goes through the inverse). Cell
  /// count grows at most linearly: <= |m|(d-1) + 1.
  BasicIntervalExchange power(long m, ComposeInfo* info = nullptr) const {
    if (m == 0) return identity();
    if (m < 0) return inverse().power(-m, info);
    BasicIntervalExchange acc = *this;
    for (long k = 1; k < m; ++k) acc = compose(*this, acc, info);
    return acc;
  }

  bool approx_equal(const BasicIntervalExchange& o, const S& tol) const {
    if (piece_count() != o.piece_count()) return false;
    for (int i = 0; i < piece_count(); ++i) {
      if (tol < ScalarTraits<S>::abs(dom_[i] - o.dom_[i])) return false;
      if (tol < ScalarTraits<S>::abs(off_[i] - o.off_[i])) return false;
      if (perm_[i] != o.perm_[i]) return false;
    }
    return true;
  }

 private:
  static bool offsets_equal(const S& a, const S& b) {
    if constexpr (ScalarTraits<S>::exact) return a == b;
    else return ScalarTraits<S>::abs(a - b) <= S(1e-15L);
  }

  static S one_minus_ulp() {
    if constexpr (std::is_floating_point_v<S>) {
      return std::nextafter(S(1), S(0));
    } else {
      return S(1) - S(1e-18);
    }
  }

  void validate_and_finish() {
    int d = static_cast<int>(lengths_.size());
    require(d >= 1, Errc::validation, "interval exchange needs at least one subinterval");
    require(static_cast<int>(perm_.size()) == d, Errc::validation,
            "permutation size must match the number of lengths");
    std::vector<char> seen(d, 0);
    for (int p : perm_) {
      require(p >= 0 && p < d && !seen[p], Errc::validation,
              "permutation must be a bijection of {0..d-1}");
      seen[p] = 1;
    }
    S sum(0);
    for (const S& l : lengths_) {
      require(S(0) < l, Errc::validation, "subinterval lengths must be strictly positive");
      sum += l;
    }
    require(ScalarTraits<S>::abs(sum - S(1)) <= ScalarTraits<S>::merge_eps(), Errc::validation,
            "subinterval lengths must sum to 1");

    dom_.resize(d + 1);
    dom_[0] = S(0);
    for (int i = 0; i < d; ++i) dom_[i + 1] = dom_[i] + lengths_[i];
    dom_[d] = S(1);  // pin the right endpoint

    // image slot starts, ordered by slot
    std::vector<S> slot_start(d + 1);
    std::vector<int> by_slot(d);
    for (int i = 0; i < d; ++i) by_slot[perm_[i]] = i;
    slot_start[0] = S(0);
    for (int p = 0; p < d; ++p) slot_start[p + 1] = slot_start[p] + lengths_[by_slot[p]];
    off_.resize(d);
    for (int i = 0; i < d; ++i) off_[i] = slot_start[perm_[i]] - dom_[i];

    // image subintervals must tile [0,1): sorted image endpoints reproduce
    // a partition within the merge tolerance
    require(ScalarTraits<S>::abs(slot_start[d] - S(1)) <= ScalarTraits<S>::merge_eps(), Errc::internal,
            "image subintervals fail to tile [0,1)");
  }

  std::vector<S> lengths_;
  std::vector<int> perm_;
  std::vector<S> dom_;
  std::vector<S> off_;
};

using IntervalExchange = BasicIntervalExchange<Real>;

template <class S>
BasicIntervalExchange<S> compose(const BasicIntervalExchange<S>& f, const BasicIntervalExchange<S>& g,
                                 ComposeInfo* info = nullptr) {
  return BasicIntervalExchange<S>::compose(f, g, info);
}

}  // namespace ergolab
