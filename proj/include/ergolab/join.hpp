#pragma once

// Exact joins over progressions. For R = T^j the decomposition of
//
//     ⋁_{m=1..L} R^{-m} ξ
//
// is computed in two passes: the elementary breakpoints come from the
// recursion ζ_m = R^{-1}(ξ ∨ ζ_{m-1}), and each elementary interval is
// then labeled by iterating its midpoint forward under R and recording
// ξ-cell indices. Elementary intervals sharing a label tuple form one
// atom of the join; entropy must be taken over those grouped measures,
// never over raw elementary intervals (which over-refine the join).
//
// Grouping is exact: instead of hashing whole tuples, group ids are
// renumbered incrementally one progression step at a time, which yields
// the same equivalence classes as full tuple equality with O(E) memory.

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ergolab/core.hpp"
#include "ergolab/interval_exchange.hpp"
#include "ergolab/partition.hpp"
#include "ergolab/rng.hpp"

namespace ergolab {

struct JoinOptions {
  std::size_t cell_cap = 10'000'000;  // abort if elementary intervals exceed this
  bool verify_labels = true;          // sample 1% of intervals, 3 interior points each
  double verify_fraction = 0.01;
  std::uint64_t verify_seed = 0x4552474f4c4142ULL;
};

template <class S>
class BasicLabeledDecomposition {
 public:
  using Iet = BasicIntervalExchange<S>;
  using Partition = BasicIntervalPartition<S>;

  BasicLabeledDecomposition(std::vector<S> elem_breaks, std::vector<std::uint32_t> group_of,
                            std::vector<S> group_measures, std::vector<std::uint32_t> group_rep,
                            Iet map, Partition xi, long steps)
      : elem_breaks_(std::move(elem_breaks)),
        group_of_(std::move(group_of)),
        group_measures_(std::move(group_measures)),
        group_rep_(std::move(group_rep)),
        map_(std::move(map)),
        xi_(std::move(xi)),
        steps_(steps) {}

  std::size_t elementary_count() const { return group_of_.size(); }
  std::size_t group_count() const { return group_measures_.size(); }
  long steps() const { return steps_; }
  const std::vector<S>& elementary_breakpoints() const { return elem_breaks_; }
  const std::vector<std::uint32_t>& group_of() const { return group_of_; }
  const std::vector<S>& group_measures() const { return group_measures_; }
  const Iet& progression_map() const { return map_; }
  const Partition& base_partition() const { return xi_; }

  std::vector<Real> group_measures_real() const {
    std::vector<Real> m(group_measures_.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = ScalarTraits<S>::to_real(group_measures_[i]);
    return m;
  }

  S elementary_lo(std::size_t i) const { return elem_breaks_[i]; }
  S elementary_hi(std::size_t i) const {
    return i + 1 < elem_breaks_.size() ? elem_breaks_[i + 1] : S(1);
  }

  /// Label tuple of one elementary interval, recomputed on demand by
  /// iterating its midpoint (ξ-cell of R^m x for m = 1..L).
  std::vector<std::uint16_t> label_tuple(std::size_t i) const {
    S lo = elementary_lo(i), hi = elementary_hi(i);
    return label_tuple_of_point(lo + (hi - lo) / S(2));
  }

  std::vector<std::uint16_t> label_tuple_of_point(S x) const {
    std::vector<std::uint16_t> t(static_cast<std::size_t>(steps_));
    for (long m = 0; m < steps_; ++m) {
      x = map_.apply(x);
      t[static_cast<std::size_t>(m)] = static_cast<std::uint16_t>(xi_.cell_of(x));
    }
    return t;
  }

  std::vector<std::uint16_t> group_tuple(std::uint32_t g) const { return label_tuple(group_rep_[g]); }

 private:
  std::vector<S> elem_breaks_;
  std::vector<std::uint32_t> group_of_;
  std::vector<S> group_measures_;
  std::vector<std::uint32_t> group_rep_;
  Iet map_;
  Partition xi_;
  long steps_;
};

namespace detail {

/// One pullback-and-refine step on raw breakpoints:
/// out = inv(ξ-breaks ∪ current) ∪ domain breaks of R, deduplicated.
template <class S>
std::vector<S> join_step_breaks(const BasicIntervalExchange<S>& inv_map,
                                const std::vector<S>& map_domain_breaks,
                                const std::vector<S>& xi_breaks, const std::vector<S>& current,
                                RefineInfo* info) {
  std::vector<S> pts;
  pts.reserve(current.size() + xi_breaks.size() + map_domain_breaks.size());
  for (const S& b : current) pts.push_back(inv_map.apply(b));
  for (std::size_t i = 1; i < xi_breaks.size(); ++i) pts.push_back(inv_map.apply(xi_breaks[i]));
  pts.push_back(inv_map.apply(S(0)));
  for (std::size_t i = 1; i + 1 < map_domain_breaks.size(); ++i) pts.push_back(map_domain_breaks[i]);
  auto part = BasicIntervalPartition<S>::from_candidates(std::move(pts), info);
  return part.breakpoints();
}

}  // namespace detail

/// Join over a progression given the already-powered map R = T^j.
template <class S>
BasicLabeledDecomposition<S> join_over_progression_map(const BasicIntervalExchange<S>& r,
                                                       const BasicIntervalPartition<S>& xi, long steps,
                                                       const JoinOptions& opts = {},
                                                       RefineInfo* info = nullptr) {
  require(steps >= 1, Errc::validation, "join: step count must be >= 1");
  require(xi.cell_count() <= 65535, Errc::validation, "join: partition too fine for label storage");

  BasicIntervalExchange<S> inv = r.inverse();
  const std::vector<S>& xb = xi.breakpoints();

  // elementary breakpoints via the pullback recursion
  std::vector<S> breaks{S(0)};
  for (long m = 0; m < steps; ++m) {
    breaks = detail::join_step_breaks(inv, r.domain_breakpoints(), xb, breaks, info);
    require(breaks.size() <= opts.cell_cap, Errc::size_cap,
            "join: elementary interval count exceeded the configured cap");
  }

  const std::size_t n = breaks.size();
  std::vector<S> mids(n);
  for (std::size_t i = 0; i < n; ++i) {
    S hi = (i + 1 < n) ? breaks[i + 1] : S(1);
    mids[i] = breaks[i] + (hi - breaks[i]) / S(2);
  }

  // incremental group renumbering: after step m, two intervals share a
  // group id iff their label prefixes of length m coincide
  std::vector<std::uint32_t> gid(n, 0);
  std::uint32_t group_count = 1;
  std::unordered_map<std::uint64_t, std::uint32_t> renumber;
  for (long m = 0; m < steps; ++m) {
    renumber.clear();
    renumber.reserve(group_count * 2 + 8);
    std::uint32_t next_id = 0;
    for (std::size_t i = 0; i < n; ++i) {
      mids[i] = r.apply(mids[i]);
      std::uint64_t key = (static_cast<std::uint64_t>(gid[i]) << 16) |
                          static_cast<std::uint64_t>(xi.cell_of(mids[i]));
      auto [it, inserted] = renumber.try_emplace(key, next_id);
      if (inserted) ++next_id;
      gid[i] = it->second;
    }
    group_count = next_id;
  }

  std::vector<S> group_measures(group_count, S(0));
  std::vector<std::uint32_t> group_rep(group_count, 0);
  std::vector<char> seen(group_count, 0);
  for (std::size_t i = 0; i < n; ++i) {
    S hi = (i + 1 < n) ? breaks[i + 1] : S(1);
    group_measures[gid[i]] += hi - breaks[i];
    if (!seen[gid[i]]) {
      seen[gid[i]] = 1;
      group_rep[gid[i]] = static_cast<std::uint32_t>(i);
    }
  }

  S total(0);
  for (const S& g : group_measures) total += g;
  require(ScalarTraits<S>::abs(total - S(1)) <= S(kMeasureTol), Errc::internal,
          "join: group measures fail to sum to 1");

  BasicLabeledDecomposition<S> out(std::move(breaks), std::move(gid), std::move(group_measures),
                                   std::move(group_rep), r, xi, steps);

  if (opts.verify_labels) {
    // guard against tolerance-induced missed breakpoints: label tuples
    // must be constant on elementary interiors
    CounterRng rng(SplitMix64::derive_stream(opts.verify_seed, (static_cast<std::uint64_t>(steps) << 32) ^ n));
    std::size_t samples = static_cast<std::size_t>(n * opts.verify_fraction);
    if (samples < 1) samples = 1;
    for (std::size_t s = 0; s < samples; ++s) {
      std::size_t i = static_cast<std::size_t>(rng.next_below(n));
      auto ref = out.label_tuple(i);
      S lo = out.elementary_lo(i), hi = out.elementary_hi(i);
      for (int k = 0; k < 3; ++k) {
        double u = 0.1 + 0.8 * rng.next_unit();
        S x = lo + (hi - lo) * ScalarTraits<S>::from_double(u);
        require(out.label_tuple_of_point(x) == ref, Errc::internal,
                "join: label tuple not constant on an elementary interval "
                "(tolerance-induced missed breakpoint)");
      }
    }
  }

  return out;
}

/// Join of ⋁_{m=1..L} (T^j)^{-m} ξ from the base transformation.
template <class S>
BasicLabeledDecomposition<S> join_over_progression(const BasicIntervalExchange<S>& t,
                                                   const BasicIntervalPartition<S>& xi, long j, long steps,
                                                   const JoinOptions& opts = {}, RefineInfo* info = nullptr,
                                                   ComposeInfo* power_info = nullptr) {
  require(j >= 1, Errc::validation, "join: progression index j must be >= 1");
  return join_over_progression_map(t.power(j, power_info), xi, steps, opts, info);
}

using LabeledDecomposition = BasicLabeledDecomposition<Real>;

}  // namespace ergolab
