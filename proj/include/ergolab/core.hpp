#pragma once

// Core scalar configuration, error codes and small shared utilities.
//
// All geometry runs on `Real` (x86 extended precision, 64-bit mantissa).
// Breakpoint comparisons share one global merge tolerance; exact scalar
// types (rationals) plug in through ScalarTraits with a zero tolerance.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace ergolab {

using Real = long double;

inline constexpr Real kMergeEps = 1e-12L;    // breakpoint merge tolerance
inline constexpr Real kMeasureTol = 1e-10L;  // measure bookkeeping tolerance

enum class Errc {
  validation,   // bad inputs / config
  domain,       // point or parameter outside the defined domain
  size_cap,     // refinement exceeded the configured cell cap
  degenerate,   // degenerate family / measure-degenerate set
  witness,      // schedule search refuted (positive-entropy witness)
  internal,     // broken invariant
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, Errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

/// Scalar policy for the geometry kernel. The default instantiation is
/// `Real`; exact types specialize with a zero merge tolerance.
template <class S>
struct ScalarTraits {
  static constexpr bool exact = false;
  static S merge_eps() { return S(kMergeEps); }
  static S abs(const S& x) { return x < S(0) ? -x : x; }
  static double to_double(const S& x) { return static_cast<double>(x); }
  static Real to_real(const S& x) { return static_cast<Real>(x); }
  static S from_double(double u) { return S(u); }
};

template <class S>
inline bool scalar_close(const S& a, const S& b) {
  return ScalarTraits<S>::abs(a - b) <= ScalarTraits<S>::merge_eps();
}

/// Deterministic 12-significant-digit formatting ('.' decimal point, no
/// locale). One formatter everywhere keeps CLI output byte-reproducible.
inline std::string fmt_real(Real x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12Lg", x);
  return std::string(buf);
}

inline std::string fmt_real(double x) { return fmt_real(static_cast<Real>(x)); }

/// Index-sharded parallel loop. Tasks write results into caller-owned
/// slots keyed by index, so outputs never depend on the worker count.
inline void parallel_for_index(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  if (workers <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex mtx;
  auto body = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load()) break;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mtx);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        break;
      }
    }
  };
  std::vector<std::thread> pool;
  std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  pool.reserve(count);
  for (std::size_t t = 0; t < count; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ergolab
