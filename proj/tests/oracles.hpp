#pragma once

// Reference computations used only by the tests. Each one follows a
// different numerical route from the library code it checks.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace oracle {

/// Poisson(mean) pmf on [0, hi] in long double: log pmf at the mode from
/// lgammal, then the ratio recurrence p(k+1) = p(k) mean / (k+1) outwards.
inline std::vector<long double> poisson_pmf_table(double mean, std::int64_t hi) {
  const auto mode = static_cast<std::int64_t>(std::floor(mean));
  std::vector<long double> p(static_cast<std::size_t>(hi + 1), 0.0L);
  const long double lm = mean;
  const long double log_mode = -lm + static_cast<long double>(mode) * std::log(lm) - std::lgamma(mode + 1.0L);
  p[static_cast<std::size_t>(mode)] = std::exp(log_mode);
  for (std::int64_t k = mode; k < hi; ++k) {
    p[static_cast<std::size_t>(k + 1)] = p[static_cast<std::size_t>(k)] * lm / static_cast<long double>(k + 1);
  }
  for (std::int64_t k = mode; k > 0; --k) {
    p[static_cast<std::size_t>(k - 1)] = p[static_cast<std::size_t>(k)] * static_cast<long double>(k) / lm;
  }
  return p;
}

/// Σ_{k in [0, hi], member(k)} pmf(k), plain long double accumulation.
inline long double poisson_mass(double mean, std::int64_t hi, const std::function<bool(std::int64_t)>& member) {
  const auto p = poisson_pmf_table(mean, hi);
  long double total = 0.0L;
  for (std::int64_t k = 0; k <= hi; ++k) {
    if (member(k)) total += p[static_cast<std::size_t>(k)];
  }
  return total;
}

/// Membership in ⋃_k [4^k − 2^k k, 4^k + 2^k k] straight from the definition.
inline bool in_b(std::int64_t u) {
  for (int k = 0; k <= 30; ++k) {
    const long double c = std::ldexp(1.0L, 2 * k);
    const long double h = std::ldexp(1.0L, k) * k;
    if (u >= c - h && u <= c + h) return true;
  }
  return false;
}

/// #{0 <= u <= n : u in B} by summing clipped block lengths.
inline std::int64_t b_count(std::int64_t n) {
  std::int64_t total = 0;
  for (int k = 0; k <= 30; ++k) {
    const std::int64_t c = std::int64_t{1} << (2 * k);
    const std::int64_t h = (std::int64_t{1} << k) * k;
    const std::int64_t lo = c - h, hi = std::min(c + h, n);
    if (hi >= lo) total += hi - lo + 1;
  }
  return total;
}

/// Brute-force count of a predicate over [lo, hi].
inline std::int64_t brute_count(const std::function<bool(std::int64_t)>& member, std::int64_t lo, std::int64_t hi) {
  std::int64_t total = 0;
  for (std::int64_t k = lo; k <= hi; ++k) total += member(k);
  return total;
}

}  // namespace oracle
