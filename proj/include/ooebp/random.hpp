#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ooebp/core.hpp"

namespace ooebp {

/// Seeded random instances. The generator is std::mt19937_64; every draw is
/// an index into an explicitly ordered list, so results depend only on the
/// seed and the engine, not on library distribution classes.
class instance_sampler {
 public:
  explicit instance_sampler(std::uint64_t seed) : rng_(seed) {}

  /// Uniform integer in [lo, hi], by rejection on the raw 64-bit output.
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    if (hi < lo) throw std::invalid_argument("empty range");
    const std::uint64_t span = hi - lo + 1;
    if (span == 0) return rng_();
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t r;
    do {
      r = rng_();
    } while (r >= limit);
    return lo + r % span;
  }

  /// n items drawn uniformly from the pairs (p, q) with 1 <= p <= q <= max_q,
  /// listed by q then p. Without ones, pairs with p = q are excluded.
  instance fractions(std::size_t n, std::int64_t max_q, bool allow_ones = true) {
    std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
    for (std::int64_t q = 1; q <= max_q; ++q) {
      for (std::int64_t p = 1; p <= q; ++p) {
        if (!allow_ones && p == q) continue;
        pairs.emplace_back(p, q);
      }
    }
    if (pairs.empty()) throw std::invalid_argument("no sizes to draw from");
    instance out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& [p, q] = pairs[uniform(0, pairs.size() - 1)];
      out.push_back(rational(p, q));
    }
    return out;
  }

  /// n items drawn uniformly from {1} and {1/q : 2 <= q <= max_q}.
  instance unit_fractions(std::size_t n, std::int64_t max_q) {
    if (max_q < 2) throw std::invalid_argument("max_q must be at least 2");
    instance out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto q = static_cast<std::int64_t>(uniform(1, static_cast<std::uint64_t>(max_q)));
      out.push_back(q == 1 ? rational(1) : rational(1, q));
    }
    return out;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace ooebp
