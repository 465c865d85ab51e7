// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace tsnsim {

/// Per-component random stream derived from the run seed and a stable label,
/// so adding a component never perturbs the draws of another.
class RngStream {
 public:
  RngStream(uint64_t seed, std::string_view label) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : label) {
      h ^= c;
      h *= 1099511628211ull;
    }
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(h),
                      static_cast<uint32_t>(h >> 32)};
    engine_.seed(seq);
  }

  /// Uniform in [lo, hi].
  int64_t uniform(int64_t lo, int64_t hi) {
    if (hi <= lo) return lo;
    const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    // rejection sampling keeps the draw exact and library-independent
    const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<int64_t>(x % span);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tsnsim
