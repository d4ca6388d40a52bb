#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace calib::testing {

// Tiny seeded generator for property tests. Draws are platform independent.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double real(double lo, double hi) { return lo + (hi - lo) * unit(); }
  // 10^u with u uniform in [lo_exp, hi_exp].
  double log_real(double lo_exp, double hi_exp) { return std::pow(10.0, real(lo_exp, hi_exp)); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(unit() * static_cast<double>(n)) % n; }
  int integer(int lo, int hi) { return lo + static_cast<int>(index(static_cast<std::size_t>(hi - lo + 1))); }
  bool coin() { return (engine_() & 1u) != 0; }

 private:
  std::mt19937_64 engine_;
};

// Runs `property` on `cases` generated inputs; stops at the first failing case
// and reports the seed and case index so it can be replayed.
inline void for_all(std::uint64_t seed, int cases, const std::function<void(Gen&, int)>& property) {
  Gen gen(seed);
  for (int i = 0; i < cases; ++i) {
    SCOPED_TRACE("seed " + std::to_string(seed) + " case " + std::to_string(i));
    property(gen, i);
    if (::testing::Test::HasFailure()) return;
  }
}

}  // namespace calib::testing
