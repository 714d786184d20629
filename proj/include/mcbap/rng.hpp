#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mcbap {

// Seedable RNG with fixed cross-platform behavior. The engine is mt19937_64
// (bit-exact per the C++ standard); the variate mappings below are ours, so
// identical seeds give identical streams on every platform. Do not swap in
// std::uniform_*_distribution: those are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform in {0, ..., n-1}, unbiased via rejection
  std::size_t index(std::size_t n) {
    const std::uint64_t limit =
        ~std::uint64_t{0} - ~std::uint64_t{0} % static_cast<std::uint64_t>(n);
    std::uint64_t r;
    do {
      r = eng_();
    } while (r >= limit);
    return static_cast<std::size_t>(r % static_cast<std::uint64_t>(n));
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index(i)]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace mcbap
