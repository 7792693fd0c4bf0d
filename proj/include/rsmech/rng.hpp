#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace rsmech {

/// Portable seeded generator.
///
/// The raw engine is std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. Standard distributions are implementation-defined, so the
/// bounded draws below use explicit rejection sampling to stay reproducible
/// across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    // Reject the low 2^64 mod bound draws so the remainder is unbiased.
    const std::uint64_t threshold = (0 - bound) % bound;
    std::uint64_t draw = 0;
    do {
      draw = engine_();
    } while (draw < threshold);
    return draw % bound;
  }

  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// Derives an independent stream seed from a base seed and an index (splitmix64).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace rsmech
