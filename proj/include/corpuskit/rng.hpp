#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>
#include <utility>
#include <vector>

namespace corpuskit::rng {

// Identity string recorded in reproducible output files. Any change to the
// generator or the shuffle below must bump this.
inline constexpr const char* kPrngId = "splitmix64-fisheryates-v1";

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Self-contained deterministic generator; std::mt19937 & friends are
// avoided on purpose so byte-identical output does not depend on the
// standard library implementation.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}

  std::uint64_t operator()() { return splitmix64(state_); }

  // Unbiased draw in [0, n) by rejection.
  std::uint64_t bounded(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = (*this)();
    } while (v >= limit);
    return v % n;
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

// Folds several values into one seed via repeated splitmix steps.
inline std::uint64_t mix(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t state = 0x6A09E667F3BCC908ull;
  for (std::uint64_t p : parts) {
    state ^= p;
    splitmix64(state);
  }
  return splitmix64(state);
}

// Fisher-Yates, descending index order.
template <typename T>
void shuffle(std::vector<T>& v, SplitMix& g) {
  if (v.size() < 2) return;
  for (std::size_t i = v.size() - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(g.bounded(i + 1));
    using std::swap;
    swap(v[i], v[j]);
  }
}

}  // namespace corpuskit::rng
