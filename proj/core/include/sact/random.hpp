#ifndef SACT_RANDOM_HPP_
#define SACT_RANDOM_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace sact {

// splitmix64 finalizer; derives independent stream seeds from (seed, index).
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// mt19937_64 with bounded draws and shuffles implemented here rather than
// through <random> distributions, whose output is library-specific.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, n); n > 0.
  std::size_t uniform(std::size_t n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform_real() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[uniform(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sact

#endif  // SACT_RANDOM_HPP_
