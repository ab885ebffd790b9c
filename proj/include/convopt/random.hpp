#ifndef CONVOPT_RANDOM_HPP
#define CONVOPT_RANDOM_HPP

#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace convopt {

// Seeded generator for everything that shuffles or samples. mt19937_64
// output is fixed by the standard, so a seed pins the whole run bit for bit
// on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Uniform in [0, bound), bound > 0. Plain modulo; the bias is far below
  // anything the solvers could notice and keeps the draw sequence simple.
  std::uint64_t next(std::uint64_t bound) { return gen_() % bound; }

  // Uniform in [0, 1) with 53 random bits.
  double nextDouble() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

// In-place Fisher-Yates. Hand-rolled instead of std::shuffle so the visit
// order is reproducible across standard libraries.
template <typename T>
void shuffle(Rng& rng, std::vector<T>& v) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.next(i));
    std::swap(v[i - 1], v[j]);
  }
}

inline std::vector<int> shuffledIndices(Rng& rng, int n) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  shuffle(rng, idx);
  return idx;
}

}  // namespace convopt

#endif  // CONVOPT_RANDOM_HPP
