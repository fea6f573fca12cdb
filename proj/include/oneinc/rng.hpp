#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace oneinc {

// Deterministic generator used for every randomized experiment. splitmix64
// keeps output identical across standard libraries and platforms, which the
// reproducibility guarantees depend on; std::uniform_int_distribution does
// not promise that. Streams are derived from (master seed, stream index) so
// trials can be re-run independently.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ULL) {}

  static Rng stream(std::uint64_t master_seed, std::uint64_t stream_index) {
    Rng mix(master_seed);
    std::uint64_t a = mix.u64();
    return Rng(a ^ (stream_index * 0xbf58476d1ce4e5b9ULL + 0x94d049bb133111ebULL));
  }

  std::uint64_t u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    // rejection sampling to avoid modulo bias
    const std::uint64_t limit = span * (~0ULL / span);
    std::uint64_t v;
    do {
      v = u64();
    } while (v >= limit);
    return lo + static_cast<std::int64_t>(v % span);
  }

  double uniform_real() {  // [0, 1)
    return static_cast<double>(u64() >> 11) * 0x1.0p-53;
  }

  double normal() {
    // Box-Muller; one value per call is plenty at this scale.
    double u1 = uniform_real();
    double u2 = uniform_real();
    while (u1 <= 1e-300) u1 = uniform_real();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  // Index sampled according to nonnegative weights (assumed to sum to ~1).
  int discrete(const std::vector<double>& weights) {
    double r = uniform_real();
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      if (r < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

 private:
  std::uint64_t state_;
};

}  // namespace oneinc
