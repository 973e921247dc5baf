#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lobarena {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Derives an independent substream seed from a master seed and a stream id.
/// Streams are stable: they depend only on (master, stream id), so adding a
/// stream never perturbs the draws of existing ones.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream_id) {
  return splitmix64(splitmix64(master) ^ splitmix64(stream_id + 0x632be59bd9b4e019ull));
}

/// mt19937_64 with explicit draw transforms. The standard pins the engine's
/// output sequence but not the distribution adaptors, so all transforms are
/// spelled out here to keep runs reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Unbiased uniform integer in {0, ..., n-1}; n must be > 0.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  /// Uniform integer in {lo, ..., hi}, inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    uniform_below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller (one draw consumed per pair, second
  /// discarded so the stream position does not depend on call parity).
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(6.283185307179586477 * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Exponential with the given mean (mean = 1/rate).
  double exponential_mean(double mean) { return -mean * std::log1p(-uniform()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lobarena
