#pragma once

// Counter-based Gaussian variates. Philox4x32-10 (Salmon et al., SC'11)
// maps (key, counter) to 128 random bits with no state, so any replication
// can be generated independently of the others and of thread scheduling.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace hermrank {

class Philox4x32 {
 public:
  using block = std::array<std::uint32_t, 4>;

  explicit Philox4x32(std::uint64_t key) : k0_(static_cast<std::uint32_t>(key)), k1_(static_cast<std::uint32_t>(key >> 32)) {}

  block operator()(block ctr) const {
    std::uint32_t k0 = k0_, k1 = k1_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ k0, static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ k1, static_cast<std::uint32_t>(p0)};
      k0 += kW0;
      k1 += kW1;
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;
  std::uint32_t k0_, k1_;
};

/// SplitMix64 finalizer; used to derive per-replication keys.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Key of replication `rep` under `master_seed`.
inline std::uint64_t replication_seed(std::uint64_t master_seed, std::uint64_t rep) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(rep + 0x632BE59BD9B4E019ull));
}

/// Stream of standard normals for one key: Box-Muller on consecutive Philox
/// blocks. Block i yields normals 2i and 2i+1.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t key) : rng_(key) {}

  std::array<double, 2> pair(std::uint64_t index) const {
    const auto b = rng_({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0u, 0u});
    const double u1 = to_unit((std::uint64_t{b[0]} << 32) | b[1]);
    const double u2 = to_unit((std::uint64_t{b[2]} << 32) | b[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(t), r * std::sin(t)};
  }

  /// Fills out[0..n) with normals 0..n-1 of this stream.
  template <typename Out>
  void fill(Out* out, std::size_t n) const {
    for (std::size_t i = 0; 2 * i < n; ++i) {
      const auto z = pair(i);
      out[2 * i] = z[0];
      if (2 * i + 1 < n) out[2 * i + 1] = z[1];
    }
  }

 private:
  // Open interval (0, 1) from the top 53 bits.
  static double to_unit(std::uint64_t bits) { return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53; }

  Philox4x32 rng_;
};

}  // namespace hermrank
