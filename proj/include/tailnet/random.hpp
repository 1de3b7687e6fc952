#ifndef TAILNET_RANDOM_HPP
#define TAILNET_RANDOM_HPP

#include <array>
#include <cstdint>

namespace tailnet {

/// Seeded xoshiro256++ stream with deterministic substream splitting.
///
/// Identical seeds give bit-identical draw sequences. substream(k) derives a
/// statistically independent stream from (seed, k), so parallel simulation
/// paths stay reproducible regardless of scheduling. A single stream must not
/// be shared across concurrent callers.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  RandomStream substream(std::uint64_t k) const;

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();

  /// Uniform on the open interval (0,1); never returns 0 or 1.
  double uniform();

  double uniform(double lo, double hi);

  /// Integer uniform on {0, 1, ..., n-1} (unbiased).
  std::uint64_t uniform_int(std::uint64_t n);

  /// Standard normal via the AS241 quantile of a single uniform.
  double normal();

  /// Unit-rate exponential.
  double exponential();

 private:
  std::uint64_t seed_ = 0;
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace tailnet

#endif  // TAILNET_RANDOM_HPP
