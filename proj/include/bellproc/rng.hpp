#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace bellproc {

/// xoshiro256** seeded through splitmix64. Satisfies
/// UniformRandomBitGenerator. Streams derived with split() are seeded from a
/// hash of (seed, index) and are independent for all practical purposes.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Exponential with the given rate (> 0).
  double exponential(double rate) noexcept;

  /// Child stream number `index`; does not advance this stream.
  RngStream split(std::uint64_t index) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_;
};

std::uint64_t splitmix64(std::uint64_t& x) noexcept;

}  // namespace bellproc
