#include "bellproc/rng.hpp"

#include <cmath>

namespace bellproc {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& x) noexcept {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed) noexcept : seed_(seed) {
  std::uint64_t x = seed;
  for (auto& s : state_) s = splitmix64(x);
}

RngStream::result_type RngStream::operator()() noexcept {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::uniform() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double RngStream::exponential(double rate) noexcept {
  // 1 - u lies in (0, 1].
  return -std::log1p(-uniform()) / rate;
}

RngStream RngStream::split(std::uint64_t index) const noexcept {
  std::uint64_t x = seed_ ^ 0x6a09e667f3bcc909ULL;
  const std::uint64_t a = splitmix64(x);
  std::uint64_t y = index + 0xbb67ae8584caa73bULL;
  const std::uint64_t b = splitmix64(y);
  return RngStream(a ^ rotl(b, 23));
}

}  // namespace bellproc
