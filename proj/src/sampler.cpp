#include "bellproc/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "bellproc/error.hpp"

namespace bellproc {

std::size_t sample_inverse_cdf(const PmfTable& table, RngStream& rng) {
  if (!(table.tail_mass() <= kDefaultTailTol))
    throw Error(Errc::tail_sliver, "sample_inverse_cdf: table tail is not certified below 1e-12");
  const auto c = table.cumulative();
  for (;;) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(c.begin(), c.end(), u);
    if (it != c.end()) return static_cast<std::size_t>(it - c.begin());
  }
}

std::uint64_t sample_poisson(double mean, RngStream& rng) {
  if (!(mean > 0.0)) return 0;
  if (mean < 10.0) {
    // Sequential search from k = 0.
    double u = rng.uniform();
    double p = std::exp(-mean);
    std::uint64_t k = 0;
    while (u >= p) {
      u -= p;
      ++k;
      p *= mean / static_cast<double>(k);
      if (p == 0.0) {
        // Rounding exhausted the mass; restart with a fresh uniform.
        u = rng.uniform();
        p = std::exp(-mean);
        k = 0;
      }
    }
    return k;
  }
  // PTRS (W. Hörmann, 1993).
  const double smu = std::sqrt(mean);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mean = std::log(mean);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + k * log_mean - std::lgamma(k + 1.0))
      return static_cast<std::uint64_t>(k);
  }
}

std::size_t sample_jump(const JumpLaw& law, RngStream& rng) {
  const auto c = law.cumulative();
  if (c.size() == 1) return 1;
  for (;;) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(c.begin(), c.end(), u);
    if (it != c.end()) return static_cast<std::size_t>(it - c.begin()) + 1;
  }
}

std::size_t sample_compound(const JumpLaw& law, RngStream& rng) {
  const std::uint64_t bursts = sample_poisson(law.burst_rate(), rng);
  std::size_t total = 0;
  for (std::uint64_t i = 0; i < bursts; ++i) total += sample_jump(law, rng);
  return total;
}

}  // namespace bellproc
