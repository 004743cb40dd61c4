#include "bellproc/process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bellproc/error.hpp"
#include "bellproc/sampler.hpp"

namespace bellproc {

SamplePath::SamplePath(DegenParams params, double horizon, std::vector<Burst> bursts)
    : params_(params), horizon_(horizon), bursts_(std::move(bursts)) {
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_))
    throw Error(Errc::domain, "SamplePath: horizon must be positive");
  const std::size_t m = params_.reciprocal();
  cumulative_.reserve(bursts_.size());
  std::size_t total = 0;
  double last = 0.0;
  for (std::size_t i = 0; i < bursts_.size(); ++i) {
    const auto& b = bursts_[i];
    if (!(b.time > 0.0 && b.time <= horizon_))
      throw Error(Errc::domain, "SamplePath: burst time outside (0, horizon]");
    if (b.time < last) throw Error(Errc::domain, "SamplePath: burst times are not ordered");
    if (b.size == 0) throw Error(Errc::domain, "SamplePath: burst of size zero");
    if (m != 0 && b.size > m)
      throw Error(Errc::domain, "SamplePath: burst size " + std::to_string(b.size) +
                                    " exceeds 1/lambda = " + std::to_string(m));
    last = b.time;
    total += b.size;
    cumulative_.push_back(total);
  }
}

SamplePath simulate_path(const DegenParams& params, double horizon, RngStream& rng) {
  return simulate_path(params, decompose(params), horizon, rng);
}

SamplePath simulate_path(const DegenParams& params, const JumpLaw& law, double horizon,
                         RngStream& rng) {
  if (!params.strict())
    throw Error(Errc::not_strict, "simulate_path: lambda must be 1/m");
  if (!(horizon > 0.0)) throw Error(Errc::domain, "simulate_path: horizon must be positive");
  std::vector<Burst> bursts;
  const double rate = law.burst_rate();
  double t = 0.0;
  for (;;) {
    const double gap = rng.exponential(rate);
    // A zero gap would repeat the previous time.
    if (gap == 0.0) continue;
    t += gap;
    if (t > horizon) break;
    bursts.push_back({t, sample_jump(law, rng)});
  }
  return SamplePath(params, horizon, std::move(bursts));
}

std::size_t count_at(const SamplePath& path, double t) {
  if (!(t >= 0.0 && t <= path.horizon()))
    throw Error(Errc::domain, "count_at: t=" + std::to_string(t) + " outside [0, horizon]");
  const auto b = path.bursts();
  const auto it = std::upper_bound(b.begin(), b.end(), t,
                                   [](double v, const Burst& x) { return v < x.time; });
  const auto n = static_cast<std::size_t>(it - b.begin());
  return n == 0 ? 0 : path.cumulative()[n - 1];
}

std::size_t increment(const SamplePath& path, double s, double t) {
  if (!(s < t)) throw Error(Errc::domain, "increment: need s < t");
  return count_at(path, t) - count_at(path, s);
}

double laplace_functional(const DegenParams& params, double t, double x) {
  if (!(t >= 0.0)) throw Error(Errc::domain, "laplace_functional: t must be nonnegative");
  if (!(x >= 0.0)) throw Error(Errc::domain, "laplace_functional: x must be nonnegative");
  const double lam = params.lambda();
  const double th = params.theta();
  return std::exp(params.alpha() * t *
                  (degenerate_expm1(lam, std::exp(-x) * th) - degenerate_expm1(lam, th)));
}

double small_s_intensity(std::size_t k, const DegenParams& params, double s) {
  if (k == 0) throw Error(Errc::domain, "small_s_intensity: k must be positive");
  if (!(s > 0.0)) throw Error(Errc::domain, "small_s_intensity: s must be positive");
  double w = params.alpha() * s * falling_factorial_degenerate(1.0, k, params.lambda());
  for (std::size_t j = 1; j <= k; ++j) w *= params.theta() / static_cast<double>(j);
  return w;
}

SamplePath superpose(std::span<const SamplePath> paths) {
  if (paths.empty()) throw Error(Errc::domain, "superpose: no paths");
  const auto& first = paths.front();
  DegenParams params = first.params();
  std::size_t total = first.bursts().size();
  for (std::size_t i = 1; i < paths.size(); ++i) {
    const auto& p = paths[i];
    if (std::fabs(p.horizon() - first.horizon()) >
        1e-12 * std::max(1.0, std::fabs(first.horizon())))
      throw Error(Errc::horizon_mismatch, "superpose: paths have different horizons");
    params = convolve(params, p.params());
    total += p.bursts().size();
  }
  struct Tagged {
    Burst burst;
    std::size_t source;
  };
  std::vector<Tagged> merged;
  merged.reserve(total);
  for (std::size_t i = 0; i < paths.size(); ++i)
    for (const auto& b : paths[i].bursts()) merged.push_back({b, i});
  std::stable_sort(merged.begin(), merged.end(), [](const Tagged& a, const Tagged& b) {
    return a.burst.time < b.burst.time || (a.burst.time == b.burst.time && a.source < b.source);
  });
  std::vector<Burst> bursts;
  bursts.reserve(total);
  for (const auto& t : merged) bursts.push_back(t.burst);
  return SamplePath(params, first.horizon(), std::move(bursts));
}

}  // namespace bellproc
