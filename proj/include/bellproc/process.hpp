#pragma once

// The degenerate Bell counting process N(t), realized as a marked Poisson
// process: burst epochs arrive at rate alpha (e_lambda(theta) - 1) and each
// burst adds an independent jump drawn from the JumpLaw.

#include <cstddef>
#include <span>
#include <vector>

#include "bellproc/dist.hpp"
#include "bellproc/rng.hpp"

namespace bellproc {

struct Burst {
  double time;
  std::size_t size;

  friend bool operator==(const Burst&, const Burst&) = default;
};

/// A realized trajectory on [0, horizon]. Burst times lie in (0, horizon] and
/// are nondecreasing (strictly increasing for simulated paths; ties can only
/// arise from superposition at floating-point resolution).
class SamplePath {
 public:
  /// Checks ordering, sizes >= 1, times in (0, horizon], and for lambda = 1/m
  /// sizes <= m. Throws Error(domain) on violation.
  SamplePath(DegenParams params, double horizon, std::vector<Burst> bursts);

  const DegenParams& params() const noexcept { return params_; }
  double horizon() const noexcept { return horizon_; }
  std::span<const Burst> bursts() const noexcept { return bursts_; }
  /// cumulative()[i] = sum of sizes of bursts 0..i.
  std::span<const std::size_t> cumulative() const noexcept { return cumulative_; }

 private:
  DegenParams params_;
  double horizon_;
  std::vector<Burst> bursts_;
  std::vector<std::size_t> cumulative_;
};

/// Throws Error(not_strict) for Asymptotic params, Error(domain) for horizon <= 0.
SamplePath simulate_path(const DegenParams& params, double horizon, RngStream& rng);

/// Same, reusing a precomputed decomposition of `params`.
SamplePath simulate_path(const DegenParams& params, const JumpLaw& law, double horizon,
                         RngStream& rng);

/// N(t): total size of bursts at times <= t. Throws Error(domain) outside [0, T].
std::size_t count_at(const SamplePath& path, double t);

/// N(t) - N(s) for 0 <= s < t <= T.
std::size_t increment(const SamplePath& path, double s, double t);

/// E[exp(-x N(t))] = exp(alpha t (e_lambda(e^{-x} theta) - e_lambda(theta))).
double laplace_functional(const DegenParams& params, double t, double x);

/// alpha s (1)_{k,lambda} theta^k / k!, the o(s)-accurate probability of k
/// events in a short window of length s.
double small_s_intensity(std::size_t k, const DegenParams& params, double s);

/// Pointwise sum of independent paths; alpha of the result is the sum.
/// Throws Error(theta_mismatch), Error(lambda_mismatch) or
/// Error(horizon_mismatch). Ties are ordered by source index.
SamplePath superpose(std::span<const SamplePath> paths);

}  // namespace bellproc
