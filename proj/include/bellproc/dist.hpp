#pragma once

// The two-parameter degenerate Bell distribution DB_lambda(alpha, theta):
//   p(k) = exp(-alpha (e_lambda(theta) - 1)) theta^k / k! phi_{k,lambda}(alpha).

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bellproc/degen_core.hpp"

namespace bellproc {

/// Strict: lambda = 1/m for an integer m >= 1, every jump weight (1)_{k,lambda}
/// is nonnegative and the law is a compound Poisson with jumps in {1..m}.
/// Asymptotic: any other lambda in (0, 1]; accepted only after the truncated
/// pmf was checked numerically for negative terms.
enum class Validity { strict, asymptotic };

std::string_view to_string(Validity v) noexcept;

class DegenParams {
 public:
  double alpha() const noexcept { return alpha_; }
  double theta() const noexcept { return theta_; }
  double lambda() const noexcept { return lambda_; }
  Validity validity() const noexcept { return validity_; }
  bool strict() const noexcept { return validity_ == Validity::strict; }
  /// m with lambda = 1/m under Strict validity, 0 otherwise.
  std::size_t reciprocal() const noexcept { return reciprocal_; }
  DegenOrder order() const { return DegenOrder(lambda_); }

 private:
  friend DegenParams validate(double alpha, double theta, double lambda);
  DegenParams(double alpha, double theta, double lambda, Validity v, std::size_t m)
      : alpha_(alpha), theta_(theta), lambda_(lambda), validity_(v), reciprocal_(m) {}

  double alpha_;
  double theta_;
  double lambda_;
  Validity validity_;
  std::size_t reciprocal_;
};

/// Throws Error(invalid_params) for alpha <= 0, theta <= 0 or lambda outside
/// (0, 1]; Error(negative_mass) if an Asymptotic pmf has a term below -1e-12;
/// Error(cap_exceeded) if an Asymptotic pmf cannot be truncated.
DegenParams validate(double alpha, double theta, double lambda);

/// The same law with alpha multiplied by `factor` (the time-t marginal of the
/// process). Revalidates.
DegenParams scale_alpha(const DegenParams& params, double factor);

/// If |1/lambda - round(1/lambda)| < 1e-9 returns round(1/lambda).
std::optional<std::size_t> reciprocal_integer(double lambda) noexcept;

inline constexpr double kDefaultTailTol = 1e-12;
inline constexpr double kNegativeMassTol = 1e-12;
inline constexpr std::size_t kMaxPmfSupport = 5000;
/// Quantities switch to log space at or past this k, or when the burst
/// rate reaches kLogRegimeRate.
inline constexpr std::size_t kLogRegimeK = 30;
inline constexpr double kLogRegimeRate = 30.0;

/// alpha (e_lambda(theta) - 1): the Poisson rate of bursts.
double burst_rate(const DegenParams& params);

double pmf(std::size_t k, const DegenParams& params);
double log_pmf(std::size_t k, const DegenParams& params);

/// Upper bound on P(X > cutoff) under Strict validity: the smaller of the
/// Poisson bound from X <= m * Poisson(burst_rate) and the Chernoff bound
/// inf_{z>1} G(z) z^{-(cutoff+1)}. Returns 1 for Asymptotic params.
double tail_bound(const DegenParams& params, std::size_t cutoff);

/// Truncated pmf over k = 0..cutoff.
class PmfTable {
 public:
  /// Reassembles a table from stored parts, checking the invariants.
  PmfTable(DegenParams params, std::vector<double> probs, double tail_mass, bool certified);

  const DegenParams& params() const noexcept { return params_; }
  std::span<const double> probs() const noexcept { return probs_; }
  std::span<const double> cumulative() const noexcept { return cdf_; }
  double tail_mass() const noexcept { return tail_mass_; }
  /// True when tail_mass is a proven upper bound (Strict params).
  bool certified() const noexcept { return certified_; }
  std::size_t cutoff() const noexcept { return probs_.size() - 1; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t k) const noexcept { return k < probs_.size() ? probs_[k] : 0.0; }

 private:
  DegenParams params_;
  std::vector<double> probs_;
  std::vector<double> cdf_;
  double tail_mass_;
  bool certified_;
};

/// Throws Error(cap_exceeded) if no cutoff up to kMaxPmfSupport certifies tail_tol.
PmfTable build_pmf_table(const DegenParams& params, double tail_tol = kDefaultTailTol);

double cdf(std::size_t k, const PmfTable& table) noexcept;
double cdf(std::size_t k, const DegenParams& params);

/// Least k with cdf(k) > u. Throws Error(domain) for u outside [0, 1) and
/// Error(tail_sliver) when u lies beyond the tabulated mass.
std::size_t quantile(double u, const PmfTable& table);
std::size_t quantile(double u, const DegenParams& params);

/// G(t) = exp(alpha (e_lambda(theta t) - e_lambda(theta))); requires 1 + lambda theta t > 0.
double pgf(double t, const DegenParams& params);

/// F(t) = G(e^t). Throws Error(overflow) when the result is not finite.
double mgf(double t, const DegenParams& params);

double mean(const DegenParams& params);
double variance(const DegenParams& params);

/// DB(alpha1, theta, lambda) * DB(alpha2, theta, lambda) = DB(alpha1 + alpha2, theta, lambda).
/// Throws Error(theta_mismatch) / Error(lambda_mismatch) when the laws differ
/// in theta or lambda by more than 1e-12: such sums are not degenerate Bell.
DegenParams convolve(const DegenParams& p1, const DegenParams& p2);

/// Discrete convolution of two tables over k = 0..cutoff_a + cutoff_b. Entries
/// past the shorter cutoff miss at most tail_a + tail_b of mass.
std::vector<double> convolve_tables(const PmfTable& a, const PmfTable& b);

/// Compound Poisson decomposition G(t) = exp(R (H(t) - 1)).
class JumpLaw {
 public:
  double burst_rate() const noexcept { return burst_rate_; }
  /// P(J = k) for k >= 1; zero outside the stored range.
  double prob(std::size_t k) const noexcept;
  /// probs()[i] = P(J = i + 1).
  std::span<const double> probs() const noexcept { return probs_; }
  std::span<const double> cumulative() const noexcept { return cdf_; }
  /// m for lambda = 1/m: jumps never exceed it.
  std::optional<std::size_t> support_bound() const noexcept { return support_bound_; }
  std::size_t max_jump() const noexcept { return probs_.size(); }

  /// H(t) = (e_lambda(theta t) - 1) / (e_lambda(theta) - 1), the jump pgf.
  double pgf(double t) const;

 private:
  friend JumpLaw decompose(const DegenParams& params);

  double burst_rate_ = 0.0;
  double theta_ = 0.0;
  double lambda_ = 1.0;
  std::vector<double> probs_;
  std::vector<double> cdf_;
  std::optional<std::size_t> support_bound_;
};

/// Throws Error(not_strict) for Asymptotic params.
JumpLaw decompose(const DegenParams& params);

}  // namespace bellproc
