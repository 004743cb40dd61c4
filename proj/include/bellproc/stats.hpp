#pragma once

// Goodness-of-fit machinery for the Monte Carlo checks.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bellproc::stats {

struct TestResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
  std::size_t bins = 0;
};

/// Pearson chi-square of observed counts against probabilities. Bins are
/// merged left to right until each expected count is at least `min_expected`;
/// the last bin absorbs every count and all mass beyond the tabulated range.
TestResult chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probs,
                          double min_expected = 5.0);

/// Two-sample chi-square homogeneity test on aligned count vectors, bins
/// merged until each sample's expected count is at least `min_expected`.
TestResult chi_square_two_sample(std::span<const std::uint64_t> a,
                                 std::span<const std::uint64_t> b, double min_expected = 5.0);

/// One-sample Kolmogorov–Smirnov test against Exp(rate), with Stephens'
/// small-sample correction of the asymptotic distribution.
TestResult ks_exponential(std::vector<double> samples, double rate);

/// Survival function of the Kolmogorov distribution.
double kolmogorov_sf(double x);

double chi_square_sf(double statistic, double dof);

/// Counts of each value in `values`, indexed by value.
std::vector<std::uint64_t> histogram(std::span<const std::size_t> values);

/// Streaming central moments up to order four.
class RunningMoments {
 public:
  void add(double x) noexcept;

  std::uint64_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  /// Unbiased sample variance.
  double variance() const noexcept;
  /// Biased fourth central moment.
  double central4() const noexcept;
  double mean_std_error() const noexcept;
  /// Large-sample standard error of the sample variance, sqrt((m4 - s^4) / n).
  double variance_std_error() const noexcept;

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double m3_ = 0.0;
  double m4_ = 0.0;
};

/// Pearson correlation of paired samples.
double correlation(std::span<const double> x, std::span<const double> y);

}  // namespace bellproc::stats
