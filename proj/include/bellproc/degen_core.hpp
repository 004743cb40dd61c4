#pragma once

// Degenerate exponentials, generalized falling factorials, degenerate
// Stirling numbers of the second kind and degenerate Bell polynomials.

#include <cstddef>
#include <span>
#include <vector>

namespace bellproc {

/// The degeneracy parameter lambda, restricted to (0, 1].
class DegenOrder {
 public:
  /// Throws Error(Errc::invalid_params) unless 0 < lambda <= 1.
  explicit DegenOrder(double lambda);

  double value() const noexcept { return lambda_; }

 private:
  double lambda_;
};

/// x - j*lambda, returning exactly zero when the difference is within a few
/// ulps of cancellation (so that lattice points of lambda = 1/m vanish).
double lattice_factor(double x, double j_lambda) noexcept;

/// (x)_{n,lambda} = x (x - lambda) ... (x - (n-1) lambda); 1 for n = 0.
/// Defined for every real lambda, including 0.
double falling_factorial_degenerate(double x, std::size_t n, double lambda) noexcept;

/// e_lambda^x(t) = (1 + lambda t)^(x / lambda) on the principal branch.
/// Throws Error(Errc::domain) when lambda == 0 or 1 + lambda t <= 0.
double degenerate_exp(double x, double lambda, double t);

/// e_lambda(t) - 1 without cancellation for small lambda t.
double degenerate_expm1(double lambda, double t);

inline constexpr std::size_t kMaxStirlingOrder = 200;

/// Lower-triangular table of S_{2,lambda}(n, k), 0 <= k <= n <= max_n.
/// Immutable after construction.
class StirlingTable {
 public:
  double lambda() const noexcept { return lambda_; }
  std::size_t max_n() const noexcept { return max_n_; }

  /// S_{2,lambda}(n, k); zero for k > n. Throws Error(out_of_range) if n > max_n.
  double operator()(std::size_t n, std::size_t k) const;

  /// Row n as a span of n+1 entries.
  std::span<const double> row(std::size_t n) const;

 private:
  friend StirlingTable build_stirling_table(DegenOrder lambda, std::size_t max_n);

  static std::size_t offset(std::size_t n) noexcept { return n * (n + 1) / 2; }

  double lambda_ = 1.0;
  std::size_t max_n_ = 0;
  std::vector<double> entries_;
};

/// Builds the triangle by S(n+1,k) = S(n,k-1) + (k - n lambda) S(n,k).
/// Throws Error(cap_exceeded) if max_n > kMaxStirlingOrder.
StirlingTable build_stirling_table(DegenOrder lambda, std::size_t max_n);

/// phi_{n,lambda}(x) = sum_k S_{2,lambda}(n,k) x^k with compensated summation.
double bell_poly_degenerate(std::size_t n, double x, const StirlingTable& table);

/// All of phi_{0..table.max_n(),lambda}(x).
std::vector<double> bell_polys_degenerate(double x, const StirlingTable& table);

/// phi_{n,lambda}(x) = e^{-x} sum_{k>=0} (k)_{n,lambda} x^k / k!.
///
/// Terms are summed until the geometric bound on the remainder (successive
/// term ratio r < 1/2, remainder <= t r / (1 - r)) falls below
/// tol * max(1, |partial sum|). Throws Error(non_convergence) after
/// kMaxDobinskiTerms terms and Error(domain) for x <= 0 or tol <= 0.
double bell_poly_dobinski(std::size_t n, double x, double lambda, double tol = 1e-12);

inline constexpr std::size_t kMaxDobinskiTerms = 10000;

/// phi_{n,lambda}(1).
double bell_number_degenerate(std::size_t n, const StirlingTable& table);

/// Signed logarithm: value = sign * exp(log_abs); sign == 0 means value 0.
struct SignedLog {
  long double log_abs = 0.0L;
  int sign = 0;

  double value() const noexcept;
};

/// Log-domain Dobinski evaluation of phi_{n,lambda}(x) for n = 0..max_n in one
/// pass over the series index (cost O(max_n * terms)). Used where the linear
/// quantities overflow.
std::vector<SignedLog> bell_polys_dobinski_log(std::size_t max_n, double x, double lambda);

namespace classical {

inline constexpr std::size_t kMaxOrder = 25;

/// Stirling number of the second kind S_2(n, k), by S(n+1,k) = S(n,k-1) + k S(n,k).
double stirling2(std::size_t n, std::size_t k);

/// Touchard (Bell) polynomial phi_n(x) = sum_k S_2(n,k) x^k.
double bell_poly(std::size_t n, double x);

}  // namespace classical

}  // namespace bellproc
