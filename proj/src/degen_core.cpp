#include "bellproc/degen_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bellproc/error.hpp"
#include "bellproc/simd/kernels.hpp"

namespace bellproc {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Neumaier accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

// Running sum of signed terms given as logs, kept relative to the largest
// magnitude seen so far. Logs are carried in extended precision: they reach
// the thousands, where a double keeps only ~13 digits of the exponentiated value.
struct ScaledSum {
  long double scale = -std::numeric_limits<long double>::infinity();
  CompensatedSum acc;

  void add(int sign, long double log_abs) {
    if (sign == 0) return;
    if (log_abs > scale) {
      if (std::isfinite(scale)) {
        const double f = static_cast<double>(std::exp(scale - log_abs));
        acc.sum *= f;
        acc.comp *= f;
      }
      scale = log_abs;
    }
    acc.add(sign * static_cast<double>(std::exp(log_abs - scale)));
  }
  long double log_magnitude() const {
    const double v = acc.value();
    return v == 0.0 ? -std::numeric_limits<long double>::infinity()
                    : scale + std::log(static_cast<long double>(std::fabs(v)));
  }
};

}  // namespace

DegenOrder::DegenOrder(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0))
    throw Error(Errc::invalid_params,
                "lambda must lie in (0, 1], got " + num(lambda));
}

double lattice_factor(double x, double j_lambda) noexcept {
  const double d = x - j_lambda;
  if (std::fabs(d) <= 8.0 * kEps * std::max(std::fabs(x), std::fabs(j_lambda))) return 0.0;
  return d;
}

double falling_factorial_degenerate(double x, std::size_t n, double lambda) noexcept {
  double prod = 1.0;
  for (std::size_t j = 0; j < n; ++j) prod *= lattice_factor(x, static_cast<double>(j) * lambda);
  return prod;
}

double degenerate_exp(double x, double lambda, double t) {
  if (lambda == 0.0) throw Error(Errc::domain, "degenerate_exp: lambda must be nonzero");
  const double lt = lambda * t;
  const double base = 1.0 + lt;
  if (!(base > 0.0))
    throw Error(Errc::domain, "degenerate_exp: 1 + lambda*t must be positive");
  if (base - 1.0 == lt) return std::pow(base, x / lambda);
  return std::exp(x / lambda * std::log1p(lt));
}

double degenerate_expm1(double lambda, double t) {
  if (lambda == 0.0) throw Error(Errc::domain, "degenerate_expm1: lambda must be nonzero");
  if (!(1.0 + lambda * t > 0.0))
    throw Error(Errc::domain, "degenerate_expm1: 1 + lambda*t must be positive");
  return std::expm1(std::log1p(lambda * t) / lambda);
}

double StirlingTable::operator()(std::size_t n, std::size_t k) const {
  if (n > max_n_)
    throw Error(Errc::out_of_range, "StirlingTable: n=" + std::to_string(n) +
                                        " exceeds max_n=" + std::to_string(max_n_));
  return k > n ? 0.0 : entries_[offset(n) + k];
}

std::span<const double> StirlingTable::row(std::size_t n) const {
  if (n > max_n_)
    throw Error(Errc::out_of_range, "StirlingTable: row " + std::to_string(n) + " out of range");
  return {entries_.data() + offset(n), n + 1};
}

StirlingTable build_stirling_table(DegenOrder lambda, std::size_t max_n) {
  if (max_n > kMaxStirlingOrder)
    throw Error(Errc::cap_exceeded, "build_stirling_table: max_n=" + std::to_string(max_n) +
                                        " exceeds cap " + std::to_string(kMaxStirlingOrder));
  StirlingTable table;
  table.lambda_ = lambda.value();
  table.max_n_ = max_n;
  table.entries_.assign(StirlingTable::offset(max_n + 1), 0.0);
  table.entries_[0] = 1.0;
  for (std::size_t n = 0; n < max_n; ++n) {
    std::span<const double> prev(table.entries_.data() + StirlingTable::offset(n), n + 1);
    std::span<double> next(table.entries_.data() + StirlingTable::offset(n + 1), n + 2);
    simd::stirling_row_advance(prev, next, n, table.lambda_);
  }
  return table;
}

double bell_poly_degenerate(std::size_t n, double x, const StirlingTable& table) {
  const auto coeffs = table.row(n);
  std::vector<double> powers(n + 1);
  double p = 1.0;
  for (std::size_t k = 0; k <= n; ++k) {
    powers[k] = p;
    p *= x;
  }
  return simd::dot_compensated(coeffs, powers);
}

std::vector<double> bell_polys_degenerate(double x, const StirlingTable& table) {
  const std::size_t max_n = table.max_n();
  std::vector<double> powers(max_n + 1);
  double p = 1.0;
  for (auto& v : powers) {
    v = p;
    p *= x;
  }
  std::vector<double> out(max_n + 1);
  for (std::size_t n = 0; n <= max_n; ++n)
    out[n] = simd::dot_compensated(table.row(n), std::span<const double>(powers).first(n + 1));
  return out;
}

double bell_poly_dobinski(std::size_t n, double x, double lambda, double tol) {
  if (!(x > 0.0)) throw Error(Errc::domain, "bell_poly_dobinski: x must be positive");
  if (!(tol > 0.0)) throw Error(Errc::domain, "bell_poly_dobinski: tol must be positive");

  // Past this index every factor (k - i lambda) is positive and the term
  // ratio is strictly decreasing, so the geometric remainder bound holds.
  const double monotone_from =
      std::max(x, (n == 0 ? 0.0 : static_cast<double>(n - 1) * lambda) + 1.0);
  const double log_x = std::log(x);

  CompensatedSum sum;
  double prev_term = 0.0;
  for (std::size_t k = 0; k < kMaxDobinskiTerms; ++k) {
    const double kd = static_cast<double>(k);
    const double ff = falling_factorial_degenerate(kd, n, lambda);
    double term = 0.0;
    if (ff != 0.0) {
      const double log_term = std::log(std::fabs(ff)) + kd * log_x - std::lgamma(kd + 1.0) - x;
      term = std::copysign(std::exp(log_term), ff);
    }
    sum.add(term);
    if (kd > monotone_from && prev_term != 0.0 && term != 0.0) {
      const double r = term / prev_term;
      if (r < 0.5 && std::fabs(term) * r / (1.0 - r) <= tol * std::max(1.0, std::fabs(sum.value())))
        return sum.value();
    }
    prev_term = term;
  }
  throw Error(Errc::non_convergence,
              "bell_poly_dobinski: no convergence within " + std::to_string(kMaxDobinskiTerms) +
                  " terms");
}

double bell_number_degenerate(std::size_t n, const StirlingTable& table) {
  // phi_n(1) is the row sum.
  return simd::sum_compensated(table.row(n));
}

double SignedLog::value() const noexcept {
  return sign == 0 ? 0.0 : sign * static_cast<double>(std::exp(log_abs));
}

std::vector<SignedLog> bell_polys_dobinski_log(std::size_t max_n, double x, double lambda) {
  if (!(x > 0.0)) throw Error(Errc::domain, "bell_polys_dobinski_log: x must be positive");
  const std::size_t width = max_n + 1;
  std::vector<ScaledSum> sums(width);
  constexpr long double kNegInfL = -std::numeric_limits<long double>::infinity();
  std::vector<long double> last(width, kNegInfL);
  const long double log_x = std::log(static_cast<long double>(x));
  const double monotone_from =
      std::max(x, (max_n == 0 ? 0.0 : static_cast<double>(max_n - 1) * lambda) + 1.0);
  const long double log2 = std::log(2.0L);
  // Remainder must fall below 2^-56 of the running sum.
  const long double log_cut = -56.0L * log2;

  for (std::size_t j = 0; j < kMaxDobinskiTerms; ++j) {
    const double jd = static_cast<double>(j);
    const long double lw = j * log_x - std::lgamma(static_cast<long double>(j) + 1.0L);
    long double lf = 0.0L;
    int sign = 1;
    bool converged = jd > monotone_from;
    for (std::size_t n = 0; n < width; ++n) {
      if (sign != 0) {
        const long double lt = lw + lf;
        sums[n].add(sign, lt);
        if (converged) {
          const long double log_ratio = lt - last[n];
          const bool small = lt + log2 < sums[n].log_magnitude() + log_cut;
          if (!(log_ratio < -log2 && small)) converged = false;
        }
        last[n] = lt;
      } else {
        last[n] = kNegInfL;
      }
      if (sign != 0) {
        const double d = lattice_factor(jd, static_cast<double>(n) * lambda);
        if (d == 0.0) {
          sign = 0;
        } else {
          lf += std::log(static_cast<long double>(std::fabs(d)));
          if (d < 0.0) sign = -sign;
        }
      }
    }
    if (converged) {
      std::vector<SignedLog> out(width);
      for (std::size_t n = 0; n < width; ++n) {
        const double v = sums[n].acc.value();
        out[n].sign = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
        out[n].log_abs = out[n].sign == 0 ? kNegInfL : sums[n].log_magnitude() - x;
      }
      return out;
    }
  }
  throw Error(Errc::non_convergence, "bell_polys_dobinski_log: series did not converge");
}

namespace classical {

double stirling2(std::size_t n, std::size_t k) {
  if (n > kMaxOrder) throw Error(Errc::out_of_range, "classical::stirling2: n exceeds 25");
  if (k > n) return 0.0;
  std::vector<double> row{1.0};
  for (std::size_t m = 0; m < n; ++m) {
    std::vector<double> next(m + 2, 0.0);
    for (std::size_t j = 1; j <= m + 1; ++j)
      next[j] = row[j - 1] + (j <= m ? static_cast<double>(j) * row[j] : 0.0);
    row = std::move(next);
  }
  return row[k];
}

double bell_poly(std::size_t n, double x) {
  if (n > kMaxOrder) throw Error(Errc::out_of_range, "classical::bell_poly: n exceeds 25");
  double sum = 0.0;
  double p = 1.0;
  for (std::size_t k = 0; k <= n; ++k) {
    sum += stirling2(n, k) * p;
    p *= x;
  }
  return sum;
}

}  // namespace classical

}  // namespace bellproc
