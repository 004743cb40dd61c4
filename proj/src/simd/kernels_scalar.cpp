#include <cmath>
#include <cstddef>
#include <limits>

#include "bellproc/simd/kernels.hpp"

namespace bellproc::simd::scalar {

namespace {

constexpr double kSnapUlps = 8.0 * std::numeric_limits<double>::epsilon();

inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

}  // namespace

void stirling_row_advance(const double* prev, double* next, std::size_t n, double lambda) {
  const double nl = static_cast<double>(n) * lambda;
  const double thr = kSnapUlps * nl;
  auto coeff = [&](std::size_t k) {
    double c = static_cast<double>(k) - nl;
    if (std::fabs(c) <= thr) c = 0.0;
    return c;
  };
  next[0] = coeff(0) * prev[0];
  for (std::size_t k = 1; k <= n; ++k) next[k] = prev[k - 1] + coeff(k) * prev[k];
  next[n + 1] = prev[n];
}

double dot_compensated(const double* a, const double* b, std::size_t len) {
  double p = 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double h = a[i] * b[i];
    const double r = std::fma(a[i], b[i], -h);
    double q;
    two_sum(p, h, p, q);
    s += q + r;
  }
  return p + s;
}

double sum_compensated(const double* a, std::size_t len) {
  double p = 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    double q;
    two_sum(p, a[i], p, q);
    s += q;
  }
  return p + s;
}

void convolve_truncated(const double* a, std::size_t na, const double* b, std::size_t nb,
                        double* out, std::size_t nout) {
  for (std::size_t k = 0; k < nout; ++k) {
    double acc = 0.0;
    if (na != 0 && nb != 0) {
      const std::size_t lo = k + 1 > nb ? k + 1 - nb : 0;
      const std::size_t hi = k < na - 1 ? k : na - 1;
      for (std::size_t i = lo; i <= hi && hi >= lo; ++i) acc += a[i] * b[k - i];
    }
    out[k] = acc;
  }
}

}  // namespace bellproc::simd::scalar
