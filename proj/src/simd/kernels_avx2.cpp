#include <cmath>
#include <cstddef>
#include <limits>

#include "bellproc/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define BELLPROC_X86 1
#include <immintrin.h>
#else
#define BELLPROC_X86 0
#endif

namespace bellproc::simd::avx2 {

#if BELLPROC_X86

#define BELLPROC_AVX2 __attribute__((target("avx2,fma")))

namespace {

constexpr double kSnapUlps = 8.0 * std::numeric_limits<double>::epsilon();

BELLPROC_AVX2 inline void two_sum(__m256d a, __m256d b, __m256d& s, __m256d& e) {
  s = _mm256_add_pd(a, b);
  const __m256d bb = _mm256_sub_pd(s, a);
  e = _mm256_add_pd(_mm256_sub_pd(a, _mm256_sub_pd(s, bb)), _mm256_sub_pd(b, bb));
}

inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

// Folds four (p, s) lane pairs into one scalar pair.
BELLPROC_AVX2 inline void fold_lanes(__m256d pv, __m256d sv, double& p, double& s) {
  alignas(32) double pl[4];
  alignas(32) double sl[4];
  _mm256_store_pd(pl, pv);
  _mm256_store_pd(sl, sv);
  p = 0.0;
  s = 0.0;
  for (int l = 0; l < 4; ++l) {
    double q;
    two_sum(p, pl[l], p, q);
    s += q + sl[l];
  }
}

}  // namespace

bool compiled() noexcept { return true; }

BELLPROC_AVX2 void stirling_row_advance(const double* prev, double* next, std::size_t n,
                                        double lambda) {
  const double nl = static_cast<double>(n) * lambda;
  const double thr = kSnapUlps * nl;
  auto coeff = [&](std::size_t k) {
    double c = static_cast<double>(k) - nl;
    if (std::fabs(c) <= thr) c = 0.0;
    return c;
  };
  next[0] = coeff(0) * prev[0];

  const __m256d vnl = _mm256_set1_pd(nl);
  const __m256d vthr = _mm256_set1_pd(thr);
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d step = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
  std::size_t k = 1;
  for (; k + 3 <= n; k += 4) {
    const __m256d kv = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(k)), step);
    __m256d c = _mm256_sub_pd(kv, vnl);
    const __m256d small = _mm256_cmp_pd(_mm256_andnot_pd(sign_mask, c), vthr, _CMP_LE_OQ);
    c = _mm256_andnot_pd(small, c);
    const __m256d lower = _mm256_loadu_pd(prev + k - 1);
    const __m256d same = _mm256_loadu_pd(prev + k);
    _mm256_storeu_pd(next + k, _mm256_add_pd(lower, _mm256_mul_pd(c, same)));
  }
  for (; k <= n; ++k) next[k] = prev[k - 1] + coeff(k) * prev[k];
  next[n + 1] = prev[n];
}

BELLPROC_AVX2 double dot_compensated(const double* a, const double* b, std::size_t len) {
  __m256d pv = _mm256_setzero_pd();
  __m256d sv = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d av = _mm256_loadu_pd(a + i);
    const __m256d bv = _mm256_loadu_pd(b + i);
    const __m256d h = _mm256_mul_pd(av, bv);
    const __m256d r = _mm256_fmsub_pd(av, bv, h);
    __m256d q;
    two_sum(pv, h, pv, q);
    sv = _mm256_add_pd(sv, _mm256_add_pd(q, r));
  }
  double p;
  double s;
  fold_lanes(pv, sv, p, s);
  for (; i < len; ++i) {
    const double h = a[i] * b[i];
    const double r = std::fma(a[i], b[i], -h);
    double q;
    two_sum(p, h, p, q);
    s += q + r;
  }
  return p + s;
}

BELLPROC_AVX2 double sum_compensated(const double* a, std::size_t len) {
  __m256d pv = _mm256_setzero_pd();
  __m256d sv = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    __m256d q;
    two_sum(pv, _mm256_loadu_pd(a + i), pv, q);
    sv = _mm256_add_pd(sv, q);
  }
  double p;
  double s;
  fold_lanes(pv, sv, p, s);
  for (; i < len; ++i) {
    double q;
    two_sum(p, a[i], p, q);
    s += q;
  }
  return p + s;
}

BELLPROC_AVX2 void convolve_truncated(const double* a, std::size_t na, const double* b,
                                      std::size_t nb, double* out, std::size_t nout) {
  for (std::size_t k = 0; k < nout; ++k) {
    if (na == 0 || nb == 0 || k + 1 > na + nb - 1) {
      out[k] = 0.0;
      continue;
    }
    const std::size_t lo = k + 1 > nb ? k + 1 - nb : 0;
    const std::size_t hi = k < na - 1 ? k : na - 1;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = lo;
    // b is walked backwards: lanes i..i+3 pair with b[k-i]..b[k-i-3].
    for (; i + 3 <= hi; i += 4) {
      const __m256d av = _mm256_loadu_pd(a + i);
      const __m256d bv = _mm256_permute4x64_pd(_mm256_loadu_pd(b + (k - i - 3)), 0x1B);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(av, bv));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i <= hi; ++i) total += a[i] * b[k - i];
    out[k] = total;
  }
}

#else

bool compiled() noexcept { return false; }

void stirling_row_advance(const double* prev, double* next, std::size_t n, double lambda) {
  scalar::stirling_row_advance(prev, next, n, lambda);
}
double dot_compensated(const double* a, const double* b, std::size_t len) {
  return scalar::dot_compensated(a, b, len);
}
double sum_compensated(const double* a, std::size_t len) {
  return scalar::sum_compensated(a, len);
}
void convolve_truncated(const double* a, std::size_t na, const double* b, std::size_t nb,
                        double* out, std::size_t nout) {
  scalar::convolve_truncated(a, na, b, nb, out, nout);
}

#endif

}  // namespace bellproc::simd::avx2
