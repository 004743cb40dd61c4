#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "bellproc/error.hpp"
#include "bellproc/simd/kernels.hpp"

using namespace bellproc;
namespace simd = bellproc::simd;

namespace {

bool avx2_usable() { return simd::avx2::compiled() && simd::detected_isa() == simd::Isa::avx2; }

std::vector<double> random_vec(std::size_t n, std::mt19937_64& g, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(g);
  return v;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

struct IsaGuard {
  simd::Isa saved = simd::active_isa();
  ~IsaGuard() { simd::set_active_isa(saved); }
};

}  // namespace

TEST_CASE("row advance matches the recurrence written out by hand") {
  const std::vector<double> prev{0.0, 1.0, 0.5};  // row 2 for lambda=0.5
  std::vector<double> next(4);
  simd::scalar::stirling_row_advance(prev.data(), next.data(), 2, 0.5);
  // next[k] = prev[k-1] + (k - 1) prev[k]
  CHECK(next[0] == 0.0);
  CHECK(next[1] == 0.0 + 0.0 * 1.0);
  CHECK(next[2] == 1.0 + 1.0 * 0.5);
  CHECK(next[3] == 0.5);
}

TEST_CASE("row advance snaps lattice coefficients to zero") {
  // k - n*lambda with n=10, lambda=0.1, k=1 is zero in exact arithmetic.
  std::vector<double> prev(11, 1.0);
  std::vector<double> next(12);
  simd::scalar::stirling_row_advance(prev.data(), next.data(), 10, 0.1);
  CHECK(next[1] == prev[0]);
}

TEST_CASE("avx2 row advance is bit-identical to scalar") {
  if (!avx2_usable()) return;
  std::mt19937_64 g(7);
  for (std::size_t n = 0; n < 70; ++n)
    for (double lambda : {1.0, 0.5, 0.25, 0.1, 0.3, 1e-4}) {
      const auto prev = random_vec(n + 1, g);
      std::vector<double> a(n + 2), b(n + 2);
      simd::scalar::stirling_row_advance(prev.data(), a.data(), n, lambda);
      simd::avx2::stirling_row_advance(prev.data(), b.data(), n, lambda);
      CHECK_MESSAGE(bit_equal(a, b), "n=" << n << " lambda=" << lambda);
    }
}

TEST_CASE("compensated reductions are accurate to about one rounding") {
  std::mt19937_64 g(11);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 64u, 1001u}) {
    auto a = random_vec(n, g, -1e3, 1e3);
    auto b = random_vec(n, g, -1e3, 1e3);
    long double dot = 0.0L, sum = 0.0L, mag_dot = 0.0L, mag_sum = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      dot += static_cast<long double>(a[i]) * b[i];
      sum += a[i];
      mag_dot += std::fabs(static_cast<long double>(a[i]) * b[i]);
      mag_sum += std::fabs(a[i]);
    }
    const double tol_dot = 4e-16 * std::max(1.0L, std::fabs(dot)) + 1e-30 * static_cast<double>(mag_dot);
    const double tol_sum = 4e-16 * std::max(1.0L, std::fabs(sum)) + 1e-30 * static_cast<double>(mag_sum);
    CHECK(std::fabs(simd::scalar::dot_compensated(a.data(), b.data(), n) - dot) <= tol_dot);
    CHECK(std::fabs(simd::scalar::sum_compensated(a.data(), n) - sum) <= tol_sum);
    if (avx2_usable()) {
      CHECK(std::fabs(simd::avx2::dot_compensated(a.data(), b.data(), n) - dot) <= tol_dot);
      CHECK(std::fabs(simd::avx2::sum_compensated(a.data(), n) - sum) <= tol_sum);
    }
  }
}

TEST_CASE("compensation survives catastrophic cancellation") {
  const std::vector<double> a{1e16, 1.0, -1e16, 1.0};
  CHECK(simd::scalar::sum_compensated(a.data(), a.size()) == 2.0);
  if (avx2_usable()) CHECK(simd::avx2::sum_compensated(a.data(), a.size()) == 2.0);
}

TEST_CASE("truncated convolution agrees with the naive double loop") {
  std::mt19937_64 g(5);
  for (std::size_t na : {1u, 4u, 9u, 33u})
    for (std::size_t nb : {1u, 5u, 8u, 40u})
      for (std::size_t nout : {1u, 7u, 50u, 80u}) {
        const auto a = random_vec(na, g, 0.0, 1.0);
        const auto b = random_vec(nb, g, 0.0, 1.0);
        std::vector<double> s(nout), v(nout);
        simd::scalar::convolve_truncated(a.data(), na, b.data(), nb, s.data(), nout);
        for (std::size_t k = 0; k < nout; ++k) {
          long double ref = 0.0L;
          for (std::size_t i = 0; i <= k; ++i)
            if (i < na && k - i < nb) ref += static_cast<long double>(a[i]) * b[k - i];
          CHECK(std::fabs(s[k] - ref) <= 1e-14 * std::max(1.0L, ref));
        }
        if (avx2_usable()) {
          simd::avx2::convolve_truncated(a.data(), na, b.data(), nb, v.data(), nout);
          for (std::size_t k = 0; k < nout; ++k) CHECK(std::fabs(s[k] - v[k]) <= 1e-14 * std::max(1.0, s[k]));
        }
      }
}

TEST_CASE("dispatch follows the active isa") {
  IsaGuard guard;
  simd::set_active_isa(simd::Isa::scalar);
  CHECK(simd::active_isa() == simd::Isa::scalar);
  std::mt19937_64 g(3);
  const auto prev = random_vec(20, g);
  std::vector<double> a(21), b(21);
  simd::stirling_row_advance(prev, a, 19, 0.25);
  simd::scalar::stirling_row_advance(prev.data(), b.data(), 19, 0.25);
  CHECK(bit_equal(a, b));

  if (avx2_usable()) {
    simd::set_active_isa(simd::Isa::avx2);
    CHECK(simd::active_isa() == simd::Isa::avx2);
    CHECK(simd::to_string(simd::active_isa()) == "avx2");
  } else {
    CHECK_THROWS_AS(simd::set_active_isa(simd::Isa::avx2), Error);
  }
}

TEST_CASE("dispatchers reject mismatched spans") {
  std::vector<double> prev(5), next(5);
  CHECK_THROWS_AS(simd::stirling_row_advance(prev, next, 4, 0.5), Error);
  std::vector<double> a(3), b(4);
  CHECK_THROWS_AS(simd::dot_compensated(a, b), Error);
}
