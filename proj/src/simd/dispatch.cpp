#include <atomic>
#include <cstddef>
#include <string>

#include "bellproc/error.hpp"
#include "bellproc/simd/kernels.hpp"

namespace bellproc::simd {

namespace {

Isa probe() noexcept {
#if defined(__x86_64__) || defined(_M_X64)
  if (avx2::compiled() && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return Isa::avx2;
#endif
  return Isa::scalar;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{probe()};
  return isa;
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(Errc::out_of_range, what);
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

Isa detected_isa() noexcept {
  static const Isa isa = probe();
  return isa;
}

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (isa == Isa::avx2 && detected_isa() != Isa::avx2)
    throw Error(Errc::domain, "avx2 kernels are not available on this CPU");
  active().store(isa, std::memory_order_relaxed);
}

void stirling_row_advance(std::span<const double> prev, std::span<double> next, std::size_t n,
                          double lambda) {
  require(prev.size() >= n + 1 && next.size() >= n + 2, "stirling_row_advance: short row");
  if (active_isa() == Isa::avx2)
    avx2::stirling_row_advance(prev.data(), next.data(), n, lambda);
  else
    scalar::stirling_row_advance(prev.data(), next.data(), n, lambda);
}

double dot_compensated(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "dot_compensated: length mismatch");
  if (active_isa() == Isa::avx2) return avx2::dot_compensated(a.data(), b.data(), a.size());
  return scalar::dot_compensated(a.data(), b.data(), a.size());
}

double sum_compensated(std::span<const double> a) {
  if (active_isa() == Isa::avx2) return avx2::sum_compensated(a.data(), a.size());
  return scalar::sum_compensated(a.data(), a.size());
}

void convolve_truncated(std::span<const double> a, std::span<const double> b,
                        std::span<double> out) {
  if (active_isa() == Isa::avx2)
    avx2::convolve_truncated(a.data(), a.size(), b.data(), b.size(), out.data(), out.size());
  else
    scalar::convolve_truncated(a.data(), a.size(), b.data(), b.size(), out.data(), out.size());
}

}  // namespace bellproc::simd
