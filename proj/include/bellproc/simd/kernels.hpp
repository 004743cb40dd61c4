#pragma once

// Data-parallel inner loops used by the special-function and distribution
// code. Every kernel has a scalar reference implementation; wider variants
// are selected at runtime from what the CPU reports. Elementwise kernels are
// bit-identical across variants, reductions agree to rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace bellproc::simd {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa) noexcept;

/// Best instruction set supported by the running CPU and compiled in.
Isa detected_isa() noexcept;

/// Instruction set currently used by the dispatching entry points.
Isa active_isa() noexcept;

/// Override the dispatch choice. Throws bellproc::Error if `isa` is not
/// available on this machine.
void set_active_isa(Isa isa);

/// One step of the degenerate Stirling recurrence
///   next[k] = prev[k-1] + (k - n*lambda) * prev[k],   k = 0..n+1,
/// where prev holds row n (n+1 entries) and next receives row n+1.
/// Coefficients within a few ulps of zero are snapped to zero so that
/// reciprocal-integer lambda produces exact zeros.
void stirling_row_advance(std::span<const double> prev, std::span<double> next,
                          std::size_t n, double lambda);

/// Compensated dot product (twice-working-precision accumulation).
double dot_compensated(std::span<const double> a, std::span<const double> b);

/// Compensated sum.
double sum_compensated(std::span<const double> a);

/// out[k] = sum_{i=0..k} a[i] * b[k-i] for k < out.size(); entries of a or b
/// past their size are treated as zero.
void convolve_truncated(std::span<const double> a, std::span<const double> b,
                        std::span<double> out);

// Direct access to each variant, for equivalence testing.
namespace scalar {
void stirling_row_advance(const double* prev, double* next, std::size_t n, double lambda);
double dot_compensated(const double* a, const double* b, std::size_t len);
double sum_compensated(const double* a, std::size_t len);
void convolve_truncated(const double* a, std::size_t na, const double* b, std::size_t nb,
                        double* out, std::size_t nout);
}  // namespace scalar

namespace avx2 {
bool compiled() noexcept;
void stirling_row_advance(const double* prev, double* next, std::size_t n, double lambda);
double dot_compensated(const double* a, const double* b, std::size_t len);
double sum_compensated(const double* a, std::size_t len);
void convolve_truncated(const double* a, std::size_t na, const double* b, std::size_t nb,
                        double* out, std::size_t nout);
}  // namespace avx2

}  // namespace bellproc::simd
