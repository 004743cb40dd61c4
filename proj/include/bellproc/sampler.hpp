#pragma once

// Two exact samplers for DB_lambda(alpha, theta):
//  * inversion of a certified PmfTable,
//  * the compound Poisson construction X = J_1 + ... + J_M, M ~ Poisson(R).
// Each serves as the other's oracle.

#include <cstddef>
#include <cstdint>

#include "bellproc/dist.hpp"
#include "bellproc/rng.hpp"

namespace bellproc {

/// Redraws when the uniform falls in the uncertified tail sliver.
/// Throws Error(tail_sliver) if the table is not certified below 1e-12.
std::size_t sample_inverse_cdf(const PmfTable& table, RngStream& rng);

/// Inversion for mean < 10, Hörmann's PTRS transformed rejection otherwise.
std::uint64_t sample_poisson(double mean, RngStream& rng);

std::size_t sample_jump(const JumpLaw& law, RngStream& rng);

std::size_t sample_compound(const JumpLaw& law, RngStream& rng);

}  // namespace bellproc
