#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "ucq/operator_core.h"

namespace ucq {

using Rng = std::mt19937_64;

/// Deterministic generator for a named sub-stream of a 64-bit master seed.
/// Distinct (name, index) pairs give statistically independent streams.
Rng substream(std::uint64_t seed, std::string_view name, std::uint64_t index = 0);

/// Matrix with i.i.d. standard complex Gaussian entries.
Matrix ginibre(std::size_t rows, std::size_t cols, Rng& rng);

/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
Matrix random_unitary(std::size_t dim, Rng& rng);

/// Random density operator G G† / Tr(G G†) with G of size dim x rank.
DensityOperator random_density(std::size_t dim, Rng& rng, std::size_t rank = 0);

DensityOperator random_pure_state(std::size_t dim, Rng& rng);

/// Random positive semidefinite operator with trace drawn around dim.
HermitianOperator random_psd(std::size_t dim, Rng& rng, std::size_t rank = 0);

HermitianOperator random_hermitian(std::size_t dim, Rng& rng);

}  // namespace ucq
