#pragma once

#include <cstdint>
#include <random>

#include "qdesign/quantum_core.hpp"

namespace qdesign {

using Rng = std::mt19937_64;

/// SplitMix64 step; used to derive independent per-job seeds from a base
/// seed so results do not depend on thread scheduling.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt);

/// Standard complex Gaussian (Ginibre) matrix.
ComplexMatrix ginibre(int rows, int cols, Rng& rng);

/// Haar-uniform pure state.
PureState random_pure_state(int dim, Rng& rng);

/// Haar unitary via QR of a Ginibre matrix with phase-fixed R diagonal.
ComplexMatrix random_unitary(int dim, Rng& rng);

/// Density operator B B^dag / Tr[...], B square Ginibre.
DensityOperator random_density(int dim, Rng& rng);

/// Isometry m x d (m >= d) with A^dag A = 1; rows encode a rank-one POVM.
ComplexMatrix random_isometry(int outcomes, int dim, Rng& rng);

/// Rank-one POVM from a random isometry.
Povm random_rank_one_povm(int dim, int outcomes, Rng& rng);

/// Generic POVM: Wishart-normalized PSD pieces Pi_y = T^{-1/2} G_y T^{-1/2}.
Povm random_povm(int dim, int outcomes, Rng& rng);

/// Random ensemble with Dirichlet(1) weights over Ginibre states.
Ensemble random_ensemble(int dim, int n_states, Rng& rng);

} // namespace qdesign
