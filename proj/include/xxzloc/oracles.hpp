#pragma once

// Brute-force references that share no code with the sector assembly: the
// full 2^|Λ| spin space built from Kronecker-embedded Pauli matrices, and
// integer-partition arithmetic for the exponential-sum constants.

#include <cstdint>

#include <Eigen/SparseCore>

#include "xxzloc/config_space.hpp"
#include "xxzloc/disorder.hpp"
#include "xxzloc/numerics.hpp"
#include "xxzloc/operators.hpp"

namespace xxzloc {

using SparseC = Eigen::SparseMatrix<cplx>;

constexpr int kMaxTensorSites = 14;

/// An operator on the full spin space of a region. Basis states are ordered by
/// particle number, then by the integer whose bit p marks a particle at the
/// p-th site of the region; within a sector that is colex order.
struct TensorOperator {
  Region region;
  SparseC m;

  int n_sites() const { return region.size(); }
  Index dim() const { return m.rows(); }
};

enum class Pauli { x, y, z, plus, minus, number, identity };

/// Single-site operator at `site`, embedded as 1 ⊗ … ⊗ σ ⊗ … ⊗ 1.
TensorOperator embed_pauli(const Region& region, Pauli which, int site);

/// Literal sum of embedded hopping, Σ𝒩_i, -Σ𝒩_i𝒩_{i+1} and λΣω_i𝒩_i terms
/// over the edges of the region graph. Refused above kMaxTensorSites.
TensorOperator tensor_hamiltonian(const Region& region, const ModelParams& params,
                                  const DisorderSample& omega);
TensorOperator total_number(const Region& region);

/// First index of the N-particle block in the tensor basis.
Index sector_offset(int n_sites, int n);
/// Dense N-particle block; throws DomainError if its imaginary part is nonzero.
Matrix sector_block(const TensorOperator& T, int n);

SparseC commutator(const SparseC& a, const SparseC& b);
double max_abs(const SparseC& a);

/// Number of integer partitions of n (pentagonal recurrence, exact in 64 bits).
std::uint64_t partition_count(int n);

/// (1 - e^{-α})^{-1} (Π_n (1 - e^{-αn})^{-1})²; throws DomainError for α <= 0.
double c_alpha(double alpha);

}  // namespace xxzloc
