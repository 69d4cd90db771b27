#pragma once

// The XXZ Hamiltonian and its relatives as dense matrices over a sector basis.
//   H = -(1/2Δ) A + W + λ V,  A = hop adjacency, W = cluster count, V = Σ ω_i
// Open boundaries; a region with a cut gives the decoupled H^{K} + H^{K^c}.

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "xxzloc/config_space.hpp"
#include "xxzloc/disorder.hpp"
#include "xxzloc/numerics.hpp"

namespace xxzloc {

struct ModelParams {
  double delta = 2.0;
  double lambda = 1.0;

  /// Δ > 1 and λ >= 0, both finite; throws DomainError otherwise.
  void validate() const;
  /// Spectral gap 1 - 1/Δ.
  double gap() const { return 1.0 - 1.0 / delta; }
  /// Off-diagonal hopping amplitude -1/(2Δ).
  double hopping() const { return -0.5 / delta; }
};

/// q in ½N₀, stored as 2q.
class HalfInteger {
 public:
  constexpr HalfInteger() = default;
  static constexpr HalfInteger from_twice(int twice) { return HalfInteger(twice); }
  /// Throws DomainError unless v >= 0 and 2v is an integer.
  static HalfInteger from_double(double v);

  constexpr int twice() const { return twice_; }
  constexpr int ceil() const { return (twice_ + 1) / 2; }
  constexpr double value() const { return 0.5 * twice_; }
  std::string to_string() const;

  friend constexpr auto operator<=>(HalfInteger, HalfInteger) = default;

 private:
  constexpr explicit HalfInteger(int twice) : twice_(twice) {}
  int twice_ = 0;
};

/// Real interval with optional -inf lower end; endpoints open unless flagged.
struct EnergyInterval {
  double lo = -INFINITY;
  double hi = INFINITY;
  bool lo_closed = false;
  bool hi_closed = false;

  static EnergyInterval whole() { return {}; }
  static EnergyInterval empty_set() { return {0.0, 0.0, false, false}; }
  bool contains(double e) const;
  bool empty() const { return lo > hi || (lo == hi && !(lo_closed && hi_closed)); }
  std::string to_string() const;
};

/// The windows of label q: I_{<=q} = (-inf, (q+¼)g) and I_q = [g, (q+¼)g).
struct EnergyWindow {
  HalfInteger q;
  double delta = 2.0;

  double gap() const { return 1.0 - 1.0 / delta; }
  double upper() const { return (q.value() + 0.25) * gap(); }
  EnergyInterval at_most() const { return {-INFINITY, upper(), false, false}; }
  EnergyInterval exactly() const { return {gap(), upper(), true, false}; }
};

using BasisPtr = std::shared_ptr<const SectorBasis>;
BasisPtr make_basis(const Region& region, int n_particles);

class SectorOperator {
 public:
  SectorOperator(BasisPtr basis, Matrix m);

  const SectorBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  const Matrix& matrix() const { return m_; }
  Index size() const { return m_.rows(); }
  double operator()(Index i, Index j) const { return m_(i, j); }
  double entry(const Configuration& x, const Configuration& y) const;

  struct Triplet {
    Index row = 0;
    Index col = 0;
    double value = 0.0;
  };
  /// Nonzero entries in row-major order.
  std::vector<Triplet> triplets() const;
  /// {"basis": {...}, "entries": [[i,j,v],...]}
  nlohmann::ordered_json to_json() const;

  SectorOperator operator+(const SectorOperator& o) const;
  SectorOperator operator-(const SectorOperator& o) const;
  SectorOperator operator*(double c) const;

 private:
  BasisPtr basis_;
  Matrix m_;
};

SectorOperator assemble_hamiltonian(const BasisPtr& basis, const ModelParams& params,
                                    const DisorderSample& omega);
SectorOperator assemble_hamiltonian(const Region& region, int n, const ModelParams& params,
                                    const DisorderSample& omega);

struct HamiltonianParts {
  SectorOperator adjacency;  // 0/1 hop adjacency
  SectorOperator cluster;    // diag W_x
  SectorOperator potential;  // diag Σ_{i∈x} ω_i
};
/// -(1/2Δ) adjacency + cluster + λ potential reproduces assemble_hamiltonian.
HamiltonianParts assemble_parts(const BasisPtr& basis, const DisorderSample& omega);

/// Γ^K = H^Λ - H^{K,K^c} on the basis of a cut region. ω-independent.
SectorOperator boundary_operator(const BasisPtr& cut_basis, const ModelParams& params);

namespace proj {
struct PPlus { std::vector<int> S; };    // no particle in S
struct PMinus { std::vector<int> S; };   // some particle in S
struct NumberAt { int site = 0; };
struct RankOne { Configuration u; };
struct QLeq { int k = 1; };              // 1 <= W <= k
struct QHatLeq { int k = 1; };           // Q_{<=k} + ((k+1)/k) Q_0
struct QExact { int m = 0; };            // W == m
}  // namespace proj

using ProjectionKind = std::variant<proj::PPlus, proj::PMinus, proj::NumberAt, proj::RankOne,
                                    proj::QLeq, proj::QHatLeq, proj::QExact>;

/// Diagonal of the projection in basis order.
Vector projection_diagonal(const SectorBasis& basis, const ProjectionKind& kind);
SectorOperator projection(const BasisPtr& basis, const ProjectionKind& kind);

/// Ĥ_q: H + g Q_0 for q in {0, ½}, else H + ⌈q⌉ g Q̂_{<=⌈q⌉}.
SectorOperator lifted_hamiltonian(const SectorOperator& H, HalfInteger q, const ModelParams& params);
/// The coefficient and operator added by the lift, so Ĥ_q = H + c·Q.
struct Lift {
  double coefficient = 0.0;
  SectorOperator op;
};
Lift lift_term(const BasisPtr& basis, HalfInteger q, const ModelParams& params);

EigenDecomposition eig_sym(const SectorOperator& A);

}  // namespace xxzloc
