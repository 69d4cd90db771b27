#include "xxzloc/operators.hpp"

#include <cmath>

#include <fmt/format.h>

#include "xxzloc/errors.hpp"
#include "xxzloc/json_io.hpp"

namespace xxzloc {

void ModelParams::validate() const {
  if (!std::isfinite(delta) || !(delta > 1.0)) {
    throw DomainError(fmt::format("delta must be > 1 (got {})", delta));
  }
  if (!std::isfinite(lambda) || !(lambda >= 0.0)) {
    throw DomainError(fmt::format("lambda must be >= 0 (got {})", lambda));
  }
}

HalfInteger HalfInteger::from_double(double v) {
  const double t = 2.0 * v;
  if (!(v >= 0.0) || !std::isfinite(v) || t != std::floor(t) || t > 1e6) {
    throw DomainError(fmt::format("q must lie in ½N₀ (got {})", v));
  }
  return HalfInteger(static_cast<int>(t));
}

std::string HalfInteger::to_string() const {
  return twice_ % 2 == 0 ? std::to_string(twice_ / 2) : fmt::format("{}.5", twice_ / 2);
}

bool EnergyInterval::contains(double e) const {
  const bool above = lo_closed ? e >= lo : e > lo;
  const bool below = hi_closed ? e <= hi : e < hi;
  return above && below;
}

std::string EnergyInterval::to_string() const {
  return fmt::format("{}{}, {}{}", lo_closed ? '[' : '(', lo, hi, hi_closed ? ']' : ')');
}

BasisPtr make_basis(const Region& region, int n_particles) {
  return std::make_shared<const SectorBasis>(region, n_particles);
}

// ---------------------------------------------------------------------------

SectorOperator::SectorOperator(BasisPtr basis, Matrix m) : basis_(std::move(basis)), m_(std::move(m)) {
  const auto n = static_cast<Index>(basis_->size());
  if (m_.rows() != n || m_.cols() != n) {
    throw DomainError(fmt::format("operator is {}x{} but the basis has {} states", m_.rows(),
                                  m_.cols(), n));
  }
}

double SectorOperator::entry(const Configuration& x, const Configuration& y) const {
  return m_(static_cast<Index>(basis_->rank(x)), static_cast<Index>(basis_->rank(y)));
}

std::vector<SectorOperator::Triplet> SectorOperator::triplets() const {
  std::vector<Triplet> out;
  for (Index i = 0; i < m_.rows(); ++i) {
    for (Index j = 0; j < m_.cols(); ++j) {
      if (m_(i, j) != 0.0) out.push_back({i, j, m_(i, j)});
    }
  }
  return out;
}

nlohmann::ordered_json SectorOperator::to_json() const {
  json j;
  j["basis"] = {{"region", basis_->region()},
                {"n_particles", basis_->n_particles()},
                {"size", basis_->size()},
                {"order", "colex"}};
  json entries = json::array();
  for (const auto& t : triplets()) entries.push_back(json::array({t.row, t.col, t.value}));
  j["entries"] = std::move(entries);
  return j;
}

namespace {
void require_same_basis(const SectorOperator& a, const SectorOperator& b) {
  if (a.basis_ptr() != b.basis_ptr() && !(a.basis().region() == b.basis().region() &&
                                          a.basis().n_particles() == b.basis().n_particles())) {
    throw DomainError("operators live on different sectors");
  }
}
}  // namespace

SectorOperator SectorOperator::operator+(const SectorOperator& o) const {
  require_same_basis(*this, o);
  return SectorOperator(basis_, m_ + o.m_);
}

SectorOperator SectorOperator::operator-(const SectorOperator& o) const {
  require_same_basis(*this, o);
  return SectorOperator(basis_, m_ - o.m_);
}

SectorOperator SectorOperator::operator*(double c) const { return SectorOperator(basis_, m_ * c); }

// ---------------------------------------------------------------------------

namespace {

// Σ ω_i over x, left to right in site order.
double potential_of(const Configuration& x, const DisorderSample& omega) {
  double acc = 0.0;
  for (int s : x.sites()) acc += omega.at(s);
  return acc;
}

void require_field(const Region& region, const DisorderSample& omega) {
  for (int s : region.sites()) {
    if (!omega.defines(s)) throw DomainError(fmt::format("disorder missing at site {}", s));
  }
}

void fill_hops(const SectorBasis& basis, Matrix& m, double amplitude) {
  const Region& region = basis.region();
  for (std::size_t c = 0; c < basis.size(); ++c) {
    for (const Hop& h : hop_neighbors(basis[c], region)) {
      m(static_cast<Index>(basis.rank(h.target)), static_cast<Index>(c)) = amplitude;
    }
  }
}

}  // namespace

SectorOperator assemble_hamiltonian(const BasisPtr& basis, const ModelParams& params,
                                    const DisorderSample& omega) {
  params.validate();
  const Region& region = basis->region();
  require_field(region, omega);
  const auto n = static_cast<Index>(basis->size());
  Matrix m = Matrix::Zero(n, n);
  fill_hops(*basis, m, params.hopping());
  for (Index i = 0; i < n; ++i) {
    const Configuration& x = (*basis)[static_cast<std::size_t>(i)];
    m(i, i) = static_cast<double>(cluster_count(x, region)) + params.lambda * potential_of(x, omega);
  }
  return SectorOperator(basis, std::move(m));
}

SectorOperator assemble_hamiltonian(const Region& region, int n, const ModelParams& params,
                                    const DisorderSample& omega) {
  return assemble_hamiltonian(make_basis(region, n), params, omega);
}

HamiltonianParts assemble_parts(const BasisPtr& basis, const DisorderSample& omega) {
  const Region& region = basis->region();
  require_field(region, omega);
  const auto n = static_cast<Index>(basis->size());
  Matrix adj = Matrix::Zero(n, n);
  fill_hops(*basis, adj, 1.0);
  Matrix w = Matrix::Zero(n, n);
  Matrix v = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const Configuration& x = (*basis)[static_cast<std::size_t>(i)];
    w(i, i) = cluster_count(x, region);
    v(i, i) = potential_of(x, omega);
  }
  return {SectorOperator(basis, std::move(adj)), SectorOperator(basis, std::move(w)),
          SectorOperator(basis, std::move(v))};
}

SectorOperator boundary_operator(const BasisPtr& cut_basis, const ModelParams& params) {
  const Region& cut_region = cut_basis->region();
  const auto cut = cut_region.cut_sites();
  if (!cut_region.has_cut() || cut.empty() || static_cast<int>(cut.size()) == cut_region.size()) {
    throw DomainError("boundary operator needs a nonempty proper cut");
  }
  const auto full = make_basis(cut_region.without_cut(), cut_basis->n_particles());
  // λ = 0 and a zero field: the potential is identical on both graphs and cancels.
  std::vector<double> zeros(static_cast<std::size_t>(cut_region.size()), 0.0);
  const DisorderSample none({cut_region.sites().begin(), cut_region.sites().end()}, zeros);
  const ModelParams bare{params.delta, 0.0};
  const Matrix diff =
      assemble_hamiltonian(full, bare, none).matrix() - assemble_hamiltonian(cut_basis, bare, none).matrix();
  return SectorOperator(cut_basis, diff);
}

// ---------------------------------------------------------------------------

Vector projection_diagonal(const SectorBasis& basis, const ProjectionKind& kind) {
  const Region& region = basis.region();
  const auto n = static_cast<Index>(basis.size());
  Vector d = Vector::Zero(n);

  if (const auto* k = std::get_if<proj::RankOne>(&kind)) {
    d(static_cast<Index>(basis.rank(k->u))) = 1.0;
    return d;
  }
  auto check_k = [](int k) {
    if (k < 1) throw DomainError("cluster bound k must be >= 1");
  };
  if (const auto* k = std::get_if<proj::QLeq>(&kind)) check_k(k->k);
  if (const auto* k = std::get_if<proj::QHatLeq>(&kind)) check_k(k->k);

  for (Index i = 0; i < n; ++i) {
    const Configuration& x = basis[static_cast<std::size_t>(i)];
    d(i) = std::visit(
        [&](const auto& p) -> double {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, proj::PPlus>) {
            return x.intersects(p.S) ? 0.0 : 1.0;
          } else if constexpr (std::is_same_v<P, proj::PMinus>) {
            return x.intersects(p.S) ? 1.0 : 0.0;
          } else if constexpr (std::is_same_v<P, proj::NumberAt>) {
            return x.contains(p.site) ? 1.0 : 0.0;
          } else if constexpr (std::is_same_v<P, proj::QLeq>) {
            const int w = cluster_count(x, region);
            return (w >= 1 && w <= p.k) ? 1.0 : 0.0;
          } else if constexpr (std::is_same_v<P, proj::QHatLeq>) {
            const int w = cluster_count(x, region);
            if (w == 0) return static_cast<double>(p.k + 1) / p.k;
            return w <= p.k ? 1.0 : 0.0;
          } else if constexpr (std::is_same_v<P, proj::QExact>) {
            return cluster_count(x, region) == p.m ? 1.0 : 0.0;
          } else {
            return 0.0;
          }
        },
        kind);
  }
  return d;
}

SectorOperator projection(const BasisPtr& basis, const ProjectionKind& kind) {
  return SectorOperator(basis, projection_diagonal(*basis, kind).asDiagonal().toDenseMatrix());
}

Lift lift_term(const BasisPtr& basis, HalfInteger q, const ModelParams& params) {
  const double g = params.gap();
  if (q.twice() <= 1) return {g, projection(basis, proj::QExact{0})};
  const int k = q.ceil();
  return {k * g, projection(basis, proj::QHatLeq{k})};
}

SectorOperator lifted_hamiltonian(const SectorOperator& H, HalfInteger q, const ModelParams& params) {
  const Lift lift = lift_term(H.basis_ptr(), q, params);
  return H + lift.op * lift.coefficient;
}

EigenDecomposition eig_sym(const SectorOperator& A) { return eig_sym(A.matrix()); }

}  // namespace xxzloc
