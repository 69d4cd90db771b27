#include "xxzloc/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>
#include <fmt/format.h>

#include "xxzloc/errors.hpp"

namespace xxzloc {

namespace {

SparseC two_by_two(Pauli which) {
  const cplx i(0.0, 1.0);
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  // Local basis (up, down); a particle is a down spin.
  switch (which) {
    case Pauli::x: m << 0, 1, 1, 0; break;
    case Pauli::y: m << 0, -i, i, 0; break;
    case Pauli::z: m << 1, 0, 0, -1; break;
    case Pauli::plus: m << 0, 1, 0, 0; break;
    case Pauli::minus: m << 0, 0, 1, 0; break;
    case Pauli::number: m << 0, 0, 0, 1; break;
    case Pauli::identity: m << 1, 0, 0, 1; break;
  }
  return m.sparseView();
}

SparseC identity(Index n) {
  SparseC id(n, n);
  id.setIdentity();
  return id;
}

// Raw Kronecker index has position 0 as the most significant factor.
SparseC kron_embed(int n_sites, int position, const SparseC& local) {
  const Index left = Index{1} << position;
  const Index right = Index{1} << (n_sites - position - 1);
  SparseC tmp = Eigen::kroneckerProduct(identity(left), local).eval();
  return Eigen::kroneckerProduct(tmp, identity(right)).eval();
}

// new_index[raw] for the (particle number, mask) ordering.
std::vector<Index> ordering(int n_sites) {
  const Index dim = Index{1} << n_sites;
  std::vector<std::uint32_t> masks(static_cast<std::size_t>(dim));
  for (Index m = 0; m < dim; ++m) masks[static_cast<std::size_t>(m)] = static_cast<std::uint32_t>(m);
  std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  std::vector<Index> out(static_cast<std::size_t>(dim));
  for (Index k = 0; k < dim; ++k) {
    const std::uint32_t mask = masks[static_cast<std::size_t>(k)];
    Index raw = 0;
    for (int p = 0; p < n_sites; ++p) {
      if (mask >> p & 1U) raw |= Index{1} << (n_sites - 1 - p);
    }
    out[static_cast<std::size_t>(raw)] = k;
  }
  return out;
}

SparseC reorder(const SparseC& raw, int n_sites) {
  const auto idx = ordering(n_sites);
  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(static_cast<std::size_t>(raw.nonZeros()));
  for (Index c = 0; c < raw.outerSize(); ++c) {
    for (SparseC::InnerIterator it(raw, c); it; ++it) {
      trips.emplace_back(idx[static_cast<std::size_t>(it.row())], idx[static_cast<std::size_t>(it.col())],
                         it.value());
    }
  }
  SparseC out(raw.rows(), raw.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

void require_size(const Region& region) {
  if (region.size() > kMaxTensorSites) {
    throw DomainError(fmt::format("tensor space refused: {} sites exceeds {}", region.size(),
                                  kMaxTensorSites));
  }
}

int position_of(const Region& region, int site) {
  const int p = region.index_of(site);
  if (p < 0) throw DomainError(fmt::format("site {} is outside the region", site));
  return p;
}

}  // namespace

TensorOperator embed_pauli(const Region& region, Pauli which, int site) {
  require_size(region);
  const int n = region.size();
  return {region, reorder(kron_embed(n, position_of(region, site), two_by_two(which)), n)};
}

TensorOperator tensor_hamiltonian(const Region& region, const ModelParams& params,
                                  const DisorderSample& omega) {
  params.validate();
  require_size(region);
  const int n = region.size();
  const Index dim = Index{1} << n;
  SparseC h(dim, dim);
  auto local = [&](Pauli w, int p) { return kron_embed(n, p, two_by_two(w)); };
  const auto sites = region.sites();
  for (int p = 0; p < n; ++p) {
    const double w = omega.at(sites[static_cast<std::size_t>(p)]);
    h += local(Pauli::number, p) * cplx(1.0 + params.lambda * w);
  }
  for (int p = 0; p + 1 < n; ++p) {
    if (!region.adjacent(sites[static_cast<std::size_t>(p)], sites[static_cast<std::size_t>(p + 1)])) continue;
    const SparseC hop = SparseC(local(Pauli::plus, p) * local(Pauli::minus, p + 1)) +
                        SparseC(local(Pauli::minus, p) * local(Pauli::plus, p + 1));
    h += hop * cplx(params.hopping());
    h -= SparseC(local(Pauli::number, p) * local(Pauli::number, p + 1));
  }
  h.prune(cplx(0.0));
  return {region, reorder(h, n)};
}

TensorOperator total_number(const Region& region) {
  require_size(region);
  const int n = region.size();
  const Index dim = Index{1} << n;
  SparseC acc(dim, dim);
  for (int p = 0; p < n; ++p) acc += kron_embed(n, p, two_by_two(Pauli::number));
  return {region, reorder(acc, n)};
}

Index sector_offset(int n_sites, int n) {
  Index off = 0;
  for (int j = 0; j < n; ++j) off += static_cast<Index>(binomial(n_sites, j));
  return off;
}

Matrix sector_block(const TensorOperator& T, int n) {
  const int sites = T.n_sites();
  if (n < 0 || n > sites) throw DomainError("particle number outside the region");
  const Index off = sector_offset(sites, n);
  const auto len = static_cast<Index>(binomial(sites, n));
  const CMatrix block = CMatrix(T.m).block(off, off, len, len);
  if (block.imag().cwiseAbs().maxCoeff() != 0.0) throw DomainError("sector block is not real");
  return block.real();
}

SparseC commutator(const SparseC& a, const SparseC& b) {
  SparseC c = SparseC(a * b) - SparseC(b * a);
  c.prune(cplx(0.0));
  return c;
}

double max_abs(const SparseC& a) {
  double m = 0.0;
  for (Index c = 0; c < a.outerSize(); ++c) {
    for (SparseC::InnerIterator it(a, c); it; ++it) m = std::max(m, std::abs(it.value()));
  }
  return m;
}

std::uint64_t partition_count(int n) {
  if (n < 0) throw DomainError("partition_count needs n >= 0");
  std::vector<std::uint64_t> p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = 1;
  // Euler: p(m) = Σ_{k>=1} (-1)^{k+1} [p(m - k(3k-1)/2) + p(m - k(3k+1)/2)].
  for (int m = 1; m <= n; ++m) {
    unsigned __int128 plus = 0, minus = 0;
    for (int k = 1;; ++k) {
      const int g1 = k * (3 * k - 1) / 2;
      if (g1 > m) break;
      const int g2 = k * (3 * k + 1) / 2;
      unsigned __int128 term = p[static_cast<std::size_t>(m - g1)];
      if (g2 <= m) term += p[static_cast<std::size_t>(m - g2)];
      (k % 2 ? plus : minus) += term;
    }
    const unsigned __int128 v = plus - minus;
    if (v > std::numeric_limits<std::uint64_t>::max()) {
      throw std::overflow_error(fmt::format("partition_count({}) exceeds 64 bits", m));
    }
    p[static_cast<std::size_t>(m)] = static_cast<std::uint64_t>(v);
  }
  return p[static_cast<std::size_t>(n)];
}

double c_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("c_alpha needs alpha > 0");
  // log Π (1 - e^{-αn})^{-1} = -Σ log1p(-e^{-αn}); stop once e^{-αn} < 1e-17.
  double log_prod = 0.0;
  for (int n = 1;; ++n) {
    const double q = std::exp(-alpha * n);
    if (q < 1e-17) break;
    log_prod -= std::log1p(-q);
  }
  return std::exp(2.0 * log_prod - std::log1p(-std::exp(-alpha)));
}

}  // namespace xxzloc
