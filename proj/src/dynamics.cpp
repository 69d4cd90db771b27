#include "xxzloc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "xxzloc/errors.hpp"
#include "xxzloc/estimators.hpp"
#include "xxzloc/oracles.hpp"

namespace xxzloc {

CMatrix evolution_operator(const EigenDecomposition& d, double t) {
  const Index n = d.values.size();
  if (t == 0.0) return CMatrix::Identity(n, n);
  return matrix_function_complex(d, [t](double e) { return std::exp(cplx(0.0, -t * e)); });
}

CVector evolve_state(const EigenDecomposition& d, double t, const CVector& psi) {
  if (t == 0.0) return psi;
  const CMatrix V = d.vectors.cast<cplx>();
  CVector c = V.transpose() * psi;
  for (Index k = 0; k < c.size(); ++k) c(k) *= std::exp(cplx(0.0, -t * d.values(k)));
  return V * c;
}

CMatrix heisenberg(const EigenDecomposition& d, double t, const CMatrix& O) {
  const CMatrix U = evolution_operator(d, t);
  return U.adjoint() * O * U;
}

std::vector<Index> rows_hitting(const SectorBasis& b, std::span<const int> S) {
  std::vector<Index> out;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i].intersects(S)) out.push_back(static_cast<Index>(i));
  }
  return out;
}

std::vector<Index> rows_avoiding(const SectorBasis& b, std::span<const int> T) {
  std::vector<Index> out;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!b[i].intersects(T)) out.push_back(static_cast<Index>(i));
  }
  return out;
}

double corner_norm(const CMatrix& M, const SectorBasis& b, std::span<const int> S,
                   std::span<const int> T) {
  const auto rows = rows_hitting(b, S);
  const auto cols = rows_avoiding(b, T);
  if (rows.empty() || cols.empty()) return 0.0;
  CMatrix sub(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      sub(static_cast<Index>(i), static_cast<Index>(j)) = M(rows[i], cols[j]);
    }
  }
  return operator_norm(sub);
}

// ---------------------------------------------------------------------------

namespace {

// A nonempty set of consecutive sites inside K₁ (the cut, or all of Λ).
void require_connected_in_k1(const Region& region, std::vector<int> A, const char* name) {
  if (A.empty()) throw DomainError(fmt::format("{} must be nonempty", name));
  std::sort(A.begin(), A.end());
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (!region.contains(A[i])) throw DomainError(fmt::format("{} leaves the region", name));
    if (region.has_cut() && !region.in_cut(A[i])) throw DomainError(fmt::format("{} is not inside K1", name));
    if (i > 0 && !region.adjacent(A[i - 1], A[i])) {
      throw DomainError(fmt::format("{} is not connected in K1", name));
    }
  }
}

}  // namespace

double lieb_robinson_bound(double delta, Distance r, double t) {
  if (!r.is_finite()) return 0.0;
  const auto rv = static_cast<double>(r.value());
  if (rv == 0.0) return 1.0;
  if (t == 0.0) return 0.0;
  return std::exp(rv * std::log(std::abs(t) / delta) - std::lgamma(rv + 1.0));
}

LRReport lieb_robinson_check(const LRConfig& cfg) {
  cfg.params.validate();
  const Region& region = cfg.region;
  require_connected_in_k1(region, cfg.A, "A");
  std::vector<int> B(cfg.B);
  std::sort(B.begin(), B.end());
  for (int a : cfg.A) {
    if (!std::binary_search(B.begin(), B.end(), a)) throw DomainError("A must be a subset of B");
  }
  for (int b : B) {
    if (!region.contains(b)) throw DomainError("B must lie inside the region");
  }
  if (B.size() <= cfg.A.size()) throw DomainError("A must be a proper subset of B");

  const Region plain = region.without_cut();
  Distance r = Distance::infinite();
  for (int site : region.sites()) {
    if (std::binary_search(B.begin(), B.end(), site)) continue;
    for (int a : cfg.A) r = std::min(r, plain.distance(a, site));
  }

  LRReport rep;
  rep.r = r;
  rep.all_ok = true;
  const auto omega = sample_field(region, cfg.law, cfg.seed);
  std::vector<std::pair<BasisPtr, EigenDecomposition>> sectors;
  for (int n : cfg.sectors) {
    const auto basis = make_basis(region, n);
    sectors.emplace_back(basis, eig_sym(assemble_hamiltonian(basis, cfg.params, omega)));
  }
  for (double t : cfg.t_grid) {
    LRRow row;
    row.t = t;
    for (const auto& [basis, d] : sectors) {
      // e^{itH} = evolution_operator(d, -t).
      row.measured = std::max(row.measured, corner_norm(evolution_operator(d, -t), *basis, cfg.A, B));
    }
    row.bound = lieb_robinson_bound(cfg.params.delta, r, t);
    row.vacuous = row.bound >= 1.0;
    row.ok = row.measured <= row.bound * (1.0 + 1e-8);
    rep.all_ok = rep.all_ok && row.ok;
    rep.rows.push_back(row);
  }
  return rep;
}

// ---------------------------------------------------------------------------

cplx filter_value(double xi, double a, double x) {
  if (a == 0.0 && x == 0.0) return 0.0;
  return cplx(-std::expm1(-xi * x * x), 0.0) / cplx(x, -a);
}

CMatrix filter_apply(const EigenDecomposition& d, const FilterSpec& spec) {
  if (!(spec.xi > 0.0)) throw DomainError("filter width must be > 0");
  return matrix_function_complex(d, [&](double e) { return filter_value(spec.xi, spec.a, e - spec.E); });
}

LocalityReport filter_locality_check(const FilterLocalityConfig& cfg) {
  cfg.params.validate();
  const Region& region = cfg.region;
  require_connected_in_k1(region, cfg.S, "S");
  std::vector<int> S(cfg.S);
  std::sort(S.begin(), S.end());

  const auto basis = make_basis(region, cfg.n_particles);
  const auto omega = sample_field(region, cfg.law, cfg.seed);
  const auto d = eig_sym(assemble_hamiltonian(basis, cfg.params, omega));

  LocalityReport rep;
  std::vector<DecayPoint> pts;
  for (int ell : cfg.ell_grid) {
    if (ell < 0) throw DomainError("ell must be >= 0");
    std::vector<int> T;
    for (int site : region.sites()) {
      const int gap = std::max(S.front() - site, site - S.back());
      if (gap <= ell) T.push_back(site);
    }
    LocalityRow row;
    row.ell = ell;
    row.t = cfg.params.delta * cfg.params.delta * ell / 50.0;
    row.envelope = std::exp(-0.5 * ell);
    // ξ = 0 makes the filter vanish identically.
    if (row.t > 0.0) {
      row.measured = corner_norm(filter_apply(d, {row.t, cfg.a, cfg.E}), *basis, S, T);
    }
    if (ell >= 1) pts.push_back({Distance::finite(ell), row.measured});
    rep.rows.push_back(row);
  }
  rep.monotone = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    if (rep.rows[i].ell >= 1 && rep.rows[i - 1].ell >= 1 &&
        rep.rows[i].measured > rep.rows[i - 1].measured * (1.0 + 1e-12)) {
      rep.monotone = false;
    }
  }
  try {
    const DecayFit f = decay_fit(pts, DistanceKind::dH);
    rep.rate = -f.slope;
    rep.r_squared = f.r_squared;
  } catch (const NumericalRefusal& e) {
    rep.fit_error = e.what();
  }
  return rep;
}

// ---------------------------------------------------------------------------

cplx smoothed_filter(double t, double a, double eps, double x) {
  if (a == 0.0 && x == 0.0) return 0.0;
  const double num = std::expm1(-eps * x * x) - std::expm1(-t * x * x);
  return cplx(num, 0.0) / cplx(x, -a);
}

namespace {

cplx trapezoid_transform(double t, double a, double eps, double X, double h, double k) {
  const auto n = static_cast<long>(std::ceil(X / h));
  cplx acc = 0.0;
  for (long j = -n; j <= n; ++j) {
    const double x = static_cast<double>(j) * h;
    const double w = (j == -n || j == n) ? 0.5 : 1.0;
    acc += w * smoothed_filter(t, a, eps, x) * std::exp(cplx(0.0, -k * x));
  }
  return acc * h / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

FourierReport fourier_bound_check(double t, double a, double eps, const std::vector<double>& freqs) {
  if (!(eps > 0.0 && eps < t)) throw DomainError("need 0 < eps < t");
  if (freqs.empty()) throw DomainError("empty frequency grid");
  FourierReport rep;
  rep.t = t;
  rep.a = a;
  rep.eps = eps;
  // Gaussian tails past X weigh below e^{-35}.
  rep.half_width = std::sqrt(35.0 / eps);
  const double kmax = std::max(std::abs(*std::max_element(freqs.begin(), freqs.end())),
                               std::abs(*std::min_element(freqs.begin(), freqs.end())));
  // Aliasing: the transform decays like e^{-k²/4t} and the pole at x = ia
  // limits the strip of analyticity to |Im x| < |a|.
  double h = 2.0 * std::numbers::pi / (kmax + std::sqrt(4.0 * t * 40.0));
  if (a != 0.0) h = std::min(h, 2.0 * std::numbers::pi * std::abs(a) / 40.0);
  rep.step = h;
  const double X = rep.half_width;
  const double tail = 2.0 * std::exp(-eps * X * X) / (2.0 * eps * X * X) / std::sqrt(2.0 * std::numbers::pi);

  rep.all_ok = true;
  for (double k : freqs) {
    FourierRow row;
    row.freq = k;
    const cplx coarse = trapezoid_transform(t, a, eps, X, h, k);
    const cplx fine = trapezoid_transform(t, a, eps, X, 0.5 * h, k);
    row.measured = std::abs(fine);
    row.error = std::abs(fine - coarse) + tail;
    row.bound = 5.0 * std::exp(-k * k / (4.0 * t));
    if (row.error > 0.1 * row.bound) {
      throw NumericalRefusal(fmt::format(
          "fourier quadrature error {:.3e} exceeds 10% of the bound {:.3e} at freq {}; refine the grid",
          row.error, row.bound, k));
    }
    row.ok = row.measured <= row.bound + row.error;
    rep.all_ok = rep.all_ok && row.ok;
    rep.rows.push_back(row);
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

// Exact for matrices with at most one nonzero per row and column.
double monomial_norm(const SparseC& m) {
  std::vector<int> row_count(static_cast<std::size_t>(m.rows()), 0);
  std::vector<int> col_count(static_cast<std::size_t>(m.cols()), 0);
  for (Index c = 0; c < m.outerSize(); ++c) {
    for (SparseC::InnerIterator it(m, c); it; ++it) {
      if (it.value() == cplx(0.0)) continue;
      if (++row_count[static_cast<std::size_t>(it.row())] > 1 ||
          ++col_count[static_cast<std::size_t>(it.col())] > 1) {
        if (m.rows() > 2048) throw NumericalRefusal("dense norm of a large non-monomial matrix refused");
        return operator_norm(CMatrix(m));
      }
    }
  }
  return max_abs(m);
}

SparseC diagonal_conjugate(const Eigen::VectorXcd& phase, const SparseC& O) {
  SparseC out = O;
  for (Index c = 0; c < out.outerSize(); ++c) {
    for (SparseC::InnerIterator it(out, c); it; ++it) {
      it.valueRef() = phase(it.row()) * it.value() * std::conj(phase(it.col()));
    }
  }
  return out;
}

SparseC diagonal_of(const Eigen::VectorXcd& v) {
  SparseC d(v.size(), v.size());
  d.reserve(Eigen::VectorXi::Constant(v.size(), 1));
  for (Index i = 0; i < v.size(); ++i) d.insert(i, i) = v(i);
  return d;
}

}  // namespace

CounterexampleReport diagonal_chain_counterexample(int L) {
  if (L < 4 || L % 4 != 0) throw DomainError(fmt::format("L must lie in 4N (got {})", L));
  if (L + 1 > kMaxTensorSites) throw DomainError("L too large for the full tensor space");
  const Region region = Region::interval(0, L);
  CounterexampleReport rep;
  rep.L = L;
  rep.string_time = std::numbers::pi / 4.0;

  SparseC S = embed_pauli(region, Pauli::z, 1).m;
  for (int n = 2; n <= L; ++n) S += embed_pauli(region, Pauli::z, n).m;
  const SparseC z0 = embed_pauli(region, Pauli::z, 0).m;
  const SparseC x0 = embed_pauli(region, Pauli::x, 0).m;
  const SparseC y0 = embed_pauli(region, Pauli::y, 0).m;
  SparseC H = S * z0;
  H.prune(cplx(0.0));

  // (i) H is diagonal in the canonical basis, so every f(H) is.
  const Index dim = H.rows();
  Eigen::VectorXd h = Eigen::VectorXd::Zero(dim);
  for (Index c = 0; c < H.outerSize(); ++c) {
    for (SparseC::InnerIterator it(H, c); it; ++it) {
      if (it.row() == it.col()) {
        h(it.row()) = it.value().real();
      } else {
        rep.offdiag_max = std::max(rep.offdiag_max, std::abs(it.value()));
      }
    }
  }
  if (dim <= 1024) {
    // Independent route: a dense eigendecomposition and its spectral projections.
    const auto d = eig_sym(Matrix(CMatrix(H).real()));
    const CMatrix U = evolution_operator(d, 0.7);
    for (Index i = 0; i < dim; ++i) {
      for (Index j = 0; j < dim; ++j) {
        if (i != j) rep.offdiag_max = std::max(rep.offdiag_max, std::abs(U(i, j)));
      }
    }
    const EigencorrelatorTable table(d, EnergyInterval::whole());
    for (Index i = 0; i < dim; ++i) {
      for (Index j = 0; j < dim; ++j) {
        if (i != j) rep.eigencorrelator_offdiag = std::max(rep.eigencorrelator_offdiag, table(i, j));
      }
    }
  }
  rep.diagonal_ok = rep.offdiag_max == 0.0 && rep.eigencorrelator_offdiag == 0.0;

  auto tau_x0 = [&](double t) {
    Eigen::VectorXcd phase(dim);
    for (Index i = 0; i < dim; ++i) phase(i) = std::exp(cplx(0.0, t * h(i)));
    return diagonal_conjugate(phase, x0);
  };
  Eigen::VectorXd s_diag = Eigen::VectorXd::Zero(dim);
  for (Index c = 0; c < S.outerSize(); ++c) {
    for (SparseC::InnerIterator it(S, c); it; ++it) s_diag(it.row()) = it.value().real();
  }

  // (ii) τ_t(σ₀ˣ) = cos(2St) σ₀ˣ - sin(2St) σ₀ʸ.
  for (double t : {0.1, 0.3, rep.string_time, 1.0, std::numbers::pi / 2.0, 2.0}) {
    Eigen::VectorXcd c(dim), s(dim);
    for (Index i = 0; i < dim; ++i) {
      c(i) = std::cos(2.0 * s_diag(i) * t);
      s(i) = std::sin(2.0 * s_diag(i) * t);
    }
    const SparseC rhs = SparseC(diagonal_of(c) * x0) - SparseC(diagonal_of(s) * y0);
    rep.rotation_error = std::max(rep.rotation_error, max_abs(SparseC(tau_x0(t) - rhs)));
  }
  rep.rotation_ok = rep.rotation_error <= 1e-10;

  // (iii) the string Π σₙᶻ σ₀ˣ.
  SparseC string = embed_pauli(region, Pauli::z, 1).m;
  for (int n = 2; n <= L; ++n) string = string * embed_pauli(region, Pauli::z, n).m;
  string = string * x0;
  const SparseC tau = tau_x0(rep.string_time);
  rep.string_error = max_abs(SparseC(tau - string));
  rep.string_error_half_pi = max_abs(SparseC(tau_x0(std::numbers::pi / 2.0) - string));
  rep.string_ok = rep.string_error <= 1e-10;

  // (iv) σ_Lˣ anticommutes with the string's σ_Lᶻ factor.
  rep.witness = monomial_norm(commutator(tau, embed_pauli(region, Pauli::x, L).m));
  rep.witness_ok = std::abs(rep.witness - 2.0) <= 1e-10;
  return rep;
}

}  // namespace xxzloc
