#include <doctest.h>

#include <cmath>
#include <numbers>

#include "xxzloc/dynamics.hpp"
#include "xxzloc/errors.hpp"
#include "xxzloc/operators.hpp"

using namespace xxzloc;

namespace {

EigenDecomposition decomposition(const Region& r, int n, std::uint64_t seed = 1) {
  return eig_sym(assemble_hamiltonian(r, n, {2.0, 1.0}, sample_field(r, {}, seed)));
}

}  // namespace

TEST_CASE("evolution basics") {
  const Region r = Region::interval(0, 6);
  const auto d = decomposition(r, 2);
  const Index n = d.values.size();
  CHECK(evolution_operator(d, 0.0) == CMatrix::Identity(n, n));
  const CMatrix H = d.vectors * d.values.asDiagonal() * d.vectors.transpose();
  CVector psi = CVector::Zero(n);
  psi(0) = 1.0;
  const double e0 = (psi.adjoint() * H * psi)(0).real();
  for (double t : {0.5, 3.0, 10.0}) {
    const CVector pt = evolve_state(d, t, psi);
    CHECK(pt.norm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK((pt.adjoint() * H * pt)(0).real() == doctest::Approx(e0).epsilon(1e-9));
    CHECK((heisenberg(d, t, H) - H).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("Lieb-Robinson bound values") {
  CHECK(lieb_robinson_bound(2.0, Distance::finite(3), 1.0) == doctest::Approx(1.0 / 48));
  CHECK(lieb_robinson_bound(2.0, Distance::infinite(), 5.0) == 0.0);
  CHECK(lieb_robinson_bound(2.0, Distance::finite(1), 0.0) == 0.0);
}

TEST_CASE("Lieb-Robinson check") {
  LRConfig cfg;
  cfg.region = Region::interval(0, 11).with_cut(std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
  cfg.params = {2.0, 1.0};
  cfg.A = {4};
  cfg.B = {2, 3, 4, 5, 6};
  cfg.t_grid = {0.0, 1.0, 2.0, 5.0};
  const auto rep = lieb_robinson_check(cfg);
  CHECK(rep.r == Distance::finite(3));
  CHECK(rep.all_ok);
  CHECK(rep.rows[0].measured == 0.0);
  CHECK(rep.rows.back().vacuous);
  cfg.A = {10};
  CHECK_THROWS_AS(lieb_robinson_check(cfg), DomainError);
  cfg.A = {2, 4};
  CHECK_THROWS_AS(lieb_robinson_check(cfg), DomainError);
}

TEST_CASE("filter function") {
  CHECK(filter_value(1.0, 0.0, 0.0) == cplx(0, 0));
  const double xi = 2.0, a = 0.3, x = 0.7;
  CHECK(std::abs(filter_value(xi, a, x) - (1.0 - std::exp(-xi * x * x)) / cplx(x, -a)) < 1e-15);
  CHECK(std::abs(filter_value(1e3, 0.0, 1e-9)) < 1e-5);

  const Region r = Region::interval(0, 5);
  const auto d = decomposition(r, 2);
  const Index n = d.values.size();
  const FilterSpec spec{3.0, 0.3, d.values(2)};
  const CMatrix F = filter_apply(d, spec);
  const CMatrix H = (d.vectors * d.values.asDiagonal() * d.vectors.transpose()).cast<cplx>();
  CHECK((F * H - H * F).cwiseAbs().maxCoeff() < 1e-9);
  double fmax = 0;
  for (Index k = 0; k < n; ++k) fmax = std::max(fmax, std::abs(filter_value(spec.xi, spec.a, d.values(k) - spec.E)));
  CHECK(operator_norm(F) <= fmax * (1 + 1e-10));
  // With a = 0 the eigenvalue at E is annihilated.
  const CMatrix F0 = filter_apply(d, {3.0, 0.0, d.values(2)});
  CHECK((F0 * d.vectors.col(2).cast<cplx>()).norm() < 1e-12);
  CHECK_THROWS_AS(filter_apply(d, {0.0, 0.0, 0.0}), DomainError);
}

TEST_CASE("filter locality decays") {
  FilterLocalityConfig cfg;
  cfg.region = Region::interval(0, 15).with_cut(std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
  cfg.S = {6};
  cfg.E = 0.25;
  cfg.ell_grid = {1, 2, 3, 4};
  const auto rep = filter_locality_check(cfg);
  REQUIRE(rep.rate);
  CHECK(*rep.rate > 0.4);
  CHECK(rep.rows.size() == 4);
  CHECK(rep.rows[1].t == doctest::Approx(4.0 * 2 / 50));
}

TEST_CASE("Fourier envelope") {
  const std::vector<double> freqs = {-10, -5, -1, 0, 1, 5, 10};
  const auto rep = fourier_bound_check(5.0, 0.0, 0.01, freqs);
  CHECK(rep.all_ok);
  for (const auto& row : rep.rows) {
    CHECK(row.measured <= row.bound);
    if (row.freq == 0.0) CHECK(row.measured <= 5.0);
  }
  const auto wide = fourier_bound_check(20.0, 0.3, 0.01, {3.0});
  const auto narrow = fourier_bound_check(1.0, 0.3, 0.01, {3.0});
  CHECK(wide.rows[0].bound > narrow.rows[0].bound);
  CHECK_THROWS_AS(fourier_bound_check(1.0, 0.0, 2.0, freqs), DomainError);
}

TEST_CASE("corner norms") {
  const auto b = make_basis(Region::interval(0, 4), 1);
  const CMatrix I = CMatrix::Identity(5, 5);
  const std::vector<int> S = {2}, T = {1, 2, 3};
  CHECK(corner_norm(I, *b, S, T) == 0.0);
  CHECK(rows_hitting(*b, S).size() == 1);
  CHECK(rows_avoiding(*b, T).size() == 2);
}

TEST_CASE("diagonal chain counterexample") {
  const auto rep = diagonal_chain_counterexample(4);
  CHECK(rep.offdiag_max == 0.0);
  CHECK(rep.eigencorrelator_offdiag == 0.0);
  CHECK(rep.rotation_error < 1e-10);
  CHECK(rep.string_time == doctest::Approx(std::numbers::pi / 4));
  CHECK(rep.string_error < 1e-10);
  CHECK(rep.witness == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(rep.string_error_half_pi == doctest::Approx(2.0));
  CHECK(diagonal_chain_counterexample(8).witness_ok);
  CHECK_THROWS_AS(diagonal_chain_counterexample(6), DomainError);
}
