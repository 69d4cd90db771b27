#include <doctest.h>

#include <cmath>

#include "xxzloc/errors.hpp"
#include "xxzloc/operators.hpp"
#include "xxzloc/oracles.hpp"

using namespace xxzloc;

namespace {

const Region kCut = Region::interval(0, 9).with_cut(std::vector<int>{0, 1, 2, 3, 4});

double min_eig(const Matrix& m) { return eig_sym(m).values.minCoeff(); }

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(ModelParams{2.0, 0.0}.validate());
  CHECK_THROWS_AS((ModelParams{1.0, 1.0}.validate()), DomainError);
  CHECK_THROWS_AS((ModelParams{2.0, -1.0}.validate()), DomainError);
  CHECK_THROWS_AS((ModelParams{NAN, 1.0}.validate()), DomainError);
  CHECK(HalfInteger::from_double(0.5).ceil() == 1);
  CHECK(HalfInteger::from_double(2).ceil() == 2);
  CHECK_THROWS_AS(HalfInteger::from_double(0.3), DomainError);
  CHECK_THROWS_AS(HalfInteger::from_double(-1), DomainError);
}

TEST_CASE("energy windows") {
  const EnergyWindow w{HalfInteger::from_twice(2), 2.0};
  CHECK(w.upper() == doctest::Approx(0.625));
  CHECK(w.at_most().contains(-100.0));
  CHECK_FALSE(w.at_most().contains(0.625));
  CHECK(w.exactly().contains(0.5));
  CHECK_FALSE(w.exactly().contains(0.49));
  CHECK(EnergyInterval::empty_set().empty());
}

TEST_CASE("single particle Hamiltonian is tridiagonal") {
  const Region r = Region::interval(0, 5);
  const auto omega = sample_field(r, {}, 3);
  const ModelParams p{3.0, 0.7};
  const auto H = assemble_hamiltonian(r, 1, p, omega);
  for (Index i = 0; i < 6; ++i) {
    CHECK(H(i, i) == 1.0 + 0.7 * omega.at(static_cast<int>(i)));
    for (Index j = 0; j < 6; ++j) {
      if (std::abs(i - j) == 1) CHECK(H(i, j) == -1.0 / 6.0);
      if (std::abs(i - j) > 1) CHECK(H(i, j) == 0.0);
    }
  }
}

TEST_CASE("vacuum and single-cluster diagonal") {
  const Region r = Region::interval(0, 9);
  const auto omega = sample_field(r, {}, 1);
  const auto H0 = assemble_hamiltonian(r, 0, {2, 1}, omega);
  REQUIRE(H0.size() == 1);
  CHECK(H0(0, 0) == 0.0);
  const auto H = assemble_hamiltonian(r, 2, {2, 0}, omega);
  CHECK(H.entry({3, 4}, {3, 4}) == 1.0);
  CHECK(H.entry({3, 6}, {3, 6}) == 2.0);
}

TEST_CASE("parts reproduce the Hamiltonian") {
  const Region r = Region::from_sites({0, 1, 2, 3, 5, 6, 7});
  // Dyadic ω keeps every sum exact.
  const DisorderSample omega({0, 1, 2, 3, 5, 6, 7}, {0.5, 0.25, 0.75, 0.125, 1.0, 0.0, 0.375});
  const ModelParams p{2.0, 4.0};
  for (int n = 0; n <= 4; ++n) {
    const auto b = make_basis(r, n);
    const auto parts = assemble_parts(b, omega);
    const auto H = assemble_hamiltonian(b, p, omega);
    const Matrix sum = p.hopping() * parts.adjacency.matrix() + parts.cluster.matrix() +
                       p.lambda * parts.potential.matrix();
    CHECK((sum - H.matrix()).cwiseAbs().maxCoeff() == 0.0);
    for (std::size_t i = 0; i < b->size(); ++i) {
      const auto& x = (*b)[i];
      CHECK(parts.cluster.matrix()(static_cast<Index>(i), static_cast<Index>(i)) == cluster_count(x, r));
      double v = 0;
      for (int s : x.sites()) v += omega.at(s);
      CHECK(parts.potential.matrix()(static_cast<Index>(i), static_cast<Index>(i)) == v);
    }
  }
}

TEST_CASE("boundary operator") {
  const ModelParams p{2.0, 1.0};
  const auto b1 = make_basis(kCut, 1);
  const auto G = boundary_operator(b1, p);
  CHECK(G.entry({4}, {5}) == -0.25);
  CHECK(G.entry({5}, {4}) == -0.25);
  CHECK(G.triplets().size() == 2);
  const auto b2 = make_basis(kCut, 2);
  CHECK(boundary_operator(b2, p).entry({4, 5}, {4, 5}) == -1.0);
  // Γ^K = H^Λ - H^{K,K^c} for any ω.
  const auto omega = sample_field(kCut, {}, 5);
  const auto full = assemble_hamiltonian(make_basis(kCut.without_cut(), 2), p, omega);
  const auto dec = assemble_hamiltonian(b2, p, omega);
  CHECK((full.matrix() - dec.matrix() - boundary_operator(b2, p).matrix()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("projections") {
  const Region r = Region::interval(0, 5);
  for (int n = 1; n <= 3; ++n) {
    const auto b = make_basis(r, n);
    CHECK(projection(b, proj::QExact{0}).matrix().isZero(0));
    CHECK(projection(b, proj::PMinus{{2}}).matrix() == projection(b, proj::NumberAt{2}).matrix());
    const Matrix plus = projection(b, proj::PPlus{{1, 2}}).matrix();
    const Matrix minus = projection(b, proj::PMinus{{1, 2}}).matrix();
    CHECK((plus + minus - Matrix::Identity(plus.rows(), plus.cols())).isZero(0));
  }
  const auto b = make_basis(r, 2);
  const Matrix r1 = projection(b, proj::RankOne{{1, 3}}).matrix();
  CHECK(r1.sum() == 1.0);
  CHECK(r1(static_cast<Index>(b->rank({1, 3})), static_cast<Index>(b->rank({1, 3}))) == 1.0);
  const auto v = make_basis(r, 0);
  CHECK(projection(v, proj::QHatLeq{2}).matrix()(0, 0) == doctest::Approx(1.5));
}

TEST_CASE("trace of Q_{<=k} is bounded by k|Λ|^{2k}") {
  const Region r = Region::interval(0, 5);
  double trace = 0;
  std::uint64_t direct = 0;
  for (int n = 0; n <= 6; ++n) {
    trace += projection(make_basis(r, n), proj::QLeq{2}).matrix().trace();
    for (const auto& x : enumerate_sector(r, n)) {
      const int w = cluster_count(x, r);
      direct += (w >= 1 && w <= 2) ? 1 : 0;
    }
  }
  CHECK(trace == static_cast<double>(direct));
  CHECK(trace <= 2.0 * std::pow(6.0, 4));
}

TEST_CASE("lifted Hamiltonian") {
  const Region r = Region::interval(0, 7);
  const ModelParams p{2.0, 1.0};
  const auto omega = sample_field(r, {}, 11);
  for (int n = 1; n <= 3; ++n) {
    const auto H = assemble_hamiltonian(r, n, p, omega);
    CHECK((lifted_hamiltonian(H, HalfInteger::from_twice(0), p).matrix() - H.matrix()).isZero(0));
    CHECK(min_eig(lifted_hamiltonian(H, HalfInteger::from_twice(2), p).matrix()) >= 2 * p.gap() - 1e-10);
    CHECK(min_eig(lifted_hamiltonian(H, HalfInteger::from_twice(4), p).matrix()) >= 3 * p.gap() - 1e-10);
  }
  const auto H0 = assemble_hamiltonian(r, 0, p, omega);
  CHECK(lifted_hamiltonian(H0, HalfInteger::from_twice(1), p)(0, 0) == doctest::Approx(p.gap()));
}

TEST_CASE("operator inequalities on random samples") {
  const Region r = Region::interval(0, 7);
  const ModelParams p{1.7, 2.0};
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto omega = sample_field(r, {}, s);
    for (int n = 1; n <= 3; ++n) {
      const auto b = make_basis(r, n);
      const auto parts = assemble_parts(b, omega);
      const Matrix W = parts.cluster.matrix(), A = parts.adjacency.matrix();
      CHECK(min_eig(2 * W + A) >= -1e-10);
      CHECK(min_eig(2 * W - A) >= -1e-10);
      const auto H = assemble_hamiltonian(b, p, omega);
      CHECK(min_eig(H.matrix() - p.gap() * W) >= -1e-10);
    }
  }
}

TEST_CASE("different sectors never mix") {
  // The tensor oracle's off-sector blocks vanish, so f(H) is block diagonal.
  const Region r = Region::interval(0, 5);
  const auto T = tensor_hamiltonian(r, {2, 1}, sample_field(r, {}, 2));
  const Matrix dense = Matrix(T.m.real());
  for (int n = 0; n < r.size(); ++n) {
    const Index off = sector_offset(r.size(), n), next = sector_offset(r.size(), n + 1);
    CHECK(dense.block(off, next, next - off, dense.cols() - next).isZero(0));
  }
}

TEST_CASE("SectorOperator helpers") {
  const auto b = make_basis(Region::interval(0, 3), 1);
  const auto H = assemble_hamiltonian(b, {2, 0}, sample_field(Region::interval(0, 3), {}, 1));
  CHECK(((H + H) - H * 2.0).matrix().isZero(0));
  const auto j = H.to_json();
  CHECK(j["entries"].size() == H.triplets().size());
  CHECK_THROWS_AS(H.entry({0, 1}, {0}), DomainError);
}

TEST_CASE("eigenvalue count in I_{<=k} against k|Λ|^{2k} + 1") {
  const Region r = Region::interval(0, 5);
  const ModelParams p{2.0, 0.5};
  const auto omega = sample_field(r, {}, 4);
  for (int k = 1; k <= 2; ++k) {
    const auto window = EnergyWindow{HalfInteger::from_twice(2 * k), p.delta}.at_most();
    std::size_t count = 0;
    for (int n = 0; n <= r.size(); ++n) {
      const auto d = eig_sym(assemble_hamiltonian(r, n, p, omega));
      for (Index i = 0; i < d.values.size(); ++i) count += window.contains(d.values(i)) ? 1 : 0;
    }
    CHECK(count >= 1);  // the vacuum
    CHECK(static_cast<double>(count) <= k * std::pow(6.0, 2 * k) + 1);
  }
}
