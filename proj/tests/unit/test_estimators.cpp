#include <doctest.h>

#include <cmath>
#include <random>

#include "xxzloc/errors.hpp"
#include "xxzloc/estimators.hpp"
#include "xxzloc/scans.hpp"

using namespace xxzloc;

namespace {

const ModelParams kParams{2.0, 1.0};

SectorOperator hamiltonian(const Region& r, int n, std::uint64_t seed, ModelParams p = kParams) {
  return assemble_hamiltonian(r, n, p, sample_field(r, {}, seed));
}

}  // namespace

TEST_CASE("green function identities") {
  const Region r = Region::interval(0, 6);
  const auto H0 = hamiltonian(r, 0, 1);
  CHECK(std::abs(green(H0, cplx(0, 1), {}, {}) - cplx(0, 1)) < 1e-15);
  const auto H = hamiltonian(r, 2, 1);
  const cplx z(0.4, 1e-3);
  CHECK(std::abs(green(H, z, {0, 1}, {3, 5}) - green(H, z, {3, 5}, {0, 1})) < 1e-10);
  CHECK(green(H, z, {0, 1}, {3}) == cplx(0, 0));
}

TEST_CASE("decay fit") {
  std::vector<DecayPoint> exact;
  for (int d = 0; d < 8; ++d) exact.push_back({Distance::finite(d), std::exp(-0.7 * d)});
  const auto f = decay_fit(exact, DistanceKind::d1);
  CHECK(f.slope == doctest::Approx(-0.7).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0));
  std::vector<DecayPoint> flat;
  for (int d = 0; d < 5; ++d) flat.push_back({Distance::finite(d), 2.0});
  CHECK(std::abs(decay_fit(flat, DistanceKind::d1).slope) < 1e-14);

  // Planted rate with multiplicative noise.
  std::mt19937_64 g(4);
  std::normal_distribution<double> nd(0.0, 0.05);
  std::vector<DecayPoint> noisy;
  for (int d = 0; d < 12; ++d)
    for (int k = 0; k < 5; ++k) noisy.push_back({Distance::finite(d), std::exp(-0.4 * d + nd(g))});
  const auto nf = decay_fit(noisy, DistanceKind::dH);
  CHECK(std::abs(nf.slope + 0.4) < 2 * nf.slope_stderr + 1e-3);

  std::vector<DecayPoint> few = {{Distance::finite(0), 1.0}, {Distance::finite(1), 0.5},
                                 {Distance::infinite(), 0.1}, {Distance::finite(2), 0.0}};
  CHECK_THROWS_AS(decay_fit(few, DistanceKind::d1), NumericalRefusal);
  const auto ranged = decay_fit(exact, DistanceKind::d1, {2, 5});
  CHECK(ranged.bins.size() == 4);
  CHECK(ranged.dropped_range == 4);
}

TEST_CASE("eigencorrelator properties") {
  const Region r = Region::interval(0, 6);
  const auto H = hamiltonian(r, 2, 3);
  const auto d = eig_sym(H);
  const auto& b = H.basis();
  const EigencorrelatorTable full(d, EnergyInterval::whole());
  const EigencorrelatorTable none(d, EnergyInterval::empty_set());
  const EigencorrelatorTable below(d, EnergyInterval{-INFINITY, kParams.gap() - 1e-9});
  const EigencorrelatorTable win(d, EnergyWindow{HalfInteger::from_twice(3), kParams.delta}.at_most());
  for (Index x = 0; x < static_cast<Index>(b.size()); ++x) {
    CHECK(full(x, x) == doctest::Approx(1.0).epsilon(1e-10));
    for (Index y = 0; y < static_cast<Index>(b.size()); ++y) {
      CHECK(full(x, y) <= 1.0 + 1e-10);
      CHECK(win(x, y) <= 1.0 + 1e-10);
      CHECK(none(x, y) == 0.0);
      CHECK(below(x, y) == 0.0);
    }
  }
  const auto res = eigencorrelator(H, EnergyInterval::whole(), {0, 1}, {0, 1});
  CHECK(res.value == doctest::Approx(1.0));
  CHECK(res.clusters_used == b.size());
  CHECK(eigencorrelator(H, EnergyInterval::whole(), {0, 1}, {2}).value == 0.0);
}

TEST_CASE("localization center and ipr") {
  const Region r = Region::interval(0, 5);
  const auto b = make_basis(r, 2);
  const Index n = static_cast<Index>(b->size());
  const Index k = static_cast<Index>(b->rank({2, 4}));
  const Vector delta = Vector::Unit(n, k);
  CHECK(localization_center(delta, *b).center == Configuration{2, 4});
  CHECK(ipr(delta) == 1.0);
  const Vector flat = Vector::Constant(n, 1.0 / std::sqrt(double(n)));
  CHECK(ipr(flat) == doctest::Approx(1.0 / n));
  CHECK(localization_center(flat, *b).inequality_holds);
  CHECK_THROWS_AS(localization_center(2 * flat, *b), DomainError);

  const auto d = eig_sym(hamiltonian(r, 2, 5, {2.0, 8.0}));
  for (Index c = 0; c < n; ++c) {
    const Vector psi = d.vectors.col(c);
    const auto lc = localization_center(psi, *b);
    CHECK(lc.ratio >= 1.0 - 1e-12);
    const double p = ipr(psi);
    CHECK((p >= 1.0 / n - 1e-12 && p <= 1.0 + 1e-12));
    CHECK(mass_near(psi, *b, lc.center, 100) == doctest::Approx(1.0));
  }
}

TEST_CASE("large deviation set and event") {
  const Region r = Region::interval(0, 19);
  const auto set = large_deviation_set(r, {9, 10}, 1);
  for (const auto& u : set) {
    CHECK(cluster_count(u, r) == 1);
    CHECK(u[0] >= 7);
    CHECK(u[1] <= 12);
  }
  CHECK(set.size() == 5);
  const DisorderSample zeros({7, 8, 9, 10, 11, 12}, {0, 0, 0, 0, 0, 0});
  CHECK(large_deviation_event(set, zeros, kParams, 1));
  const DisorderSample ones({7, 8, 9, 10, 11, 12}, {1, 1, 1, 1, 1, 1});
  CHECK_FALSE(large_deviation_event(set, ones, kParams, 1));
  CHECK_THROWS_AS(large_deviation_set(r, {3, 5}, 1), DomainError);
}

TEST_CASE("large deviation probe regimes") {
  LargeDeviationConfig cfg;
  cfg.region = Region::interval(0, 19);
  cfg.q = HalfInteger::from_twice(2);
  cfg.n_samples = 10000;
  // λΣω < g needs Σω < g/λ on two sites: probability ~ (g/λ)² per set.
  cfg.params = {2.0, 1000.0};
  cfg.anchor = {9, 10};
  CHECK(large_deviation_probe(cfg).frequency.mean() == 0.0);
  cfg.params = {2.0, 0.1};
  cfg.n_samples = 200;
  CHECK(large_deviation_probe(cfg).frequency.mean() > 0.95);
  // Frequency falls with N at fixed (λ, q).
  cfg.params = {2.0, 1.0};
  cfg.n_samples = 2000;
  double prev = 2.0;
  for (const Configuration& a : {Configuration{9}, Configuration{9, 10}, Configuration{9, 10, 11}}) {
    cfg.anchor = a;
    const double f = large_deviation_probe(cfg).frequency.mean();
    CHECK(f < prev);
    prev = f;
  }
}

TEST_CASE("fractional moments are translation covariant") {
  // Shifting Λ by c with a field translated by c leaves every moment unchanged.
  const Region r = Region::interval(0, 7);
  const Region s = Region::interval(5, 12);
  const ModelParams p{2.0, 3.0};
  const cplx z(0.3, 1e-4);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto w = sample_field(r, {}, seed);
    const auto a = green(assemble_hamiltonian(r, 2, p, w), z, {1, 2}, {4, 6});
    const auto b = green(assemble_hamiltonian(s, 2, p, w.translated(5)), z, {6, 7}, {9, 11});
    CHECK(std::abs(a - b) < 1e-13 * std::abs(a));
  }
}

TEST_CASE("fractional moment scan") {
  ScanConfig cfg;
  cfg.region = Region::interval(0, 9);
  cfg.params = {4.0, 8.0};
  cfg.pairs = anchored_pairs(cfg.region, {0, 1});
  cfg.n_samples = 40;
  cfg.range = {0, 20};
  const auto res = fractional_moment_scan(cfg, 0.3, cplx(0.375, 1e-4));
  REQUIRE(res.fit);
  CHECK(res.fit->slope < 0);
  CHECK(res.pairs.front().distance == Distance::finite(0));
  CHECK_THROWS_AS(fractional_moment_scan(cfg, 0.5, cplx(0.375, 1e-4)), DomainError);
  // Mixed-size pairs carry exactly zero moment.
  cfg.pairs = {{{0, 1}, {0, 1}}};
  cfg.n_particles = 2;
  CHECK(fractional_moment_scan(cfg, 0.3, cplx(0.375, 1e-4)).pairs.size() == 1);
}

TEST_CASE("eigencorrelator scan below the gap is identically zero") {
  ScanConfig cfg;
  cfg.region = Region::interval(0, 7);
  cfg.params = {2.0, 1.0};
  cfg.pairs = anchored_pairs(cfg.region, {0, 1});
  cfg.n_samples = 10;
  const auto res = eigencorrelator_scan(cfg, HalfInteger::from_twice(0));
  for (const auto& p : res.pairs) CHECK(p.estimate.mean() == 0.0);
  CHECK_FALSE(res.fit);
}

TEST_CASE("a-priori moment check") {
  ScanConfig cfg;
  cfg.region = Region::interval(0, 7);
  cfg.params = {2.0, 8.0};
  cfg.pairs = {{{0, 1}, {3, 4}}};
  cfg.n_samples = 50;
  std::vector<cplx> zs;
  for (double eta : {1e-2, 1e-4, 1e-6}) zs.emplace_back(0.3, eta);
  const auto rep = apriori_moment_check(cfg, 0.5, zs);
  CHECK(rep.all_finite);
  CHECK(rep.max_min_ratio <= 3.0);
}

TEST_CASE("Combes-Thomas on a decoupled region") {
  CTConfig cfg;
  cfg.region = Region::interval(0, 9).with_cut(std::vector<int>{0, 1, 2, 3, 4});
  cfg.n_particles = 1;
  cfg.params = {2.0, 0.0};
  cfg.pairs = anchored_pairs(cfg.region, {0});
  cfg.n_samples = 3;
  const auto rep = combes_thomas_check(cfg);
  CHECK(rep.all_positive);
  CHECK(rep.infinite_pairs == 5);
  CHECK(rep.cut_leak == 0.0);
  cfg.window = HalfInteger::from_twice(2);
  CHECK_THROWS_AS(combes_thomas_check(cfg), DomainError);
  cfg.region = cfg.region.without_cut();
  cfg.params = {4.0, 1.0};
  const auto lifted = lifted_ct_check(cfg);
  CHECK(lifted.all_positive);
}
