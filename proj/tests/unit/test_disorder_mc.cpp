#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "xxzloc/disorder.hpp"
#include "xxzloc/errors.hpp"
#include "xxzloc/monte_carlo.hpp"

using namespace xxzloc;

TEST_CASE("distributions") {
  CHECK(Distribution::parse("uniform01") == Distribution::uniform01());
  CHECK(Distribution::parse("beta(2,3)") == Distribution::beta(2, 3));
  CHECK(Distribution::beta(2, 3).tag() == "beta(2,3)");
  CHECK_THROWS_AS(Distribution::beta(0.5, 2), DomainError);
  CHECK_THROWS_AS(Distribution::parse("gauss"), DomainError);
}

TEST_CASE("fields are counter based") {
  const auto a = sample_field(Region::interval(0, 9), {}, 42);
  const auto b = sample_field(Region::interval(-20, 30), {}, 42);
  for (int s = 0; s <= 9; ++s) {
    CHECK(a.at(s) == b.at(s));
    CHECK(a.at(s) >= 0.0);
    CHECK(a.at(s) <= 1.0);
  }
  CHECK_THROWS_AS(a.at(10), DomainError);
  CHECK(a.translated(5).at(7) == a.at(2));
  const auto beta = sample_field(Region::interval(0, 99), Distribution::beta(2, 2), 1);
  for (double v : beta.values()) CHECK((v >= 0.0 && v <= 1.0));
}

TEST_CASE("law of large numbers") {
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += site_value({}, 7, i);
  CHECK(std::abs(sum / n - 0.5) < 0.005);
  sum = 0;
  for (int i = 0; i < n; ++i) sum += site_value(Distribution::beta(2, 6), 7, i);
  CHECK(std::abs(sum / n - 0.25) < 0.005);
}

TEST_CASE("monte carlo basics") {
  const auto c = monte_carlo([](const SampleInfo&) { return 1.0; }, 50, 3);
  CHECK(c.mean() == 1.0);
  CHECK(c.variance() == 0.0);
  const auto w = monte_carlo([](const SampleInfo& s) { return site_value({}, s.seed, 0); }, 4000, 9);
  CHECK(std::abs(w.mean() - 0.5) < 0.03);
  CHECK(w.standard_error() == doctest::Approx(std::sqrt(w.variance() / w.count())));
}

TEST_CASE("worker count never changes the estimate") {
  auto f = [](const SampleInfo& s) { return std::sin(static_cast<double>(s.seed % 1000)) + s.index; };
  const auto ref = monte_carlo_serial(f, 1000, 5);
  for (int w : {1, 4, 8}) CHECK(monte_carlo(f, 1000, 5, w) == ref);
  auto g = [](const SampleInfo& s) { return std::vector<double>{double(s.index), site_value({}, s.seed, 3)}; };
  const auto vref = monte_carlo_vector_serial(g, 300, 2);
  for (int w : {1, 3}) CHECK(monte_carlo_vector(g, 300, 2, w) == vref);
}

TEST_CASE("merge equals pooled estimate") {
  std::vector<double> all;
  for (int i = 0; i < 37; ++i) all.push_back(std::cos(i * 0.7));
  const MCEstimate pooled(1, 0, all);
  const MCEstimate lo(1, 0, {all.begin(), all.begin() + 20});
  const MCEstimate hi(1, 20, {all.begin() + 20, all.end()});
  CHECK(lo.merged(hi) == pooled);
  CHECK(hi.merged(lo) == pooled);
  CHECK_THROWS(lo.merged(lo));
}

TEST_CASE("non-finite samples are excluded and counted") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const MCEstimate e(0, 0, {1.0, nan, 3.0, INFINITY});
  CHECK(e.count() == 2);
  CHECK(e.excluded() == 2);
  CHECK(e.mean() == 2.0);
  CHECK(e.n_samples() == 4);
}

TEST_CASE("estimand exceptions propagate") {
  auto f = [](const SampleInfo& s) -> double {
    if (s.index == 17) throw std::runtime_error("boom");
    return 0.0;
  };
  CHECK_THROWS_AS(monte_carlo(f, 40, 1, 4), std::runtime_error);
}

TEST_CASE("sample seeds are distinct") {
  std::vector<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.push_back(sample_seed(1, i));
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
  CHECK(sample_seed(1, 0) != sample_seed(2, 0));
}
