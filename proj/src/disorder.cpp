#include "xxzloc/disorder.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

#include <fmt/format.h>

#include "xxzloc/errors.hpp"

namespace xxzloc {

Distribution Distribution::beta(double a, double b) {
  if (!(a >= 1.0) || !(b >= 1.0)) {
    throw DomainError(fmt::format("beta({},{}) has an unbounded density; need a, b >= 1", a, b));
  }
  return {Kind::beta, a, b};
}

std::string Distribution::tag() const {
  if (kind == Kind::uniform01) return "uniform01";
  return fmt::format("beta({},{})", a, b);
}

Distribution Distribution::parse(const std::string& tag) {
  if (tag == "uniform01" || tag == "uniform") return uniform01();
  double a = 0, b = 0;
  char tail = 0;
  if (std::sscanf(tag.c_str(), "beta(%lf,%lf%c", &a, &b, &tail) == 3 && tail == ')') {
    return beta(a, b);
  }
  throw DomainError("unknown distribution '" + tag + "'");
}

DisorderSample::DisorderSample(std::vector<int> sites, std::vector<double> values,
                               std::uint64_t seed, Distribution law)
    : sites_(std::move(sites)), values_(std::move(values)), seed_(seed), law_(law) {
  if (sites_.size() != values_.size()) throw DomainError("sites and values differ in length");
  for (std::size_t i = 1; i < sites_.size(); ++i) {
    if (sites_[i] <= sites_[i - 1]) throw DomainError("disorder sites must be strictly increasing");
  }
}

bool DisorderSample::defines(int site) const {
  return std::binary_search(sites_.begin(), sites_.end(), site);
}

double DisorderSample::at(int site) const {
  const auto it = std::lower_bound(sites_.begin(), sites_.end(), site);
  if (it == sites_.end() || *it != site) {
    throw DomainError("disorder sample has no value at site " + std::to_string(site));
  }
  return values_[static_cast<std::size_t>(it - sites_.begin())];
}

DisorderSample DisorderSample::translated(int shift) const {
  std::vector<int> s(sites_);
  for (int& v : s) v += shift;
  return DisorderSample(std::move(s), values_, seed_, law_);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t sample_seed(std::uint64_t base_seed, std::uint64_t index) {
  return splitmix64(splitmix64(base_seed) ^ (index * 0xd1b54a32d192ed03ULL + 1));
}

namespace {
std::uint64_t site_key(std::uint64_t seed, int site) {
  const auto s = static_cast<std::uint64_t>(static_cast<std::int64_t>(site));
  return splitmix64(splitmix64(seed) ^ (s * 0x9e3779b97f4a7c15ULL));
}
}  // namespace

double site_value(const Distribution& law, std::uint64_t seed, int site) {
  const std::uint64_t h = site_key(seed, site);
  if (law.kind == Distribution::Kind::uniform01) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
  }
  std::mt19937_64 gen(h);
  std::gamma_distribution<double> ga(law.a, 1.0);
  std::gamma_distribution<double> gb(law.b, 1.0);
  const double x = ga(gen);
  const double y = gb(gen);
  return x / (x + y);
}

DisorderSample sample_field(const Region& region, const Distribution& law, std::uint64_t seed) {
  std::vector<int> sites(region.sites().begin(), region.sites().end());
  std::vector<double> values;
  values.reserve(sites.size());
  for (int s : sites) values.push_back(site_value(law, seed, s));
  return DisorderSample(std::move(sites), std::move(values), seed, law);
}

}  // namespace xxzloc
