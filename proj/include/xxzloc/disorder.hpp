#pragma once

// i.i.d. single-site disorder with counter-based per-site streams: the value
// at a site depends only on (seed, site, law), never on the region's extent.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "xxzloc/config_space.hpp"

namespace xxzloc {

struct Distribution {
  enum class Kind { uniform01, beta };
  Kind kind = Kind::uniform01;
  double a = 1.0;
  double b = 1.0;

  static Distribution uniform01() { return {}; }
  /// Requires a, b >= 1 (bounded density); throws DomainError otherwise.
  static Distribution beta(double a, double b);
  /// "uniform01" or "beta(a,b)".
  std::string tag() const;
  static Distribution parse(const std::string& tag);

  friend bool operator==(const Distribution&, const Distribution&) = default;
};

class DisorderSample {
 public:
  DisorderSample() = default;
  /// Explicit values on sorted distinct sites (tests and replays).
  DisorderSample(std::vector<int> sites, std::vector<double> values, std::uint64_t seed = 0,
                 Distribution law = {});

  /// Throws DomainError when the site carries no value.
  double at(int site) const;
  bool defines(int site) const;

  std::span<const int> sites() const { return sites_; }
  std::span<const double> values() const { return values_; }
  std::uint64_t seed() const { return seed_; }
  const Distribution& distribution() const { return law_; }

  /// A copy with every site label shifted.
  DisorderSample translated(int shift) const;

 private:
  std::vector<int> sites_;
  std::vector<double> values_;
  std::uint64_t seed_ = 0;
  Distribution law_;
};

std::uint64_t splitmix64(std::uint64_t x);
/// Seed of sample `index` in a run keyed by `base_seed`.
std::uint64_t sample_seed(std::uint64_t base_seed, std::uint64_t index);
/// The value a field with this seed takes at `site`.
double site_value(const Distribution& law, std::uint64_t seed, int site);

DisorderSample sample_field(const Region& region, const Distribution& law, std::uint64_t seed);

}  // namespace xxzloc
