#pragma once

// Particle configurations on finite subsets of Z: regions (optionally decoupled
// by a cut), configurations, the colex-ordered sector basis, cluster counts and
// the configuration distances.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace xxzloc {

/// Extended non-negative integer: a graph distance that may be infinite.
class Distance {
 public:
  constexpr Distance() = default;
  static constexpr Distance finite(std::int64_t v) { return Distance(v, false); }
  static constexpr Distance infinite() { return Distance(0, true); }

  constexpr bool is_finite() const { return !infinite_; }
  /// Throws std::logic_error on an infinite distance.
  std::int64_t value() const;

  friend constexpr Distance operator+(Distance a, Distance b) {
    if (a.infinite_ || b.infinite_) return infinite();
    return finite(a.value_ + b.value_);
  }
  friend constexpr bool operator==(Distance a, Distance b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(Distance a, Distance b) {
    if (a.infinite_ || b.infinite_) {
      return static_cast<int>(a.infinite_) <=> static_cast<int>(b.infinite_);
    }
    return a.value_ <=> b.value_;
  }

  std::string to_string() const;

 private:
  constexpr Distance(std::int64_t v, bool inf) : value_(v), infinite_(inf) {}
  std::int64_t value_ = 0;
  bool infinite_ = false;
};

/// Closed integer interval [first, last].
struct Interval {
  int first = 0;
  int last = 0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// A finite union of integer intervals, viewed as a subgraph of Z, with an
/// optional cut K. With a cut, edges run only inside K or inside its complement.
class Region {
 public:
  Region() = default;

  static Region interval(int first, int last);
  static Region from_intervals(std::vector<Interval> intervals);
  static Region from_sites(std::vector<int> sites);

  /// The decoupled graph for cut K (given as a site list, each a member of the region).
  Region with_cut(std::vector<int> cut_sites) const;
  Region with_cut(std::span<const Interval> cut) const;
  Region without_cut() const;

  std::span<const int> sites() const { return sites_; }
  int size() const { return static_cast<int>(sites_.size()); }
  bool contains(int site) const { return index_of(site) >= 0; }
  /// Position of site in sites(), or -1 when absent. O(1).
  int index_of(int site) const;

  bool has_cut() const { return has_cut_; }
  std::vector<int> cut_sites() const;
  bool in_cut(int site) const;

  bool adjacent(int i, int j) const;
  /// Graph distance on this region (infinite across gaps or across the cut).
  Distance distance(int i, int j) const;
  /// Component label of site (sites in the same label are graph-connected).
  int component(int site) const;

  std::vector<Interval> intervals() const;
  std::vector<Interval> cut_intervals() const;

  friend bool operator==(const Region& a, const Region& b) {
    return a.sites_ == b.sites_ && a.has_cut_ == b.has_cut_ && a.cut_flag_ == b.cut_flag_;
  }

 private:
  void rebuild();

  std::vector<int> sites_;
  std::vector<char> cut_flag_;    // per site index
  std::vector<int> component_;    // per site index
  std::vector<int> lookup_;       // site - min_site -> index or -1
  int min_site_ = 0;
  bool has_cut_ = false;
};

/// A particle pattern: strictly increasing occupied sites. Empty is the vacuum.
class Configuration {
 public:
  Configuration() = default;
  /// Throws DomainError unless strictly increasing.
  explicit Configuration(std::vector<int> occupied);
  Configuration(std::initializer_list<int> occupied)
      : Configuration(std::vector<int>(occupied)) {}

  std::span<const int> sites() const { return occupied_; }
  int size() const { return static_cast<int>(occupied_.size()); }
  bool empty() const { return occupied_.empty(); }
  int operator[](std::size_t i) const { return occupied_[i]; }
  bool contains(int site) const;
  bool intersects(std::span<const int> set) const;

  /// Sum of |x_i|.
  std::int64_t l1_norm() const;
  /// Euclidean norm of the site vector.
  double l2_norm() const;

  Configuration translated(int shift) const;
  std::string to_string() const;

  friend bool operator==(const Configuration&, const Configuration&) = default;
  friend auto operator<=>(const Configuration&, const Configuration&) = default;

 private:
  std::vector<int> occupied_;
};

/// Binomial coefficient; throws std::overflow_error past 64 bits.
std::uint64_t binomial(int n, int k);

/// Number of maximal connected blocks of x in the region's graph.
int cluster_count(const Configuration& x, const Region& region);

/// Sum of graph distances between the i-th smallest points; infinite when sizes differ.
Distance dist_d1(const Configuration& x, const Configuration& y, const Region& region);
/// Hausdorff distance of the point sets in the region's graph.
Distance dist_hausdorff(const Configuration& x, const Configuration& y, const Region& region);
/// Hausdorff distance, infinite when |x| != |y|.
Distance dist_modified_hausdorff(const Configuration& x, const Configuration& y,
                                 const Region& region);

/// All N-subsets of the region in colexicographic order.
std::vector<Configuration> enumerate_sector(const Region& region, int n);
/// Configurations in the sector with 1 <= cluster_count <= k.
std::vector<Configuration> enumerate_bounded_clusters(const Region& region, int n, int k);

struct Hop {
  Configuration target;
  int from = 0;
  int to = 0;
};
/// Single-particle moves across one edge of the region graph into an empty site.
std::vector<Hop> hop_neighbors(const Configuration& x, const Region& region);

/// The ordered sector P_N(region) with O(N) rank/unrank (combinatorial number system).
class SectorBasis {
 public:
  SectorBasis(Region region, int n_particles);

  const Region& region() const { return region_; }
  int n_particles() const { return n_; }
  std::size_t size() const { return configs_.size(); }

  const Configuration& unrank(std::size_t rank) const { return configs_.at(rank); }
  const Configuration& operator[](std::size_t rank) const { return configs_[rank]; }
  /// Throws DomainError when x is not in this sector.
  std::size_t rank(const Configuration& x) const;
  bool contains(const Configuration& x) const;

  std::span<const Configuration> configurations() const { return configs_; }

 private:
  Region region_;
  int n_ = 0;
  std::vector<Configuration> configs_;
};

}  // namespace xxzloc
