#include "xxzloc/config_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "xxzloc/errors.hpp"

namespace xxzloc {

namespace {

constexpr std::size_t kMaxSectorSize = 5'000'000;

void require_member(const Configuration& x, const Region& region) {
  for (int s : x.sites()) {
    if (!region.contains(s)) {
      throw DomainError("site " + std::to_string(s) + " of " + x.to_string() +
                        " is outside the region");
    }
  }
}

Distance point_to_set(int u, const Configuration& set, const Region& region) {
  Distance best = Distance::infinite();
  for (int v : set.sites()) best = std::min(best, region.distance(u, v));
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// Distance

std::int64_t Distance::value() const {
  if (infinite_) throw std::logic_error("value() of an infinite distance");
  return value_;
}

std::string Distance::to_string() const { return infinite_ ? "inf" : std::to_string(value_); }

// ---------------------------------------------------------------------------
// Region

Region Region::interval(int first, int last) { return from_intervals({{first, last}}); }

Region Region::from_intervals(std::vector<Interval> intervals) {
  std::vector<int> sites;
  for (const Interval& iv : intervals) {
    if (iv.last < iv.first) throw DomainError("interval with last < first");
    for (int s = iv.first; s <= iv.last; ++s) sites.push_back(s);
  }
  std::sort(sites.begin(), sites.end());
  if (std::adjacent_find(sites.begin(), sites.end()) != sites.end()) {
    throw DomainError("overlapping intervals in region");
  }
  return from_sites(std::move(sites));
}

Region Region::from_sites(std::vector<int> sites) {
  if (sites.empty()) throw DomainError("region must be nonempty");
  for (std::size_t i = 1; i < sites.size(); ++i) {
    if (sites[i] <= sites[i - 1]) throw DomainError("region sites must be strictly increasing");
  }
  Region r;
  r.sites_ = std::move(sites);
  r.cut_flag_.assign(r.sites_.size(), 0);
  r.rebuild();
  return r;
}

Region Region::with_cut(std::vector<int> cut_sites) const {
  Region r = *this;
  std::fill(r.cut_flag_.begin(), r.cut_flag_.end(), 0);
  for (int s : cut_sites) {
    const int idx = index_of(s);
    if (idx < 0) throw DomainError("cut site " + std::to_string(s) + " is outside the region");
    r.cut_flag_[static_cast<std::size_t>(idx)] = 1;
  }
  r.has_cut_ = true;
  r.rebuild();
  return r;
}

Region Region::with_cut(std::span<const Interval> cut) const {
  std::vector<int> sites;
  for (const Interval& iv : cut) {
    if (iv.last < iv.first) throw DomainError("cut interval with last < first");
    for (int s = iv.first; s <= iv.last; ++s) sites.push_back(s);
  }
  return with_cut(std::move(sites));
}

Region Region::without_cut() const {
  Region r = *this;
  std::fill(r.cut_flag_.begin(), r.cut_flag_.end(), 0);
  r.has_cut_ = false;
  r.rebuild();
  return r;
}

void Region::rebuild() {
  min_site_ = sites_.front();
  const auto span = static_cast<std::size_t>(sites_.back() - min_site_ + 1);
  lookup_.assign(span, -1);
  component_.assign(sites_.size(), 0);
  int label = 0;
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    lookup_[static_cast<std::size_t>(sites_[i] - min_site_)] = static_cast<int>(i);
    if (i > 0) {
      const bool linked = sites_[i] == sites_[i - 1] + 1 && cut_flag_[i] == cut_flag_[i - 1];
      if (!linked) ++label;
    }
    component_[i] = label;
  }
}

int Region::index_of(int site) const {
  if (lookup_.empty() || site < min_site_) return -1;
  const auto off = static_cast<std::size_t>(site - min_site_);
  return off < lookup_.size() ? lookup_[off] : -1;
}

std::vector<int> Region::cut_sites() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    if (cut_flag_[i]) out.push_back(sites_[i]);
  }
  return out;
}

bool Region::in_cut(int site) const {
  const int idx = index_of(site);
  return idx >= 0 && cut_flag_[static_cast<std::size_t>(idx)] != 0;
}

int Region::component(int site) const {
  const int idx = index_of(site);
  if (idx < 0) throw DomainError("site " + std::to_string(site) + " is outside the region");
  return component_[static_cast<std::size_t>(idx)];
}

bool Region::adjacent(int i, int j) const {
  if (std::abs(i - j) != 1) return false;
  const int a = index_of(i);
  const int b = index_of(j);
  if (a < 0 || b < 0) return false;
  return component_[static_cast<std::size_t>(a)] == component_[static_cast<std::size_t>(b)];
}

Distance Region::distance(int i, int j) const {
  if (component(i) != component(j)) return Distance::infinite();
  return Distance::finite(std::abs(static_cast<std::int64_t>(i) - j));
}

namespace {
std::vector<Interval> runs(std::span<const int> sites) {
  std::vector<Interval> out;
  for (int s : sites) {
    if (!out.empty() && out.back().last + 1 == s) {
      out.back().last = s;
    } else {
      out.push_back({s, s});
    }
  }
  return out;
}
}  // namespace

std::vector<Interval> Region::intervals() const { return runs(sites_); }

std::vector<Interval> Region::cut_intervals() const {
  const auto cut = cut_sites();
  return runs(cut);
}

// ---------------------------------------------------------------------------
// Configuration

Configuration::Configuration(std::vector<int> occupied) : occupied_(std::move(occupied)) {
  for (std::size_t i = 1; i < occupied_.size(); ++i) {
    if (occupied_[i] <= occupied_[i - 1]) {
      throw DomainError("configuration sites must be strictly increasing");
    }
  }
}

bool Configuration::contains(int site) const {
  return std::binary_search(occupied_.begin(), occupied_.end(), site);
}

bool Configuration::intersects(std::span<const int> set) const {
  return std::any_of(set.begin(), set.end(), [this](int s) { return contains(s); });
}

std::int64_t Configuration::l1_norm() const {
  std::int64_t acc = 0;
  for (int s : occupied_) acc += std::abs(static_cast<std::int64_t>(s));
  return acc;
}

double Configuration::l2_norm() const {
  double acc = 0.0;
  for (int s : occupied_) acc += static_cast<double>(s) * s;
  return std::sqrt(acc);
}

Configuration Configuration::translated(int shift) const {
  std::vector<int> out(occupied_);
  for (int& s : out) s += shift;
  return Configuration(std::move(out));
}

std::string Configuration::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < occupied_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(occupied_[i]);
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// Free functions

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t acc = 1;
  for (int i = 1; i <= k; ++i) {
    // acc * (n - k + i) / i stays integral at every step.
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (acc > std::numeric_limits<std::uint64_t>::max() / num) {
      throw std::overflow_error("binomial overflow");
    }
    acc = acc * num / static_cast<std::uint64_t>(i);
  }
  return acc;
}

int cluster_count(const Configuration& x, const Region& region) {
  require_member(x, region);
  const auto s = x.sites();
  int count = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i == 0 || !region.adjacent(s[i - 1], s[i])) ++count;
  }
  return count;
}

Distance dist_d1(const Configuration& x, const Configuration& y, const Region& region) {
  require_member(x, region);
  require_member(y, region);
  if (x.size() != y.size()) return Distance::infinite();
  Distance acc = Distance::finite(0);
  for (int i = 0; i < x.size(); ++i) acc = acc + region.distance(x[i], y[i]);
  return acc;
}

Distance dist_hausdorff(const Configuration& x, const Configuration& y, const Region& region) {
  require_member(x, region);
  require_member(y, region);
  if (x.empty() && y.empty()) return Distance::finite(0);
  Distance worst = Distance::finite(0);
  for (int u : x.sites()) worst = std::max(worst, point_to_set(u, y, region));
  for (int v : y.sites()) worst = std::max(worst, point_to_set(v, x, region));
  return worst;
}

Distance dist_modified_hausdorff(const Configuration& x, const Configuration& y,
                                 const Region& region) {
  if (x.size() != y.size()) {
    require_member(x, region);
    require_member(y, region);
    return Distance::infinite();
  }
  return dist_hausdorff(x, y, region);
}

std::vector<Configuration> enumerate_sector(const Region& region, int n) {
  const int size = region.size();
  if (n < 0 || n > size) {
    throw DomainError("particle number " + std::to_string(n) + " outside [0, " +
                      std::to_string(size) + "]");
  }
  const std::uint64_t count = binomial(size, n);
  if (count > kMaxSectorSize) throw DomainError("sector too large to enumerate");

  std::vector<Configuration> out;
  out.reserve(static_cast<std::size_t>(count));
  const auto sites = region.sites();
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  std::vector<int> occ(static_cast<std::size_t>(n));
  while (true) {
    for (int i = 0; i < n; ++i) {
      occ[static_cast<std::size_t>(i)] = sites[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    }
    out.emplace_back(occ);
    // Colex successor: bump the lowest index that can move, reset those below it.
    int j = 0;
    while (j < n) {
      const int limit = (j + 1 < n) ? idx[static_cast<std::size_t>(j + 1)] : size;
      if (idx[static_cast<std::size_t>(j)] + 1 < limit) break;
      ++j;
    }
    if (j == n) break;
    ++idx[static_cast<std::size_t>(j)];
    for (int i = 0; i < j; ++i) idx[static_cast<std::size_t>(i)] = i;
  }
  return out;
}

std::vector<Configuration> enumerate_bounded_clusters(const Region& region, int n, int k) {
  if (k < 1) throw DomainError("cluster bound k must be >= 1");
  std::vector<Configuration> out;
  for (auto& x : enumerate_sector(region, n)) {
    const int w = cluster_count(x, region);
    if (w >= 1 && w <= k) out.push_back(std::move(x));
  }
  return out;
}

std::vector<Hop> hop_neighbors(const Configuration& x, const Region& region) {
  require_member(x, region);
  std::vector<Hop> out;
  const auto s = x.sites();
  for (std::size_t p = 0; p < s.size(); ++p) {
    for (int step : {-1, +1}) {
      const int to = s[p] + step;
      if (!region.adjacent(s[p], to) || x.contains(to)) continue;
      std::vector<int> moved(s.begin(), s.end());
      moved[p] = to;
      std::sort(moved.begin(), moved.end());
      out.push_back({Configuration(std::move(moved)), s[p], to});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// SectorBasis

SectorBasis::SectorBasis(Region region, int n_particles)
    : region_(std::move(region)), n_(n_particles), configs_(enumerate_sector(region_, n_particles)) {}

bool SectorBasis::contains(const Configuration& x) const {
  if (x.size() != n_) return false;
  return std::all_of(x.sites().begin(), x.sites().end(),
                     [this](int s) { return region_.contains(s); });
}

std::size_t SectorBasis::rank(const Configuration& x) const {
  if (!contains(x)) {
    throw DomainError(x.to_string() + " is not in the " + std::to_string(n_) + "-particle sector");
  }
  std::uint64_t r = 0;
  for (int i = 0; i < n_; ++i) {
    r += binomial(region_.index_of(x[static_cast<std::size_t>(i)]), i + 1);
  }
  return static_cast<std::size_t>(r);
}

}  // namespace xxzloc
