#include "xxzloc/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "xxzloc/errors.hpp"

namespace xxzloc {

cplx green(const SectorOperator& H, cplx z, const Configuration& x, const Configuration& y) {
  if (x.size() != y.size()) return 0.0;
  const SectorBasis& b = H.basis();
  const auto ix = static_cast<Index>(b.rank(x));
  const auto iy = static_cast<Index>(b.rank(y));
  return ShiftedSolve(H.matrix(), z).column(iy)(ix);
}

std::string to_string(DistanceKind k) {
  switch (k) {
    case DistanceKind::d1: return "d1";
    case DistanceKind::dH: return "dH";
    case DistanceKind::dH_mod: return "dH_mod";
  }
  return "?";
}

DistanceKind parse_distance_kind(const std::string& s) {
  if (s == "d1") return DistanceKind::d1;
  if (s == "dH") return DistanceKind::dH;
  if (s == "dH_mod") return DistanceKind::dH_mod;
  throw DomainError("unknown distance kind '" + s + "'");
}

Distance config_distance(DistanceKind k, const Configuration& x, const Configuration& y,
                         const Region& region) {
  switch (k) {
    case DistanceKind::d1: return dist_d1(x, y, region);
    case DistanceKind::dH: return dist_hausdorff(x, y, region);
    case DistanceKind::dH_mod: return dist_modified_hausdorff(x, y, region);
  }
  return Distance::infinite();
}

// ---------------------------------------------------------------------------

DecayFit decay_fit(std::span<const DecayPoint> points, DistanceKind kind, FitRange range) {
  std::map<std::int64_t, std::vector<double>> groups;
  std::size_t infinite = 0;
  for (const auto& p : points) {
    if (!p.distance.is_finite()) {
      ++infinite;
      continue;
    }
    groups[p.distance.value()].push_back(p.value);
  }
  std::vector<DecayBin> bins;
  for (const auto& [d, vals] : groups) {
    const MCEstimate e(0, 0, vals);
    bins.push_back({d, e.mean(), e.standard_error(), e.count(), e.excluded()});
  }
  return fit_bins(std::move(bins), kind, range, infinite);
}

DecayFit fit_bins(std::vector<DecayBin> bins, DistanceKind kind, FitRange range,
                  std::size_t dropped_infinite) {
  DecayFit fit;
  fit.kind = kind;
  fit.dropped_infinite = dropped_infinite;
  for (auto& b : bins) {
    if (b.distance < range.lo || b.distance > range.hi) {
      ++fit.dropped_range;
    } else if (!(b.mean > 0.0) || !std::isfinite(b.mean)) {
      ++fit.dropped_nonpositive;
    } else {
      fit.bins.push_back(b);
    }
  }
  std::sort(fit.bins.begin(), fit.bins.end(),
            [](const DecayBin& a, const DecayBin& b) { return a.distance < b.distance; });
  const std::size_t n = fit.bins.size();
  if (n < 3) {
    throw NumericalRefusal(fmt::format(
        "fit refused: {} usable distance bins (need 3; {} non-positive, {} out of range)", n,
        fit.dropped_nonpositive, fit.dropped_range));
  }
  double mx = 0.0, my = 0.0;
  for (const auto& b : fit.bins) {
    mx += static_cast<double>(b.distance);
    my += std::log(b.mean);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& b : fit.bins) {
    const double dx = static_cast<double>(b.distance) - mx;
    const double dy = std::log(b.mean) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (const auto& b : fit.bins) {
    const double r = std::log(b.mean) - (fit.intercept + fit.slope * static_cast<double>(b.distance));
    ssr += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  fit.slope_stderr = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  return fit;
}

// ---------------------------------------------------------------------------

EigencorrelatorTable::EigencorrelatorTable(const EigenDecomposition& d, const EnergyInterval& interval)
    : d_(&d) {
  for (const auto& c : spectral_clusters(d)) {
    if (interval.contains(c.value)) ranges_.push_back(c);
  }
}

double EigencorrelatorTable::operator()(Index x, Index y) const {
  const Matrix& v = d_->vectors;
  double total = 0.0;
  for (const auto& c : ranges_) {
    double p = 0.0;
    for (Index k = c.first; k < c.last; ++k) p += v(x, k) * v(y, k);
    total += std::abs(p);
  }
  return total;
}

EigencorrelatorResult eigencorrelator(const EigenDecomposition& d, const SectorBasis& basis,
                                      const EnergyInterval& interval, const Configuration& x,
                                      const Configuration& y) {
  EigencorrelatorTable table(d, interval);
  EigencorrelatorResult r{0.0, interval, table.clusters_used()};
  if (x.size() != y.size()) return r;
  r.value = table(static_cast<Index>(basis.rank(x)), static_cast<Index>(basis.rank(y)));
  return r;
}

EigencorrelatorResult eigencorrelator(const SectorOperator& H, const EnergyInterval& interval,
                                      const Configuration& x, const Configuration& y) {
  const auto d = eig_sym(H);
  return eigencorrelator(d, H.basis(), interval, x, y);
}

// ---------------------------------------------------------------------------

LocalizationCenter localization_center(const Vector& psi, const SectorBasis& basis) {
  if (psi.size() != static_cast<Index>(basis.size())) throw DomainError("state does not match basis");
  if (std::abs(psi.norm() - 1.0) > 1e-8) {
    throw DomainError(fmt::format("state not normalized (norm {})", psi.norm()));
  }
  const double power = basis.n_particles() + 1;
  std::vector<double> w(basis.size());
  double z = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    w[i] = std::pow(basis[i].l2_norm() + 1.0, -power);
    z += w[i];
  }
  std::size_t best = 0;
  double best_ratio = -1.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double ratio = psi(static_cast<Index>(i)) * psi(static_cast<Index>(i)) * z / w[i];
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = i;
    }
  }
  return {basis[best], best_ratio, best_ratio >= 1.0 - 1e-12};
}

double ipr(const Vector& psi) { return psi.array().square().square().sum(); }

double mass_near(const Vector& psi, const SectorBasis& basis, const Configuration& center,
                 std::int64_t r, DistanceKind kind) {
  double m = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Distance d = config_distance(kind, center, basis[i], basis.region());
    if (d <= Distance::finite(r)) m += psi(static_cast<Index>(i)) * psi(static_cast<Index>(i));
  }
  return m;
}

// ---------------------------------------------------------------------------

std::vector<Configuration> large_deviation_set(const Region& region, const Configuration& anchor,
                                               int k) {
  if (anchor.empty()) throw DomainError("large-deviation anchor must be nonempty");
  if (cluster_count(anchor, region) != 1) throw DomainError("large-deviation anchor must be one cluster");
  const int n = anchor.size();
  std::vector<int> s;
  for (int site : region.sites()) {
    if (site >= anchor[0] - n && site <= anchor[static_cast<std::size_t>(n - 1)] + n) s.push_back(site);
  }
  return enumerate_bounded_clusters(Region::from_sites(std::move(s)), n, k);
}

bool large_deviation_event(const std::vector<Configuration>& set, const DisorderSample& omega,
                           const ModelParams& params, int k) {
  const double threshold = k * params.gap();
  for (const auto& u : set) {
    double v = 0.0;
    for (int s : u.sites()) v += omega.at(s);
    if (params.lambda * v < threshold) return true;
  }
  return false;
}

LargeDeviationResult large_deviation_probe(const LargeDeviationConfig& cfg) {
  cfg.params.validate();
  // q = 0 gives an empty 𝒫_{N,0} and a zero threshold: the event never occurs.
  const int k = cfg.q.ceil();
  const auto set = k >= 1 ? large_deviation_set(cfg.region, cfg.anchor, k) : std::vector<Configuration>{};
  const Region& region = cfg.region;
  auto estimand = [&](const SampleInfo& s) {
    const auto omega = sample_field(region, cfg.law, s.seed);
    return large_deviation_event(set, omega, cfg.params, k) ? 1.0 : 0.0;
  };
  return {monte_carlo(estimand, cfg.n_samples, cfg.seed, cfg.workers), set.size(),
          k * cfg.params.gap()};
}

}  // namespace xxzloc
