#include "xxzloc/scans.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include <fmt/format.h>

#include "xxzloc/errors.hpp"

namespace xxzloc {

std::vector<PairSpec> anchored_pairs(const Region& region, const Configuration& anchor) {
  std::vector<PairSpec> out;
  if (anchor.empty()) return out;
  const int span = region.sites().back() - anchor[0];
  for (int d = 0; d <= span; ++d) {
    const Configuration y = anchor.translated(d);
    const auto s = y.sites();
    if (std::all_of(s.begin(), s.end(), [&](int v) { return region.contains(v); })) {
      out.push_back({anchor, y});
    }
  }
  return out;
}

std::vector<PairSpec> random_pairs(const Region& region, int n, std::size_t count, std::uint64_t seed) {
  const SectorBasis basis(region, n);
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
  std::vector<PairSpec> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t a = pick(gen);
    const std::size_t b = pick(gen);
    out.push_back({basis[a], basis[b]});
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Pairs grouped by their x so one column solve serves every y.
struct PairIndex {
  std::vector<Index> x_rank;  // per distinct x
  std::vector<std::vector<std::pair<std::size_t, Index>>> reads;  // (pair, y rank)
  std::vector<std::size_t> cross_sector;  // pairs with |x| != |y|
};

PairIndex index_pairs(const std::vector<PairSpec>& pairs, const SectorBasis& basis) {
  PairIndex idx;
  std::map<Index, std::size_t> slot;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto& [x, y] = pairs[p];
    if (x.size() != y.size()) {
      idx.cross_sector.push_back(p);
      continue;
    }
    const auto rx = static_cast<Index>(basis.rank(x));
    const auto ry = static_cast<Index>(basis.rank(y));
    auto [it, fresh] = slot.try_emplace(rx, idx.x_rank.size());
    if (fresh) {
      idx.x_rank.push_back(rx);
      idx.reads.emplace_back();
    }
    idx.reads[it->second].emplace_back(p, ry);
  }
  return idx;
}

std::vector<PairRecord> records_from(const std::vector<PairSpec>& pairs,
                                     std::vector<MCEstimate> estimates, DistanceKind kind,
                                     const Region& region) {
  std::vector<PairRecord> out;
  out.reserve(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    out.push_back({pairs[p], config_distance(kind, pairs[p].x, pairs[p].y, region),
                   std::move(estimates[p])});
  }
  return out;
}

void require_pairs(const ScanConfig& cfg) {
  if (cfg.pairs.empty()) throw DomainError("scan needs at least one pair");
  cfg.params.validate();
}

}  // namespace

ScanResult bin_and_fit(std::vector<PairRecord> records, DistanceKind kind, FitRange range) {
  ScanResult res;
  std::map<std::int64_t, std::vector<const PairRecord*>> groups;
  for (const auto& r : records) {
    if (!r.distance.is_finite()) {
      ++res.dropped_infinite;
      continue;
    }
    groups[r.distance.value()].push_back(&r);
  }
  for (const auto& [d, members] : groups) {
    DecayBin b;
    b.distance = d;
    double var = 0.0;
    for (const auto* r : members) {
      b.mean += r->estimate.mean();
      var += r->estimate.standard_error() * r->estimate.standard_error();
      b.n += r->estimate.count();
      b.excluded += r->estimate.excluded();
    }
    const auto m = static_cast<double>(members.size());
    b.mean /= m;
    b.standard_error = std::sqrt(var) / m;
    res.bins.push_back(b);
  }
  try {
    res.fit = fit_bins(res.bins, kind, range, res.dropped_infinite);
  } catch (const NumericalRefusal& e) {
    res.fit_error = e.what();
  }
  res.pairs = std::move(records);
  return res;
}

ScanResult fractional_moment_scan(const ScanConfig& cfg, double s, cplx z) {
  if (!(s > 0.0 && s <= 1.0 / 3.0)) throw DomainError(fmt::format("s must lie in (0, 1/3] (got {})", s));
  require_pairs(cfg);
  const auto basis = make_basis(cfg.region, cfg.n_particles);
  const PairIndex idx = index_pairs(cfg.pairs, *basis);
  const std::size_t m = cfg.pairs.size();

  auto estimand = [&](const SampleInfo& info) {
    const auto omega = sample_field(cfg.region, cfg.law, info.seed);
    const auto H = assemble_hamiltonian(basis, cfg.params, omega);
    std::vector<double> out(m, 0.0);
    const ShiftedSolve solve(H.matrix(), z);
    if (solve.near_singular()) {
      for (std::size_t p = 0; p < m; ++p) out[p] = NAN;
      for (std::size_t p : idx.cross_sector) out[p] = 0.0;
      return out;
    }
    for (std::size_t k = 0; k < idx.x_rank.size(); ++k) {
      // (H - z) is complex symmetric, so G(x, y) = G(y, x).
      const CVector col = solve.column(idx.x_rank[k]);
      for (const auto& [p, ry] : idx.reads[k]) out[p] = std::pow(std::abs(col(ry)), s);
    }
    return out;
  };
  auto est = monte_carlo_vector(estimand, cfg.n_samples, cfg.seed, cfg.workers);
  return bin_and_fit(records_from(cfg.pairs, std::move(est), cfg.kind, cfg.region), cfg.kind, cfg.range);
}

ScanResult eigencorrelator_scan(const ScanConfig& cfg, HalfInteger q) {
  require_pairs(cfg);
  const auto basis = make_basis(cfg.region, cfg.n_particles);
  const PairIndex idx = index_pairs(cfg.pairs, *basis);
  const EnergyInterval window = EnergyWindow{q, cfg.params.delta}.at_most();
  const std::size_t m = cfg.pairs.size();

  auto estimand = [&](const SampleInfo& info) {
    const auto omega = sample_field(cfg.region, cfg.law, info.seed);
    const auto d = eig_sym(assemble_hamiltonian(basis, cfg.params, omega));
    const EigencorrelatorTable table(d, window);
    std::vector<double> out(m, 0.0);
    for (std::size_t k = 0; k < idx.x_rank.size(); ++k) {
      for (const auto& [p, ry] : idx.reads[k]) out[p] = table(idx.x_rank[k], ry);
    }
    return out;
  };
  auto est = monte_carlo_vector(estimand, cfg.n_samples, cfg.seed, cfg.workers);
  return bin_and_fit(records_from(cfg.pairs, std::move(est), cfg.kind, cfg.region), cfg.kind, cfg.range);
}

AprioriReport apriori_moment_check(const ScanConfig& cfg, double s_prime, const std::vector<cplx>& z_grid) {
  if (!(s_prime > 0.0 && s_prime < 1.0)) throw DomainError("s' must lie in (0, 1)");
  if (z_grid.empty()) throw DomainError("empty z grid");
  require_pairs(cfg);
  const auto basis = make_basis(cfg.region, cfg.n_particles);
  const PairIndex idx = index_pairs(cfg.pairs, *basis);
  const std::size_t m = cfg.pairs.size();
  const std::size_t nz = z_grid.size();

  // Component z * m + p holds pair p at grid point z.
  auto estimand = [&](const SampleInfo& info) {
    const auto omega = sample_field(cfg.region, cfg.law, info.seed);
    const auto H = assemble_hamiltonian(basis, cfg.params, omega);
    std::vector<double> out(m * nz, 0.0);
    for (std::size_t iz = 0; iz < nz; ++iz) {
      const ShiftedSolve solve(H.matrix(), z_grid[iz]);
      for (std::size_t k = 0; k < idx.x_rank.size(); ++k) {
        if (solve.near_singular()) {
          for (const auto& [p, ry] : idx.reads[k]) out[iz * m + p] = NAN;
          continue;
        }
        const CVector col = solve.column(idx.x_rank[k]);
        for (const auto& [p, ry] : idx.reads[k]) out[iz * m + p] = std::pow(std::abs(col(ry)), s_prime);
      }
    }
    return out;
  };
  auto est = monte_carlo_vector(estimand, cfg.n_samples, cfg.seed, cfg.workers);

  AprioriReport rep;
  for (std::size_t p = 0; p < m; ++p) {
    double lo = INFINITY, hi = 0.0;
    for (std::size_t iz = 0; iz < nz; ++iz) {
      const MCEstimate& e = est[iz * m + p];
      rep.rows.push_back({p, z_grid[iz], e});
      if (e.excluded() > 0 || !std::isfinite(e.mean())) rep.all_finite = false;
      lo = std::min(lo, e.mean());
      hi = std::max(hi, e.mean());
    }
    if (lo > 0.0) rep.max_min_ratio = std::max(rep.max_min_ratio, hi / lo);
  }
  return rep;
}

// ---------------------------------------------------------------------------

std::vector<double> default_re_grid(HalfInteger window, const ModelParams& params) {
  const double u = EnergyWindow{window, params.delta}.upper();
  return {0.0, 0.5 * u, 0.999 * u};
}

CTReport combes_thomas_check(const CTConfig& cfg) {
  cfg.params.validate();
  if (!cfg.lifted && cfg.window.twice() > 1) {
    throw DomainError("Combes-Thomas check without a lift needs m <= 1/2");
  }
  if (cfg.pairs.empty()) throw DomainError("Combes-Thomas check needs pairs");
  const auto basis = make_basis(cfg.region, cfg.n_particles);
  const EnergyInterval window = EnergyWindow{cfg.window, cfg.params.delta}.at_most();
  const auto re = cfg.re_grid.empty() ? default_re_grid(cfg.window, cfg.params) : cfg.re_grid;

  CTReport rep;
  for (double e : re) {
    if (!window.contains(e)) throw DomainError(fmt::format("Re z = {} lies outside {}", e, window.to_string()));
    for (double eta : cfg.im_grid) {
      if (!(eta > 0.0)) throw DomainError("Im z must be positive");
      rep.z_grid.emplace_back(e, eta);
    }
  }
  const PairIndex idx = index_pairs(cfg.pairs, *basis);
  const std::size_t m = cfg.pairs.size();
  for (const auto& p : cfg.pairs) {
    rep.distances.push_back(dist_d1(p.x, p.y, cfg.region));
    if (!rep.distances.back().is_finite()) ++rep.infinite_pairs;
  }
  const std::optional<Lift> lift =
      cfg.lifted ? std::optional<Lift>(lift_term(basis, cfg.window, cfg.params)) : std::nullopt;

  // Components: sup_z |G| for each pair.
  auto estimand = [&](const SampleInfo& info) {
    const auto omega = sample_field(cfg.region, cfg.law, info.seed);
    auto H = assemble_hamiltonian(basis, cfg.params, omega);
    if (lift) H = H + lift->op * lift->coefficient;
    std::vector<double> sup(m, 0.0);
    for (const cplx& z : rep.z_grid) {
      const ShiftedSolve solve(H.matrix(), z);
      for (std::size_t k = 0; k < idx.x_rank.size(); ++k) {
        const CVector col = solve.column(idx.x_rank[k]);
        for (const auto& [p, ry] : idx.reads[k]) sup[p] = std::max(sup[p], std::abs(col(ry)));
      }
    }
    return sup;
  };
  rep.sup_green = monte_carlo_vector(estimand, cfg.n_samples, cfg.seed, cfg.workers);

  rep.min_rate = INFINITY;
  rep.all_positive = true;
  for (std::size_t i = 0; i < cfg.n_samples; ++i) {
    std::vector<DecayPoint> pts;
    for (std::size_t p = 0; p < m; ++p) {
      const double v = rep.sup_green[p].values()[i];
      if (rep.distances[p].is_finite()) {
        pts.push_back({rep.distances[p], v});
      } else {
        rep.cut_leak = std::max(rep.cut_leak, v);
      }
    }
    CTSample s;
    s.index = i;
    try {
      const DecayFit f = decay_fit(pts, DistanceKind::d1);
      s.rate = -f.slope;
      s.r_squared = f.r_squared;
      s.fitted = true;
    } catch (const NumericalRefusal&) {
      s.fitted = false;
    }
    rep.all_positive = rep.all_positive && s.fitted && s.rate > 0.0;
    rep.min_rate = std::min(rep.min_rate, s.fitted ? s.rate : -INFINITY);
    rep.samples.push_back(s);
  }
  return rep;
}

CTReport lifted_ct_check(CTConfig cfg) {
  cfg.lifted = true;
  return combes_thomas_check(cfg);
}

}  // namespace xxzloc
