#pragma once

// Disorder-averaged scans over pair families and the deterministic
// Combes-Thomas checks.

#include <optional>
#include <string>
#include <vector>

#include "xxzloc/disorder.hpp"
#include "xxzloc/estimators.hpp"
#include "xxzloc/monte_carlo.hpp"
#include "xxzloc/operators.hpp"

namespace xxzloc {

struct PairSpec {
  Configuration x;
  Configuration y;
};

/// (anchor, anchor + d) for every d >= 0 keeping the translate inside the region.
std::vector<PairSpec> anchored_pairs(const Region& region, const Configuration& anchor);
/// Independent uniform draws of same-N pairs from the sector.
std::vector<PairSpec> random_pairs(const Region& region, int n, std::size_t count, std::uint64_t seed);

struct ScanConfig {
  Region region;
  int n_particles = 2;
  ModelParams params;
  std::vector<PairSpec> pairs;
  std::size_t n_samples = 100;
  std::uint64_t seed = 1;
  Distribution law;
  int workers = 0;
  DistanceKind kind = DistanceKind::dH_mod;
  FitRange range;
};

struct PairRecord {
  PairSpec pair;
  Distance distance;
  MCEstimate estimate;
};

struct ScanResult {
  std::vector<PairRecord> pairs;
  std::vector<DecayBin> bins;  // every finite-distance bin, before range filtering
  std::size_t dropped_infinite = 0;
  std::optional<DecayFit> fit;
  std::string fit_error;
};

/// E|G_z(x,y)|^s per pair, fitted against the configured distance. s in (0, ⅓].
ScanResult fractional_moment_scan(const ScanConfig& cfg, double s, cplx z);
/// E 𝒬_{I_{<=q}}(x,y) per pair.
ScanResult eigencorrelator_scan(const ScanConfig& cfg, HalfInteger q);

/// Groups pair estimates into integer distance bins and fits them.
ScanResult bin_and_fit(std::vector<PairRecord> records, DistanceKind kind, FitRange range);

struct AprioriRow {
  std::size_t pair = 0;
  cplx z;
  MCEstimate moment;
};
struct AprioriReport {
  std::vector<AprioriRow> rows;
  double max_min_ratio = 0.0;  // worst pair
  bool all_finite = true;
};
/// E|G_z(x,y)|^{s'} over a grid of z for each configured pair. s' in (0,1).
AprioriReport apriori_moment_check(const ScanConfig& cfg, double s_prime, const std::vector<cplx>& z_grid);

struct CTConfig {
  Region region;  // may carry a cut
  int n_particles = 2;
  ModelParams params;
  HalfInteger window = HalfInteger::from_twice(1);  // m, or q when lifted
  bool lifted = false;
  std::vector<double> re_grid;  // empty: default grid inside I_{<=m}
  std::vector<double> im_grid{1e-2, 1e-4, 1e-6};
  std::vector<PairSpec> pairs;
  std::size_t n_samples = 50;
  std::uint64_t seed = 1;
  Distribution law;
  int workers = 0;
};

struct CTSample {
  std::uint64_t index = 0;
  double rate = 0.0;  // minus the fitted slope of log sup_z |G| in d̃_1
  double r_squared = 0.0;
  bool fitted = false;
};

struct CTReport {
  std::vector<cplx> z_grid;
  std::vector<CTSample> samples;
  std::vector<MCEstimate> sup_green;  // per pair, across samples
  std::vector<Distance> distances;    // per pair, d̃_1 on the region graph
  std::size_t infinite_pairs = 0;
  double cut_leak = 0.0;  // max |G| over pairs with d̃_1 = ∞ (exactly 0 expected)
  double min_rate = 0.0;
  bool all_positive = false;
};

/// Default Re z grid {0, u/2, 0.999u} with u the upper end of I_{<=window}.
std::vector<double> default_re_grid(HalfInteger window, const ModelParams& params);

/// Per-sample Combes-Thomas check for H (window m <= ½) or for Ĥ_q when lifted.
CTReport combes_thomas_check(const CTConfig& cfg);
CTReport lifted_ct_check(CTConfig cfg);

}  // namespace xxzloc
