#pragma once

// Per-realization estimators: Green functions, eigencorrelators, localization
// centers, IPR, the large-deviation event, and log-linear decay fits.

#include <optional>
#include <string>
#include <vector>

#include "xxzloc/config_space.hpp"
#include "xxzloc/monte_carlo.hpp"
#include "xxzloc/numerics.hpp"
#include "xxzloc/operators.hpp"

namespace xxzloc {

/// G_z(x, y) = <φ_x, (H - z)^{-1} φ_y>. Zero when |x| != |y| (different
/// sectors); NumericalRefusal at a near-singular real shift.
cplx green(const SectorOperator& H, cplx z, const Configuration& x, const Configuration& y);

enum class DistanceKind { d1, dH, dH_mod };
std::string to_string(DistanceKind k);
DistanceKind parse_distance_kind(const std::string& s);
Distance config_distance(DistanceKind k, const Configuration& x, const Configuration& y,
                         const Region& region);

struct DecayPoint {
  Distance distance;
  double value = 0.0;
};

struct DecayBin {
  std::int64_t distance = 0;
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t n = 0;         // values (or samples) behind the mean
  std::size_t excluded = 0;  // non-finite samples dropped upstream
};

struct FitRange {
  std::int64_t lo = 0;
  std::int64_t hi = std::numeric_limits<std::int64_t>::max();
};

struct DecayFit {
  DistanceKind kind = DistanceKind::dH_mod;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0;
  std::vector<DecayBin> bins;  // bins that entered the regression
  std::size_t dropped_infinite = 0;
  std::size_t dropped_nonpositive = 0;  // bins with mean <= 0
  std::size_t dropped_range = 0;
};

/// Least squares of log(bin mean) on integer distance. Throws NumericalRefusal
/// with fewer than 3 usable bins.
DecayFit decay_fit(std::span<const DecayPoint> points, DistanceKind kind, FitRange range = {});
/// Same regression on bins whose means were formed elsewhere.
DecayFit fit_bins(std::vector<DecayBin> bins, DistanceKind kind, FitRange range = {},
                  std::size_t dropped_infinite = 0);

struct EigencorrelatorResult {
  double value = 0.0;
  EnergyInterval interval;
  std::size_t clusters_used = 0;
};

/// Σ over spectral clusters ν in I of |π_ν(x, y)|.
EigencorrelatorResult eigencorrelator(const EigenDecomposition& d, const SectorBasis& basis,
                                      const EnergyInterval& interval, const Configuration& x,
                                      const Configuration& y);
EigencorrelatorResult eigencorrelator(const SectorOperator& H, const EnergyInterval& interval,
                                      const Configuration& x, const Configuration& y);

/// Precomputed clusters inside one window, for many pair reads per realization.
class EigencorrelatorTable {
 public:
  EigencorrelatorTable(const EigenDecomposition& d, const EnergyInterval& interval);
  double operator()(Index x, Index y) const;
  std::size_t clusters_used() const { return ranges_.size(); }

 private:
  const EigenDecomposition* d_;
  std::vector<SpectralCluster> ranges_;
};

struct LocalizationCenter {
  Configuration center;
  double ratio = 0.0;  // |ψ(x*)|² / (w(x*)/Σ_u w(u)); >= 1 by pigeonhole
  bool inequality_holds = false;
};

/// argmax of |ψ(x)|² (|x|₂+1)^{N+1}. Throws DomainError unless ‖ψ‖ = 1 to 1e-8.
LocalizationCenter localization_center(const Vector& psi, const SectorBasis& basis);

/// Σ |ψ(x)|⁴.
double ipr(const Vector& psi);

/// ‖ψ‖² carried by configurations within distance r of `center`.
double mass_near(const Vector& psi, const SectorBasis& basis, const Configuration& center,
                 std::int64_t r, DistanceKind kind = DistanceKind::dH_mod);

/// Configurations with at most k clusters in [x]_N, the sites within N of x.
std::vector<Configuration> large_deviation_set(const Region& region, const Configuration& anchor,
                                               int k);
/// True when λ Σ_{i∈u} ω_i < k g for some u in `set`.
bool large_deviation_event(const std::vector<Configuration>& set, const DisorderSample& omega,
                           const ModelParams& params, int k);

struct LargeDeviationConfig {
  Region region;
  Configuration anchor;  // single cluster; N = |anchor|
  ModelParams params;
  HalfInteger q;
  std::size_t n_samples = 1000;
  std::uint64_t seed = 1;
  Distribution law;
  int workers = 0;
};
struct LargeDeviationResult {
  MCEstimate frequency;
  std::size_t set_size = 0;
  double threshold = 0.0;  // ⌈q⌉ g
};
LargeDeviationResult large_deviation_probe(const LargeDeviationConfig& cfg);

}  // namespace xxzloc
