#pragma once

// Seeded Monte Carlo over disorder samples. Sample i always sees seed
// sample_seed(base_seed, i); per-sample values are kept in index order and
// every reduction runs in that order, so results do not depend on scheduling.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace xxzloc {

struct SampleInfo {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
};

class MCEstimate {
 public:
  MCEstimate() = default;
  /// values[i] belongs to sample first_index + i.
  MCEstimate(std::uint64_t base_seed, std::uint64_t first_index, std::vector<double> values);

  double mean() const { return mean_; }
  /// Unbiased sample variance (0 with fewer than two finite values).
  double variance() const { return variance_; }
  double standard_error() const { return stderr_value_; }
  std::size_t count() const { return count_; }
  std::size_t excluded() const { return excluded_; }
  std::size_t n_samples() const { return indices_.size(); }
  std::uint64_t base_seed() const { return base_seed_; }
  std::uint64_t first_index() const { return indices_.empty() ? 0 : indices_.front(); }
  std::uint64_t last_index() const { return indices_.empty() ? 0 : indices_.back(); }

  std::span<const double> values() const { return values_; }
  std::span<const std::uint64_t> indices() const { return indices_; }

  /// Pools two estimates over disjoint sample indices of the same run.
  /// Equal, bit for bit, to the estimate built from all samples at once.
  MCEstimate merged(const MCEstimate& other) const;

  friend bool operator==(const MCEstimate&, const MCEstimate&) = default;

 private:
  MCEstimate(std::uint64_t base_seed, std::vector<std::uint64_t> indices,
             std::vector<double> values);
  void summarize();

  std::uint64_t base_seed_ = 0;
  std::vector<std::uint64_t> indices_;
  std::vector<double> values_;
  double mean_ = 0.0;
  double variance_ = 0.0;
  double stderr_value_ = 0.0;
  std::size_t count_ = 0;
  std::size_t excluded_ = 0;
};

using ScalarEstimand = std::function<double(const SampleInfo&)>;
/// Must return the same number of components for every sample.
using VectorEstimand = std::function<std::vector<double>(const SampleInfo&)>;

/// Worker count from XXZLOC_WORKERS, else the OpenMP default.
int default_workers();

MCEstimate monte_carlo(const ScalarEstimand& f, std::size_t n_samples, std::uint64_t base_seed,
                       int workers = 0);
MCEstimate monte_carlo_serial(const ScalarEstimand& f, std::size_t n_samples,
                              std::uint64_t base_seed);

std::vector<MCEstimate> monte_carlo_vector(const VectorEstimand& f, std::size_t n_samples,
                                           std::uint64_t base_seed, int workers = 0);
std::vector<MCEstimate> monte_carlo_vector_serial(const VectorEstimand& f, std::size_t n_samples,
                                                  std::uint64_t base_seed);

}  // namespace xxzloc
