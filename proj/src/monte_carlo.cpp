#include "xxzloc/monte_carlo.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>

#include "xxzloc/disorder.hpp"
#include "xxzloc/errors.hpp"

namespace xxzloc {

MCEstimate::MCEstimate(std::uint64_t base_seed, std::uint64_t first_index,
                       std::vector<double> values)
    : base_seed_(base_seed), values_(std::move(values)) {
  indices_.resize(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) indices_[i] = first_index + i;
  summarize();
}

MCEstimate::MCEstimate(std::uint64_t base_seed, std::vector<std::uint64_t> indices,
                       std::vector<double> values)
    : base_seed_(base_seed), indices_(std::move(indices)), values_(std::move(values)) {
  summarize();
}

void MCEstimate::summarize() {
  count_ = 0;
  excluded_ = 0;
  double sum = 0.0;
  for (double v : values_) {
    if (std::isfinite(v)) {
      sum += v;
      ++count_;
    } else {
      ++excluded_;
    }
  }
  mean_ = count_ ? sum / static_cast<double>(count_) : 0.0;
  double ss = 0.0;
  for (double v : values_) {
    if (std::isfinite(v)) ss += (v - mean_) * (v - mean_);
  }
  variance_ = count_ > 1 ? ss / static_cast<double>(count_ - 1) : 0.0;
  stderr_value_ = count_ ? std::sqrt(variance_ / static_cast<double>(count_)) : 0.0;
}

MCEstimate MCEstimate::merged(const MCEstimate& other) const {
  if (base_seed_ != other.base_seed_ && !indices_.empty() && !other.indices_.empty()) {
    throw DomainError("cannot merge estimates from different base seeds");
  }
  std::vector<std::uint64_t> idx;
  std::vector<double> vals;
  idx.reserve(indices_.size() + other.indices_.size());
  vals.reserve(idx.capacity());
  std::size_t i = 0, j = 0;
  while (i < indices_.size() || j < other.indices_.size()) {
    const bool take_left =
        j == other.indices_.size() || (i < indices_.size() && indices_[i] < other.indices_[j]);
    if (!take_left && i < indices_.size() && indices_[i] == other.indices_[j]) {
      throw DomainError("merged estimates share sample index " + std::to_string(indices_[i]));
    }
    if (take_left) {
      idx.push_back(indices_[i]);
      vals.push_back(values_[i++]);
    } else {
      idx.push_back(other.indices_[j]);
      vals.push_back(other.values_[j++]);
    }
  }
  const std::uint64_t seed = indices_.empty() ? other.base_seed_ : base_seed_;
  return MCEstimate(seed, std::move(idx), std::move(vals));
}

int default_workers() {
  if (const char* env = std::getenv("XXZLOC_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return omp_get_max_threads();
}

namespace {

void require_samples(std::size_t n) {
  if (n < 2) throw DomainError("Monte Carlo needs at least 2 samples");
}

// Fills out[i] = f(sample i) on `workers` threads; the first exception by
// sample index is rethrown after the loop.
template <class F, class T>
void parallel_fill(const F& f, std::vector<T>& out, std::uint64_t base_seed, int workers) {
  const auto n = static_cast<std::int64_t>(out.size());
  std::vector<std::exception_ptr> errors(out.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::uint64_t>(i);
    try {
      out[static_cast<std::size_t>(i)] = f(SampleInfo{u, sample_seed(base_seed, u)});
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<MCEstimate> split_components(const std::vector<std::vector<double>>& rows,
                                         std::uint64_t base_seed) {
  const std::size_t m = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != m) throw DomainError("vector estimand changed length between samples");
  }
  std::vector<MCEstimate> out;
  out.reserve(m);
  for (std::size_t c = 0; c < m; ++c) {
    std::vector<double> col(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) col[i] = rows[i][c];
    out.emplace_back(base_seed, 0, std::move(col));
  }
  return out;
}

}  // namespace

MCEstimate monte_carlo(const ScalarEstimand& f, std::size_t n_samples, std::uint64_t base_seed,
                       int workers) {
  require_samples(n_samples);
  if (workers <= 0) workers = default_workers();
  std::vector<double> values(n_samples);
  parallel_fill(f, values, base_seed, workers);
  return MCEstimate(base_seed, 0, std::move(values));
}

MCEstimate monte_carlo_serial(const ScalarEstimand& f, std::size_t n_samples,
                              std::uint64_t base_seed) {
  require_samples(n_samples);
  std::vector<double> values(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) values[i] = f(SampleInfo{i, sample_seed(base_seed, i)});
  return MCEstimate(base_seed, 0, std::move(values));
}

std::vector<MCEstimate> monte_carlo_vector(const VectorEstimand& f, std::size_t n_samples,
                                           std::uint64_t base_seed, int workers) {
  require_samples(n_samples);
  if (workers <= 0) workers = default_workers();
  std::vector<std::vector<double>> rows(n_samples);
  parallel_fill(f, rows, base_seed, workers);
  return split_components(rows, base_seed);
}

std::vector<MCEstimate> monte_carlo_vector_serial(const VectorEstimand& f, std::size_t n_samples,
                                                  std::uint64_t base_seed) {
  require_samples(n_samples);
  std::vector<std::vector<double>> rows(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) rows[i] = f(SampleInfo{i, sample_seed(base_seed, i)});
  return split_components(rows, base_seed);
}

}  // namespace xxzloc
