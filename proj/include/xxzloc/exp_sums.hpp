#pragma once

// Truncated exponential sums over configurations of Z with convergence
// certificates. The d1 sums run a transfer-matrix recursion over a finite
// window; the Hausdorff sum counts configurations shell by shell.

#include <cstdint>
#include <vector>

#include "xxzloc/config_space.hpp"

namespace xxzloc {

struct SumBoundResult {
  double value = 0.0;
  int radius = 0;                 // R
  double last_increment = 0.0;    // sum(R) - sum(R-1)
  double bound = 0.0;
  bool certified = false;         // last_increment <= 1e-12 * value
  bool within_bound = false;
};

/// Σ_{x ∈ 𝒫_{N,k}(Z)} e^{-α|x-y|₁} with bound C_α^{k+1}; N = |y|.
/// R = 0 picks 60/α; R doubles until certified (NumericalRefusal past 4096).
SumBoundResult exp_sum_d1(const Configuration& y, int k, double alpha, int R = 0);
/// Σ_{y ∈ 𝒫_N(Z)} e^{-α|x-y|₁} with bound C_α^{W(x)}.
SumBoundResult exp_sum_d1_dual(const Configuration& x, double alpha, int R = 0);

/// Same sums restricted to configurations inside [min - R, max + R].
double d1_window_sum(const Configuration& y, int k, double alpha, int R);

struct ShellCounts {
  int r = 0;
  std::vector<std::uint64_t> by_clusters;  // index m = 1..k
};

struct HausdorffSumResult {
  SumBoundResult sum;   // bound field: N^{2k}, for the ratio
  double ratio = 0.0;   // sum / N^{2k}
  std::vector<ShellCounts> shells;
};

/// Number of y with |y| = |x|, W(y) = m and d_H(x, y) <= r, for m = 0..k.
std::vector<std::uint64_t> hausdorff_ball_counts(const Configuration& x, int k, int r);

/// Σ_{y ∈ 𝒫_{N,k}(Z)} e^{-α d_H(x,y)}, N = |x|, summed over shells r <= R.
HausdorffSumResult exp_sum_dh(const Configuration& x, int k, double alpha, int R = 0);

}  // namespace xxzloc
