#include "xxzloc/exp_sums.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "xxzloc/errors.hpp"
#include "xxzloc/oracles.hpp"

namespace xxzloc {

namespace {

constexpr double kCertificate = 1e-12;
constexpr int kMaxRadius = 4096;

int default_radius(double alpha) { return std::max(1, static_cast<int>(std::ceil(60.0 / alpha))); }

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be > 0");
}

// Region-free cluster count on Z.
int clusters_on_z(const Configuration& x) {
  int c = 0;
  for (int i = 0; i < x.size(); ++i) {
    if (i == 0 || x[static_cast<std::size_t>(i)] != x[static_cast<std::size_t>(i - 1)] + 1) ++c;
  }
  return c;
}

SumBoundResult certified_d1(const Configuration& y, int k, double alpha, int R, double bound) {
  const bool automatic = R <= 0;
  if (automatic) R = default_radius(alpha);
  while (true) {
    SumBoundResult res;
    res.radius = R;
    res.value = d1_window_sum(y, k, alpha, R);
    res.last_increment = res.value - d1_window_sum(y, k, alpha, R - 1);
    res.certified = res.last_increment <= kCertificate * res.value;
    res.bound = bound;
    res.within_bound = res.value <= bound;
    if (res.certified) return res;
    if (!automatic || 2 * R > kMaxRadius) {
      throw NumericalRefusal(fmt::format(
          "d1 sum not certified at R = {} (last shell {:.3e} of {:.3e}); use a larger R", R,
          res.last_increment, res.value));
    }
    R *= 2;
  }
}

}  // namespace

double d1_window_sum(const Configuration& y, int k, double alpha, int R) {
  const int n = y.size();
  const int lo = y[0] - R;
  const int hi = y[static_cast<std::size_t>(n - 1)] + R;
  // state (j placed, c clusters, previous site occupied)
  const auto at = [k](int j, int c, int occ) { return (j * (k + 1) + c) * 2 + occ; };
  std::vector<double> cur(static_cast<std::size_t>((n + 1) * (k + 1) * 2), 0.0), next;
  cur[static_cast<std::size_t>(at(0, 0, 0))] = 1.0;
  for (int p = lo; p <= hi; ++p) {
    next.assign(cur.size(), 0.0);
    for (int j = 0; j <= n; ++j) {
      for (int c = 0; c <= k; ++c) {
        for (int occ = 0; occ < 2; ++occ) {
          const double w = cur[static_cast<std::size_t>(at(j, c, occ))];
          if (w == 0.0) continue;
          next[static_cast<std::size_t>(at(j, c, 0))] += w;
          if (j == n) continue;
          const int c2 = occ ? c : c + 1;
          if (c2 > k) continue;
          const double f = std::exp(-alpha * std::abs(p - y[static_cast<std::size_t>(j)]));
          next[static_cast<std::size_t>(at(j + 1, c2, 1))] += w * f;
        }
      }
    }
    cur.swap(next);
  }
  double total = 0.0;
  for (int c = 1; c <= k; ++c) {
    for (int occ = 0; occ < 2; ++occ) total += cur[static_cast<std::size_t>(at(n, c, occ))];
  }
  return total;
}

SumBoundResult exp_sum_d1(const Configuration& y, int k, double alpha, int R) {
  require_alpha(alpha);
  const int n = y.size();
  if (n < 1 || k < 1 || k > n) throw DomainError("need 1 <= k <= N");
  return certified_d1(y, k, alpha, R, std::pow(c_alpha(alpha), k + 1));
}

SumBoundResult exp_sum_d1_dual(const Configuration& x, double alpha, int R) {
  require_alpha(alpha);
  if (x.empty()) throw DomainError("need N >= 1");
  return certified_d1(x, x.size(), alpha, R, std::pow(c_alpha(alpha), clusters_on_z(x)));
}

// ---------------------------------------------------------------------------

std::vector<std::uint64_t> hausdorff_ball_counts(const Configuration& x, int k, int r) {
  const int n = x.size();
  if (n < 1 || k < 1) throw DomainError("need N >= 1 and k >= 1");
  if (r < 0) return std::vector<std::uint64_t>(static_cast<std::size_t>(k) + 1, 0);
  const int lo = x[0] - r;
  const int hi = x[static_cast<std::size_t>(n - 1)] + r;
  const int none = 2 * r + 1;  // gap value meaning "no y point within reach"
  const int gaps = none + 1;
  const auto at = [&](int j, int c, int occ, int g) { return ((j * (k + 1) + c) * 2 + occ) * gaps + g; };
  using u128 = unsigned __int128;
  std::vector<u128> cur(static_cast<std::size_t>((n + 1) * (k + 1) * 2 * gaps), 0), next;
  cur[static_cast<std::size_t>(at(0, 0, 0, none))] = 1;

  std::size_t xi = 0;  // next x point whose window closes
  for (int p = lo; p <= hi; ++p) {
    bool allowed = false;
    for (int u : x.sites()) allowed = allowed || std::abs(p - u) <= r;
    next.assign(cur.size(), 0);
    for (int j = 0; j <= n; ++j) {
      for (int c = 0; c <= k; ++c) {
        for (int occ = 0; occ < 2; ++occ) {
          for (int g = 0; g < gaps; ++g) {
            const u128 w = cur[static_cast<std::size_t>(at(j, c, occ, g))];
            if (w == 0) continue;
            next[static_cast<std::size_t>(at(j, c, 0, std::min(g + 1, none)))] += w;
            if (!allowed || j == n) continue;
            const int c2 = occ ? c : c + 1;
            if (c2 > k) continue;
            next[static_cast<std::size_t>(at(j + 1, c2, 1, 0))] += w;
          }
        }
      }
    }
    // Windows [u - r, u + r] ending here must contain a y point.
    while (xi < static_cast<std::size_t>(n) && x[xi] + r == p) {
      for (int j = 0; j <= n; ++j)
        for (int c = 0; c <= k; ++c)
          for (int occ = 0; occ < 2; ++occ) next[static_cast<std::size_t>(at(j, c, occ, none))] = 0;
      ++xi;
    }
    cur.swap(next);
  }
  std::vector<std::uint64_t> out(static_cast<std::size_t>(k) + 1, 0);
  for (int c = 0; c <= k; ++c) {
    u128 total = 0;
    for (int occ = 0; occ < 2; ++occ)
      for (int g = 0; g < gaps; ++g) total += cur[static_cast<std::size_t>(at(n, c, occ, g))];
    if (total > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("ball count overflow");
    out[static_cast<std::size_t>(c)] = static_cast<std::uint64_t>(total);
  }
  return out;
}

HausdorffSumResult exp_sum_dh(const Configuration& x, int k, double alpha, int R) {
  require_alpha(alpha);
  const int n = x.size();
  if (n < 1 || k < 1 || k > n) throw DomainError("need 1 <= k <= N");
  if (clusters_on_z(x) > k) throw DomainError("x must have at most k clusters");
  HausdorffSumResult res;
  std::vector<std::uint64_t> prev(static_cast<std::size_t>(k) + 1, 0);
  double sum = 0.0;
  double last_term = INFINITY;
  const int limit = R > 0 ? R : kMaxRadius;
  for (int r = 0; r <= limit; ++r) {
    const auto ball = hausdorff_ball_counts(x, k, r);
    ShellCounts shell{r, std::vector<std::uint64_t>(static_cast<std::size_t>(k) + 1, 0)};
    std::uint64_t total = 0;
    for (int m = 1; m <= k; ++m) {
      shell.by_clusters[static_cast<std::size_t>(m)] = ball[static_cast<std::size_t>(m)] - prev[static_cast<std::size_t>(m)];
      total += shell.by_clusters[static_cast<std::size_t>(m)];
    }
    const double term = std::exp(-alpha * r) * static_cast<double>(total);
    sum += term;
    res.shells.push_back(std::move(shell));
    prev = ball;
    res.sum.radius = r;
    res.sum.last_increment = term;
    // Shell sizes grow polynomially, so past the peak the terms shrink
    // geometrically and the last one certifies the tail.
    const bool past_peak = term <= last_term;
    last_term = term;
    if (R <= 0 && r > 0 && past_peak && term <= kCertificate * sum) break;
  }
  res.sum.value = sum;
  res.sum.certified = res.sum.last_increment <= kCertificate * sum;
  if (!res.sum.certified) {
    throw NumericalRefusal(fmt::format("dH sum not certified at R = {} (last shell {:.3e} of {:.3e})",
                                       res.sum.radius, res.sum.last_increment, sum));
  }
  res.sum.bound = std::pow(static_cast<double>(n), 2 * k);
  res.ratio = sum / res.sum.bound;
  res.sum.within_bound = true;  // the constant C_{α,k} is not explicit; only the ratio is tracked
  return res;
}

}  // namespace xxzloc
