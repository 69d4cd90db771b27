#pragma once

// Time evolution, the decoupled Lieb-Robinson bound, the Gaussian filter
// function and its Fourier envelope, and the diagonal-chain counterexample
// (weak dynamical localization without non-propagation of information).

#include <optional>
#include <string>
#include <vector>

#include "xxzloc/disorder.hpp"
#include "xxzloc/numerics.hpp"
#include "xxzloc/operators.hpp"

namespace xxzloc {

/// e^{-itH}; exactly the identity at t = 0.
CMatrix evolution_operator(const EigenDecomposition& d, double t);
CVector evolve_state(const EigenDecomposition& d, double t, const CVector& psi);
/// e^{itH} O e^{-itH}.
CMatrix heisenberg(const EigenDecomposition& d, double t, const CMatrix& O);

/// Row/column selections of P_-^S (some particle in S) and P_+^T (none in T).
std::vector<Index> rows_hitting(const SectorBasis& b, std::span<const int> S);
std::vector<Index> rows_avoiding(const SectorBasis& b, std::span<const int> T);
/// ‖P_-^S M P_+^T‖ for a sector matrix M.
double corner_norm(const CMatrix& M, const SectorBasis& b, std::span<const int> S,
                   std::span<const int> T);

struct LRConfig {
  Region region;  // cut sites form K₁; no cut means K₁ = Λ
  std::vector<int> sectors{1, 2};
  ModelParams params;
  std::vector<int> A;
  std::vector<int> B;
  std::vector<double> t_grid;
  std::uint64_t seed = 1;
  Distribution law;
};

struct LRRow {
  double t = 0.0;
  double measured = 0.0;
  double bound = 0.0;
  bool vacuous = false;  // bound >= 1
  bool ok = false;       // measured <= bound (1 + 1e-8)
};

struct LRReport {
  Distance r;
  std::vector<LRRow> rows;
  bool all_ok = false;
};

/// Δ^{-r} |t|^r / r!, and 0 for r = ∞.
double lieb_robinson_bound(double delta, Distance r, double t);
LRReport lieb_robinson_check(const LRConfig& cfg);

struct FilterSpec {
  double xi = 1.0;  // Gaussian width, > 0
  double a = 0.0;   // imaginary offset
  double E = 0.0;   // energy center
};

/// (1 - e^{-ξx²}) / (x - ia), with value 0 at x = 0 when a = 0.
cplx filter_value(double xi, double a, double x);
/// F_{ξ,a}(H - E).
CMatrix filter_apply(const EigenDecomposition& d, const FilterSpec& spec);

struct FilterLocalityConfig {
  Region region;  // cut sites form K₁
  int n_particles = 2;
  ModelParams params;
  std::vector<int> S;
  double E = 0.0;
  double a = 0.0;
  std::vector<int> ell_grid{1, 2, 3, 4, 5, 6};
  std::uint64_t seed = 1;
  Distribution law;
};

struct LocalityRow {
  int ell = 0;
  double t = 0.0;         // filter width Δ²ℓ/50
  double measured = 0.0;  // ‖P_-^S F P_+^T‖, T = sites within ℓ of S
  double envelope = 0.0;  // e^{-ℓ/2}
};

struct LocalityReport {
  std::vector<LocalityRow> rows;
  std::optional<double> rate;  // minus the slope of log measured over ℓ >= 1
  double r_squared = 0.0;
  bool monotone = false;
  std::string fit_error;
};

LocalityReport filter_locality_check(const FilterLocalityConfig& cfg);

/// (e^{-εx²} - e^{-tx²}) / (x - ia), 0 at x = 0 when a = 0.
cplx smoothed_filter(double t, double a, double eps, double x);

struct FourierRow {
  double freq = 0.0;
  double measured = 0.0;  // |F̂(freq)|, unitary convention
  double bound = 0.0;     // 5 e^{-freq²/4t}
  double error = 0.0;     // quadrature plus truncation estimate
  bool ok = false;
};

struct FourierReport {
  double t = 0.0, a = 0.0, eps = 0.0;
  double half_width = 0.0;  // X
  double step = 0.0;        // h
  std::vector<FourierRow> rows;
  bool all_ok = false;
};

/// Trapezoid transform on [-X, X]. Throws NumericalRefusal when a row's
/// error estimate exceeds 10% of its bound.
FourierReport fourier_bound_check(double t, double a, double eps, const std::vector<double>& freqs);

struct CounterexampleReport {
  int L = 0;
  double string_time = 0.0;       // π/4, where τ_t(σ₀ˣ) becomes the string
  double offdiag_max = 0.0;       // (i) largest off-diagonal |f(H)| entry
  double eigencorrelator_offdiag = 0.0;
  double rotation_error = 0.0;    // (ii) max over the t grid
  double string_error = 0.0;      // (iii) at string_time
  double string_error_half_pi = 0.0;  // the same comparison at t = π/2
  double witness = 0.0;           // (iv) ‖[τ(σ₀ˣ), σ_Lˣ]‖ at string_time
  bool diagonal_ok = false, rotation_ok = false, string_ok = false, witness_ok = false;
};

/// H = S σ₀ᶻ with S = Σ_{n=1}^L σₙᶻ on sites 0..L; L in 4N, L <= 12.
CounterexampleReport diagonal_chain_counterexample(int L);

}  // namespace xxzloc
