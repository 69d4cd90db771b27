#include "xxzloc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "xxzloc/dynamics.hpp"
#include "xxzloc/errors.hpp"
#include "xxzloc/estimators.hpp"
#include "xxzloc/exp_sums.hpp"
#include "xxzloc/oracles.hpp"
#include "xxzloc/scans.hpp"

namespace xxzloc {

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string sites_of(const Configuration& x) {
  std::string out;
  for (int i = 0; i < x.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(x[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::string dist(Distance d) { return d.to_string(); }

class Artifact {
 public:
  Artifact(std::ostream& csv, std::ostream& log, const RunSpec& spec) : csv_(csv), log_(log) {
    csv_ << "# " << artifact_header(spec).dump() << '\n';
  }
  void columns(std::initializer_list<const char*> names) {
    bool first = true;
    for (const char* n : names) {
      csv_ << (first ? "" : ",") << n;
      first = false;
    }
    csv_ << '\n';
  }
  template <class... T>
  void row(const T&... cells) {
    bool first = true;
    ((csv_ << (first ? "" : ",") << cells, first = false), ...);
    csv_ << '\n';
  }
  /// Records a verdict; returns ok.
  bool check(const std::string& name, bool ok, const std::string& detail) {
    log_ << (ok ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
    all_ok_ = all_ok_ && ok;
    result_["checks"][name] = ok;
    return ok;
  }
  json& result() { return result_; }
  int finish() {
    csv_ << "# result " << result_.dump() << '\n';
    return all_ok_ ? kExitOk : kExitBound;
  }

 private:
  std::ostream& csv_;
  std::ostream& log_;
  json result_ = json::object();
  bool all_ok_ = true;
};

std::vector<PairSpec> pairs_for(const RunSpec& spec) {
  if (spec.str("pairs") == "random") {
    return random_pairs(spec.region, spec.n_particles, static_cast<std::size_t>(spec.integer("n_pairs")),
                        splitmix64(spec.seed ^ 0x70616972ULL));
  }
  return anchored_pairs(spec.region, spec.config("anchor"));
}

DisorderSample field_of(const RunSpec& spec) { return sample_field(spec.region, spec.law, spec.seed); }

// ---------------------------------------------------------------------------

int run_assemble(const RunSpec& spec, Artifact& art) {
  const auto basis = make_basis(spec.region, spec.n_particles);
  const auto H = assemble_hamiltonian(basis, spec.params, field_of(spec));
  art.columns({"row", "col", "x", "y", "value"});
  const auto trips = H.triplets();
  for (const auto& t : trips) {
    art.row(t.row, t.col, sites_of(basis->unrank(static_cast<std::size_t>(t.row))),
            sites_of(basis->unrank(static_cast<std::size_t>(t.col))), num(t.value));
  }
  art.result()["size"] = basis->size();
  art.result()["nonzeros"] = trips.size();
  art.check("symmetric", asymmetry(H.matrix()) == 0.0, "H equals its transpose exactly");
  return art.finish();
}

int run_spectrum(const RunSpec& spec, Artifact& art) {
  const auto H = assemble_hamiltonian(spec.region, spec.n_particles, spec.params, field_of(spec));
  const auto d = eig_sym(H);
  art.columns({"index", "eigenvalue"});
  for (Index k = 0; k < d.values.size(); ++k) art.row(k, num(d.values(k)));
  const double lo = d.values.minCoeff();
  art.result()["min_eigenvalue"] = lo;
  art.result()["gap"] = spec.params.gap();
  if (spec.n_particles == 0) {
    art.check("vacuum", lo == 0.0, fmt::format("vacuum eigenvalue {}", lo));
  } else {
    art.check("gap", lo >= spec.params.gap() - 1e-10,
              fmt::format("min eigenvalue {:.12g} >= 1 - 1/delta = {:.12g}", lo, spec.params.gap()));
  }
  return art.finish();
}

int run_green(const RunSpec& spec, Artifact& art) {
  const auto basis = make_basis(spec.region, spec.n_particles);
  const auto H = assemble_hamiltonian(basis, spec.params, field_of(spec));
  const cplx z(*spec.energy, spec.eta);
  const Configuration x = spec.config("anchor");
  const CVector col = ShiftedSolve(H.matrix(), z).column(static_cast<Index>(basis->rank(x)));
  art.columns({"y", "d1", "dH_mod", "re", "im", "abs"});
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const Configuration& y = (*basis)[i];
    const cplx g = col(static_cast<Index>(i));
    art.row(sites_of(y), dist(dist_d1(x, y, spec.region)), dist(dist_modified_hausdorff(x, y, spec.region)),
            num(g.real()), num(g.imag()), num(std::abs(g)));
  }
  art.result()["diagonal"] = {col(static_cast<Index>(basis->rank(x))).real(),
                              col(static_cast<Index>(basis->rank(x))).imag()};
  return art.finish();
}

ScanConfig scan_config(const RunSpec& spec) {
  ScanConfig cfg;
  cfg.region = spec.region;
  cfg.n_particles = spec.n_particles;
  cfg.params = spec.params;
  cfg.pairs = pairs_for(spec);
  cfg.n_samples = spec.samples;
  cfg.seed = spec.seed;
  cfg.law = spec.law;
  cfg.workers = spec.workers;
  cfg.kind = parse_distance_kind(spec.str("distance"));
  const auto fr = spec.ints("fit_range");
  cfg.range = {fr[0], fr[1]};
  return cfg;
}

int write_scan(const ScanResult& res, DistanceKind kind, Artifact& art) {
  art.columns({"distance_kind", "distance", "mean", "stderr", "n", "excluded"});
  for (const auto& b : res.bins) {
    art.row(to_string(kind), b.distance, num(b.mean), num(b.standard_error), b.n, b.excluded);
  }
  json& r = art.result();
  r["pairs"] = res.pairs.size();
  r["dropped_infinite"] = res.dropped_infinite;
  std::size_t excluded = 0;
  for (const auto& p : res.pairs) excluded += p.estimate.excluded();
  r["excluded_samples"] = excluded;
  if (res.fit) {
    r["fit"] = {{"slope", res.fit->slope},
                {"intercept", res.fit->intercept},
                {"r_squared", res.fit->r_squared},
                {"slope_stderr", res.fit->slope_stderr},
                {"bins_used", res.fit->bins.size()}};
    return art.finish();
  }
  r["fit_error"] = res.fit_error;
  art.finish();
  throw NumericalRefusal(res.fit_error);
}

int run_fm_scan(const RunSpec& spec, Artifact& art) {
  const auto cfg = scan_config(spec);
  return write_scan(fractional_moment_scan(cfg, *spec.s, cplx(*spec.energy, spec.eta)), cfg.kind, art);
}

int run_qc_scan(const RunSpec& spec, Artifact& art) {
  const auto cfg = scan_config(spec);
  return write_scan(eigencorrelator_scan(cfg, *spec.q), cfg.kind, art);
}

int run_ct(const RunSpec& spec, Artifact& art, bool lifted) {
  CTConfig cfg;
  cfg.region = spec.region;
  cfg.n_particles = spec.n_particles;
  cfg.params = spec.params;
  cfg.window = *spec.q;
  cfg.lifted = lifted;
  cfg.re_grid = spec.nums("re_grid");
  cfg.im_grid = spec.nums("im_grid");
  cfg.pairs = pairs_for(spec);
  cfg.n_samples = spec.samples;
  cfg.seed = spec.seed;
  cfg.law = spec.law;
  cfg.workers = spec.workers;
  const CTReport rep = combes_thomas_check(cfg);
  art.columns({"sample", "rate", "r_squared", "fitted"});
  for (const auto& s : rep.samples) art.row(s.index, num(s.rate), num(s.r_squared), s.fitted ? 1 : 0);
  art.result()["min_rate"] = rep.min_rate;
  art.result()["z_points"] = rep.z_grid.size();
  art.result()["infinite_pairs"] = rep.infinite_pairs;
  art.result()["cut_leak"] = rep.cut_leak;
  art.check(lifted ? "lifted-combes-thomas" : "combes-thomas", rep.all_positive,
            fmt::format("min per-sample decay rate in d1 = {:.6g} over {} samples", rep.min_rate,
                        rep.samples.size()));
  if (rep.infinite_pairs > 0) {
    art.check("decoupled-zero", rep.cut_leak == 0.0,
              fmt::format("max |G| across the cut = {:.3e}", rep.cut_leak));
  }
  return art.finish();
}

int run_ld_probe(const RunSpec& spec, Artifact& art) {
  LargeDeviationConfig cfg;
  cfg.region = spec.region;
  cfg.anchor = spec.config("anchor");
  cfg.params = spec.params;
  cfg.q = *spec.q;
  cfg.n_samples = spec.samples;
  cfg.seed = spec.seed;
  cfg.law = spec.law;
  cfg.workers = spec.workers;
  const auto res = large_deviation_probe(cfg);
  art.columns({"n_particles", "q", "set_size", "threshold", "frequency", "stderr", "n"});
  art.row(spec.n_particles, spec.q->to_string(), res.set_size, num(res.threshold), num(res.frequency.mean()),
          num(res.frequency.standard_error()), res.frequency.count());
  art.result()["frequency"] = res.frequency.mean();
  return art.finish();
}

int run_centers(const RunSpec& spec, Artifact& art) {
  const auto basis = make_basis(spec.region, spec.n_particles);
  const auto dim = static_cast<std::size_t>(basis->size());
  const auto kind = parse_distance_kind(spec.str("distance"));
  const std::int64_t radius = spec.integer("radius");
  // Per eigenvector: eigenvalue, center rank, ratio, ipr, mass near center.
  auto estimand = [&](const SampleInfo& info) {
    const auto d = eig_sym(assemble_hamiltonian(basis, spec.params, sample_field(spec.region, spec.law, info.seed)));
    std::vector<double> out(5 * dim);
    for (std::size_t k = 0; k < dim; ++k) {
      const Vector psi = d.vectors.col(static_cast<Index>(k));
      const auto c = localization_center(psi, *basis);
      out[5 * k] = d.values(static_cast<Index>(k));
      out[5 * k + 1] = static_cast<double>(basis->rank(c.center));
      out[5 * k + 2] = c.ratio;
      out[5 * k + 3] = ipr(psi);
      out[5 * k + 4] = mass_near(psi, *basis, c.center, radius, kind);
    }
    return out;
  };
  const auto est = monte_carlo_vector(estimand, spec.samples, spec.seed, spec.workers);
  art.columns({"sample", "index", "eigenvalue", "center", "ratio", "ipr", "mass"});
  bool inequality = true;
  double mass_sum = 0.0;
  std::size_t localized = 0;
  for (std::size_t s = 0; s < spec.samples; ++s) {
    for (std::size_t k = 0; k < dim; ++k) {
      const double ratio = est[5 * k + 2].values()[s];
      const double mass = est[5 * k + 4].values()[s];
      inequality = inequality && ratio >= 1.0 - 1e-12;
      mass_sum += mass;
      localized += mass >= 0.9 ? 1 : 0;
      art.row(s, k, num(est[5 * k].values()[s]),
              sites_of(basis->unrank(static_cast<std::size_t>(est[5 * k + 1].values()[s]))), num(ratio),
              num(est[5 * k + 3].values()[s]), num(mass));
    }
  }
  const double total = static_cast<double>(spec.samples * dim);
  art.result()["mean_mass"] = mass_sum / total;
  art.result()["fraction_mass_ge_0.9"] = static_cast<double>(localized) / total;
  art.check("center-inequality", inequality, "|psi(x*)|^2 >= w(x*)/sum w for every eigenvector");
  return art.finish();
}

int run_filter_locality(const RunSpec& spec, Artifact& art) {
  FilterLocalityConfig cfg;
  cfg.region = spec.region;
  cfg.n_particles = spec.n_particles;
  cfg.params = spec.params;
  cfg.S = spec.ints("S");
  cfg.E = *spec.energy;
  cfg.a = spec.num("a");
  cfg.ell_grid = spec.ints("ell");
  cfg.seed = spec.seed;
  cfg.law = spec.law;
  const auto rep = filter_locality_check(cfg);
  art.columns({"ell", "t", "measured", "envelope"});
  for (const auto& r : rep.rows) art.row(r.ell, num(r.t), num(r.measured), num(r.envelope));
  art.result()["monotone"] = rep.monotone;
  if (!rep.rate) {
    art.result()["fit_error"] = rep.fit_error;
    art.finish();
    throw NumericalRefusal(rep.fit_error);
  }
  art.result()["rate"] = *rep.rate;
  art.result()["r_squared"] = rep.r_squared;
  const double min_rate = spec.num("min_rate");
  art.check("filter-rate", *rep.rate >= min_rate, fmt::format("fitted rate {:.4f} >= {}", *rep.rate, min_rate));
  return art.finish();
}

int run_lr_check(const RunSpec& spec, Artifact& art) {
  LRConfig cfg;
  cfg.region = spec.region;
  cfg.sectors = spec.ints("sectors");
  cfg.params = spec.params;
  cfg.A = spec.ints("A");
  cfg.B = spec.ints("B");
  cfg.t_grid = spec.nums("t_grid");
  cfg.seed = spec.seed;
  cfg.law = spec.law;
  const auto rep = lieb_robinson_check(cfg);
  art.columns({"t", "measured", "bound", "vacuous", "ok"});
  for (const auto& r : rep.rows) art.row(num(r.t), num(r.measured), num(r.bound), r.vacuous ? 1 : 0, r.ok ? 1 : 0);
  art.result()["r"] = rep.r.to_string();
  art.check("lieb-robinson", rep.all_ok, fmt::format("measured <= bound at all {} times (r = {})",
                                                     rep.rows.size(), rep.r.to_string()));
  return art.finish();
}

int run_fourier(const RunSpec& spec, Artifact& art) {
  const auto rep = fourier_bound_check(spec.num("t"), spec.num("a"), spec.num("eps"), spec.nums("freqs"));
  art.columns({"freq", "measured", "bound", "error", "ok"});
  for (const auto& r : rep.rows) art.row(num(r.freq), num(r.measured), num(r.bound), num(r.error), r.ok ? 1 : 0);
  art.result()["half_width"] = rep.half_width;
  art.result()["step"] = rep.step;
  art.check("fourier-bound", rep.all_ok, fmt::format("|F^(k)| <= 5 exp(-k^2/4t) at all {} frequencies", rep.rows.size()));
  return art.finish();
}

int run_counterexample(const RunSpec& spec, Artifact& art) {
  const auto rep = diagonal_chain_counterexample(spec.integer("L"));
  art.columns({"check", "value", "target", "tolerance", "status"});
  auto line = [&](const char* name, double v, double target, double tol, bool ok) {
    art.row(name, num(v), num(target), num(tol), ok ? "PASS" : "FAIL");
  };
  line("offdiag_f_of_H", rep.offdiag_max, 0.0, 0.0, rep.offdiag_max == 0.0);
  line("offdiag_eigencorrelator", rep.eigencorrelator_offdiag, 0.0, 0.0, rep.eigencorrelator_offdiag == 0.0);
  line("rotation_identity", rep.rotation_error, 0.0, 1e-10, rep.rotation_ok);
  line("string_identity_t_pi_over_4", rep.string_error, 0.0, 1e-10, rep.string_ok);
  line("commutator_witness", rep.witness, 2.0, 1e-10, rep.witness_ok);
  art.row("string_identity_t_pi_over_2", num(rep.string_error_half_pi), num(0.0), num(1e-10), "INFO");
  art.check("diagonal-f(H)", rep.diagonal_ok,
            fmt::format("max off-diagonal |f(H)| = {}, eigencorrelator = {}", rep.offdiag_max,
                        rep.eigencorrelator_offdiag));
  art.check("rotation", rep.rotation_ok, fmt::format("max deviation {:.3e}", rep.rotation_error));
  art.check("string", rep.string_ok, fmt::format("tau_(pi/4)(sigma_0^x) vs string: {:.3e}", rep.string_error));
  art.check("witness", rep.witness_ok, fmt::format("||[tau, sigma_L^x]|| = {:.15g}", rep.witness));
  return art.finish();
}

// N sites in k blocks separated by single holes.
Configuration with_clusters(int n, int k) {
  std::vector<int> sites;
  int pos = 0;
  for (int b = 0; b < k; ++b) {
    const int len = n / k + (b < n % k ? 1 : 0);
    for (int i = 0; i < len; ++i) sites.push_back(pos++);
    ++pos;
  }
  return Configuration(sites);
}

int run_oracle_sums(const RunSpec& spec, Artifact& art) {
  const auto alphas = spec.nums("alphas");
  const int n_max = spec.integer("n_max");
  const int k_max = spec.integer("k_max");
  art.columns({"kind", "alpha", "N", "k", "R", "value", "bound", "ratio", "certified", "within"});
  bool within = true, certified = true;
  double closed_form_error = 0.0;
  json dh_ratios = json::object();
  for (double alpha : alphas) {
    for (int n = 1; n <= n_max; ++n) {
      for (int k = 1; k <= std::min(n, k_max); ++k) {
        const auto a = exp_sum_d1(Configuration(with_clusters(n, 1)), k, alpha);
        const auto b = exp_sum_d1_dual(with_clusters(n, k), alpha);
        for (const auto& [name, r] : {std::pair{"d1", a}, std::pair{"d1_dual", b}}) {
          art.row(name, num(alpha), n, k, r.radius, num(r.value), num(r.bound), num(r.value / r.bound),
                  r.certified ? 1 : 0, r.within_bound ? 1 : 0);
          within = within && r.within_bound;
          certified = certified && r.certified;
        }
        if (n == 1) {
          const double exact = (1.0 + std::exp(-alpha)) / (1.0 - std::exp(-alpha));
          closed_form_error = std::max(closed_form_error, std::abs(a.value - exact) / exact);
        }
      }
    }
    for (int k = 1; k <= std::min(2, k_max); ++k) {
      std::vector<double> ratios;
      for (int n = std::max(2, k); n <= n_max; ++n) {
        const auto h = exp_sum_dh(with_clusters(n, 1), k, alpha);
        art.row("dH", num(alpha), n, k, h.sum.radius, num(h.sum.value), num(h.sum.bound), num(h.ratio),
                h.sum.certified ? 1 : 0, 1);
        ratios.push_back(h.ratio);
      }
      dh_ratios[fmt::format("alpha={},k={}", alpha, k)] = ratios;
    }
  }
  art.result()["closed_form_rel_error"] = closed_form_error;
  art.result()["dh_ratios"] = dh_ratios;
  art.check("d1-bounds", within && certified, "certified sums within C_alpha^(k+1) and C_alpha^k");
  art.check("closed-form", closed_form_error <= 1e-12, fmt::format("N=1 relative error {:.3e}", closed_form_error));
  return art.finish();
}

int run_oracle_equivalence(const RunSpec& spec, Artifact& art) {
  const Region base = spec.region.without_cut();
  if (base.size() > 10) throw DomainError("oracle equivalence is limited to 10 sites");
  art.columns({"draw", "delta", "lambda", "cut", "N", "max_abs_diff"});
  double worst = 0.0, commutator_max = 0.0;
  for (std::size_t i = 0; i < spec.samples; ++i) {
    const std::uint64_t seed = sample_seed(spec.seed, i);
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> ud(1.5, 8.0), ul(0.0, 10.0);
    const ModelParams p{ud(gen), ul(gen)};
    Region region = base;
    std::string cut = "none";
    if (std::uniform_int_distribution<int>(0, 1)(gen) == 1 && base.size() >= 2) {
      const int len = std::uniform_int_distribution<int>(1, base.size() - 1)(gen);
      const int start = std::uniform_int_distribution<int>(0, base.size() - len)(gen);
      std::vector<int> k(base.sites().begin() + start, base.sites().begin() + start + len);
      region = base.with_cut(k);
      cut = format_interval_list(region.cut_intervals());
    }
    const auto omega = sample_field(region, spec.law, seed);
    const auto T = tensor_hamiltonian(region, p, omega);
    commutator_max = std::max(commutator_max, max_abs(commutator(T.m, total_number(region).m)));
    for (int n = 0; n <= region.size(); ++n) {
      const double diff = (sector_block(T, n) - assemble_hamiltonian(region, n, p, omega).matrix()).cwiseAbs().maxCoeff();
      worst = std::max(worst, diff);
      art.row(i, num(p.delta), num(p.lambda), cut, n, num(diff));
    }
  }
  art.result()["max_abs_diff"] = worst;
  art.result()["commutator_max"] = commutator_max;
  art.check("oracle-equivalence", worst <= 1e-12, fmt::format("max |sector - tensor block| = {:.3e}", worst));
  art.check("number-conservation", commutator_max == 0.0, fmt::format("max |[H, N]| = {}", commutator_max));
  return art.finish();
}

}  // namespace

json artifact_header(const RunSpec& spec) {
  return {{"tool", "xxzloc"}, {"version", kToolVersion}, {"spec", spec_to_json(spec)}};
}

int run_experiment(const RunSpec& spec, std::ostream& csv, std::ostream& log) {
  static const std::map<std::string, std::function<int(const RunSpec&, Artifact&)>> table = {
      {"assemble", run_assemble},
      {"spectrum", run_spectrum},
      {"green", run_green},
      {"fm-scan", run_fm_scan},
      {"qc-scan", run_qc_scan},
      {"ct-check", [](const RunSpec& s, Artifact& a) { return run_ct(s, a, false); }},
      {"lifted-ct", [](const RunSpec& s, Artifact& a) { return run_ct(s, a, true); }},
      {"ld-probe", run_ld_probe},
      {"centers", run_centers},
      {"filter-locality", run_filter_locality},
      {"lr-check", run_lr_check},
      {"fourier-check", run_fourier},
      {"counterexample", run_counterexample},
      {"oracle-sums", run_oracle_sums},
      {"oracle-equivalence", run_oracle_equivalence},
  };
  const auto it = table.find(spec.experiment);
  if (it == table.end()) throw DomainError("unknown experiment '" + spec.experiment + "'");
  Artifact art(csv, log, spec);
  return it->second(spec, art);
}

int run(const RunSpec& spec, std::ostream& log, std::ostream& err) {
  auto fail = [&](const char* kind, const std::string& msg, int code) {
    err << json{{"error", kind}, {"message", msg}}.dump() << '\n';
    return code;
  };
  try {
    if (spec.out.empty() || spec.out == "-") return run_experiment(spec, std::cout, log);
    // Render in memory so a failed run never leaves a half-written artifact.
    std::ostringstream buf;
    int code = kExitOk;
    try {
      code = run_experiment(spec, buf, log);
    } catch (const NumericalRefusal&) {
      std::ofstream(spec.out) << buf.str();
      throw;
    }
    std::ofstream out(spec.out);
    if (!out) return fail("io", "cannot write '" + spec.out + "'", kExitSpec);
    out << buf.str();
    return code;
  } catch (const DomainError& e) {
    return fail("spec", e.what(), kExitSpec);
  } catch (const NumericalRefusal& e) {
    return fail("refusal", e.what(), kExitRefusal);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
}

}  // namespace xxzloc
