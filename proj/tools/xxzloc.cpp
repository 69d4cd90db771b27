// Command-line front end: builds a spec from a JSON file and/or flags, then runs it.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xxzloc/errors.hpp"
#include "xxzloc/experiments.hpp"
#include "xxzloc/run_spec.hpp"

using namespace xxzloc;

namespace {

int spec_error(const std::string& msg) {
  std::cerr << json{{"error", "spec"}, {"message", msg}}.dump() << '\n';
  return kExitSpec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random XXZ chain localization workbench"};
  app.set_version_flag("--version", std::string(kToolVersion));

  std::string spec_file;
  std::optional<std::string> experiment, region, cut, distribution, out;
  std::optional<int> n_particles, workers;
  std::optional<double> delta, lambda, q, s, eta, energy;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::vector<std::string> params;
  bool list = false;

  app.add_option("--spec", spec_file, "JSON spec file (an artifact header line also works)");
  app.add_option("--experiment,-e", experiment, "Experiment kind");
  app.add_option("--region", region, "Sites as intervals, e.g. 0:9 or 0:3,6:9");
  app.add_option("--cut", cut, "Decoupling set K as intervals");
  app.add_option("--n-particles,-n", n_particles, "Sector N");
  app.add_option("--delta", delta, "Anisotropy, > 1");
  app.add_option("--lambda", lambda, "Disorder strength, >= 0");
  app.add_option("--q", q, "Energy window index (half-integer)");
  app.add_option("--s", s, "Fractional moment exponent in (0, 1/3]");
  app.add_option("--eta", eta, "Imaginary part of z");
  app.add_option("--energy", energy, "Real part of z");
  app.add_option("--seed", seed, "Base seed");
  app.add_option("--samples", samples, "Disorder samples");
  app.add_option("--distribution", distribution, "uniform01 or beta(a,b)");
  app.add_option("--workers", workers, "Worker threads (0: default)");
  app.add_option("--out,-o", out, "Artifact path ('-' for stdout)");
  app.add_option("--param,-p", params, "Experiment key as key=<json>, repeatable");
  app.add_flag("--list", list, "List experiment kinds and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitSpec;
  }

  if (list) {
    for (const auto& k : experiment_kinds()) std::cout << k << '\n';
    return kExitOk;
  }

  RunSpec spec;
  try {
    json j = spec_file.empty() ? json::object() : read_spec_file(spec_file);
    if (experiment) j["experiment"] = *experiment;
    if (region || cut) {
      json r = j.contains("region") ? j["region"] : json{{"intervals", json::array({{0, 9}})}};
      if (region) r["intervals"] = parse_interval_list(*region);
      if (cut) r["cut"] = parse_interval_list(*cut);
      j["region"] = r;
    }
    if (n_particles) j["n_particles"] = *n_particles;
    if (delta) j["delta"] = *delta;
    if (lambda) j["lambda"] = *lambda;
    if (q) j["q"] = *q;
    if (s) j["s"] = *s;
    if (eta) j["eta"] = *eta;
    if (energy) j["energy"] = *energy;
    if (seed) j["seed"] = *seed;
    if (samples) j["samples"] = *samples;
    if (distribution) j["distribution"] = *distribution;
    if (out) j["out"] = *out;
    if (workers) j["workers"] = *workers;
    for (const auto& p : params) {
      const auto eq = p.find('=');
      if (eq == std::string::npos || eq == 0) return spec_error("--param expects key=<json>, got '" + p + "'");
      const std::string key = p.substr(0, eq), text = p.substr(eq + 1);
      json value = json::parse(text, nullptr, false);
      j[key] = value.is_discarded() ? json(text) : value;
    }
    spec = spec_from_json(j);
    resolve(spec);
  } catch (const DomainError& e) {
    return spec_error(e.what());
  } catch (const json::exception& e) {
    return spec_error(e.what());
  } catch (const std::exception& e) {
    return spec_error(e.what());
  }
  return run(spec, std::clog, std::cerr);
}
