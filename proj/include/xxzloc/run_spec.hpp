#pragma once

// A fully resolved experiment request. Every default is written back into the
// spec before dispatch, so the JSON form embedded in an artifact replays it.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xxzloc/config_space.hpp"
#include "xxzloc/disorder.hpp"
#include "xxzloc/json_io.hpp"
#include "xxzloc/operators.hpp"
#include "xxzloc/scans.hpp"

namespace xxzloc {

inline constexpr const char* kToolVersion = "0.1.0";

const std::vector<std::string>& experiment_kinds();

struct RunSpec {
  std::string experiment;
  Region region = Region::interval(0, 9);
  int n_particles = 2;
  ModelParams params{2.0, 1.0};
  std::optional<HalfInteger> q;
  std::optional<double> s;
  double eta = 1e-6;
  std::optional<double> energy;  // Re z
  std::uint64_t seed = 1;
  std::size_t samples = 100;
  Distribution law;
  std::string out;   // empty: standard output
  int workers = 0;   // never part of the artifact
  json extra = json::object();  // experiment-specific keys, defaults filled in

  /// Integer-list, configuration, and scalar accessors for `extra`.
  double num(const std::string& key) const;
  int integer(const std::string& key) const;
  std::string str(const std::string& key) const;
  std::vector<int> ints(const std::string& key) const;
  std::vector<double> nums(const std::string& key) const;
  Configuration config(const std::string& key) const;
};

/// Parses a spec object. Unknown keys, or extras the experiment does not
/// take, raise DomainError.
RunSpec spec_from_json(const json& j);
/// Fills defaults and checks every numeric hypothesis; DomainError on failure.
void resolve(RunSpec& spec);
/// Artifact form: every resolved key except workers.
json spec_to_json(const RunSpec& spec);

/// Reads a JSON spec file. An artifact header line "# {...}" is accepted and
/// its "spec" member is used.
json read_spec_file(const std::string& path);

}  // namespace xxzloc
