#pragma once

// Dispatch of a resolved RunSpec to the estimators, dynamics checks and
// oracles. An artifact is a CSV whose first line is "# {header json}" and whose
// last line is "# result {summary json}".

#include <iosfwd>
#include <string>

#include "xxzloc/run_spec.hpp"

namespace xxzloc {

enum ExitCode : int { kExitOk = 0, kExitSpec = 2, kExitRefusal = 3, kExitBound = 4 };

/// Header line content: tool, version and the resolved spec.
json artifact_header(const RunSpec& spec);

/// Writes the artifact to `csv` and one PASS/FAIL line per assertion to `log`.
/// Returns kExitOk or kExitBound; refusals and spec errors propagate as exceptions.
int run_experiment(const RunSpec& spec, std::ostream& csv, std::ostream& log);

/// run_experiment with the artifact sent to spec.out (standard output when
/// empty) and exceptions mapped to exit codes with a one-line JSON error on `err`.
int run(const RunSpec& spec, std::ostream& log, std::ostream& err);

}  // namespace xxzloc
