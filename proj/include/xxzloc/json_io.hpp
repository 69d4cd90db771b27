#pragma once

// JSON forms: a configuration is a sorted int array, a region is
// {"intervals": [[a,b],...], "cut": [[a,b],...]} with "cut" optional.

#include <json.hpp>

#include "xxzloc/config_space.hpp"

namespace xxzloc {

using json = nlohmann::ordered_json;

void to_json(json& j, const Interval& iv);
void from_json(const json& j, Interval& iv);

void to_json(json& j, const Configuration& x);
void from_json(const json& j, Configuration& x);

void to_json(json& j, const Region& r);
void from_json(const json& j, Region& r);

/// Parses "a:b" or "a:b,c:d" (inclusive) or a bare integer into intervals.
std::vector<Interval> parse_interval_list(const std::string& text);
std::string format_interval_list(const std::vector<Interval>& ivs);

}  // namespace xxzloc
