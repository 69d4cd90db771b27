#include "xxzloc/json_io.hpp"

#include <charconv>

#include "xxzloc/errors.hpp"

namespace xxzloc {

void to_json(json& j, const Interval& iv) { j = json::array({iv.first, iv.last}); }

void from_json(const json& j, Interval& iv) {
  if (!j.is_array() || j.size() != 2) throw DomainError("interval must be a [first, last] pair");
  iv.first = j.at(0).get<int>();
  iv.last = j.at(1).get<int>();
}

void to_json(json& j, const Configuration& x) {
  j = json::array();
  for (int s : x.sites()) j.push_back(s);
}

void from_json(const json& j, Configuration& x) {
  if (!j.is_array()) throw DomainError("configuration must be an integer array");
  x = Configuration(j.get<std::vector<int>>());
}

void to_json(json& j, const Region& r) {
  j = json::object();
  j["intervals"] = r.intervals();
  if (r.has_cut()) j["cut"] = r.cut_intervals();
}

void from_json(const json& j, Region& r) {
  if (!j.is_object()) throw DomainError("region must be an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "intervals" && key != "cut") throw DomainError("unknown region key '" + key + "'");
  }
  r = Region::from_intervals(j.at("intervals").get<std::vector<Interval>>());
  if (j.contains("cut")) {
    const auto cut = j.at("cut").get<std::vector<Interval>>();
    r = r.with_cut(std::span<const Interval>(cut));
  }
}

namespace {
int parse_int(std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DomainError("bad integer '" + std::string(s) + "'");
  }
  return v;
}
}  // namespace

std::vector<Interval> parse_interval_list(const std::string& text) {
  std::vector<Interval> out;
  std::string_view rest(text);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    // Negative sites are legal, so split on ':' rather than '-'.
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      const int v = parse_int(item);
      out.push_back({v, v});
    } else {
      out.push_back({parse_int(item.substr(0, colon)), parse_int(item.substr(colon + 1))});
    }
    if (out.back().first > out.back().last) {
      throw DomainError("interval '" + std::string(item) + "' is reversed");
    }
  }
  if (out.empty()) throw DomainError("empty interval list");
  return out;
}

std::string format_interval_list(const std::vector<Interval>& ivs) {
  std::string out;
  for (std::size_t i = 0; i < ivs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(ivs[i].first) + ":" + std::to_string(ivs[i].last);
  }
  return out;
}

}  // namespace xxzloc
