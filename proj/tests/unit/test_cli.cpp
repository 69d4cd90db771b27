#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "xxzloc/errors.hpp"
#include "xxzloc/experiments.hpp"
#include "xxzloc/run_spec.hpp"

using namespace xxzloc;
namespace fs = std::filesystem;

namespace {

const fs::path kTmp = fs::temp_directory_path() / "xxzloc_cli_test";

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli(const std::string& args) {
  fs::create_directories(kTmp);
  const fs::path out = kTmp / "stdout.txt", err = kTmp / "stderr.txt";
  const std::string cmd = std::string(XXZLOC_CLI_PATH) + " " + args + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

// Everything after the header line.
std::string body(const std::string& artifact) { return artifact.substr(artifact.find('\n') + 1); }

}  // namespace

TEST_CASE("spectrum example run") {
  const auto r = cli("--experiment spectrum --region 0:9 --n-particles 2 --lambda 0 --delta 2");
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  REQUIRE(line.rfind("# ", 0) == 0);
  const json header = json::parse(line.substr(2));
  CHECK(header["tool"] == "xxzloc");
  CHECK(header["spec"]["lambda"] == 0.0);
  std::getline(in, line);
  CHECK(line == "index,eigenvalue");
  double lo = 1e9;
  while (std::getline(in, line) && line[0] != '#') lo = std::min(lo, std::stod(line.substr(line.find(',') + 1)));
  CHECK(lo >= 0.5 - 1e-10);
}

TEST_CASE("counterexample run passes every check") {
  const auto r = cli("-e counterexample --param L=4");
  CHECK(r.code == 0);
  int passes = 0;
  std::istringstream in(r.err);
  for (std::string line; std::getline(in, line);) passes += line.rfind("PASS", 0) == 0 ? 1 : 0;
  CHECK(passes == 4);
}

TEST_CASE("spec errors exit 2 with one JSON line") {
  for (const char* args : {"-e fm-scan --s 0.5", "-e spectrum --delta 0.5", "-e nosuch",
                           "-e spectrum --param bogus=1", "-e spectrum --q 1", "-e spectrum --region 5:2"}) {
    const auto r = cli(args);
    CHECK(r.code == kExitSpec);
    const auto line = r.err.substr(0, r.err.find('\n'));
    CHECK(json::parse(line)["error"] == "spec");
  }
}

TEST_CASE("fit refusal exits 3") {
  const auto r = cli("-e qc-scan --region 0:7 --q 0 --samples 4");
  CHECK(r.code == kExitRefusal);
  CHECK(json::parse(r.err.substr(r.err.rfind('{')))["error"] == "refusal");
}

TEST_CASE("defaults are written back") {
  json j = {{"experiment", "green"}};
  RunSpec s = spec_from_json(j);
  resolve(s);
  const json out = spec_to_json(s);
  CHECK(out["eta"] == 1e-6);
  CHECK(out.contains("anchor"));
  CHECK_FALSE(out.contains("workers"));
  j = {{"experiment", "qc-scan"}, {"q", 0.5}};
  CHECK_NOTHROW(spec_from_json(j));
  j["q"] = 0.3;
  CHECK_THROWS_AS(spec_from_json(j), DomainError);
}

TEST_CASE("artifacts replay byte-identically across worker counts") {
  const fs::path a = kTmp / "a.csv", b = kTmp / "b.csv", c = kTmp / "c.csv";
  REQUIRE(cli("-e fm-scan --region 0:7 --samples 16 --workers 1 --out " + a.string()).code == 0);
  REQUIRE(cli("-e fm-scan --region 0:7 --samples 16 --workers 3 --out " + b.string()).code == 0);
  CHECK(body(slurp(a)) == body(slurp(b)));
  // The header alone is a complete spec.
  REQUIRE(cli("--spec " + a.string() + " --out " + c.string()).code == 0);
  CHECK(body(slurp(c)) == body(slurp(a)));
}

TEST_CASE("flags override the JSON file") {
  fs::create_directories(kTmp);
  const fs::path spec = kTmp / "spec.json";
  std::ofstream(spec) << R"({"experiment": "spectrum", "n_particles": 1, "region": {"intervals": [[0, 4]]}})";
  const auto r = cli("--spec " + spec.string() + " --n-particles 2");
  REQUIRE(r.code == 0);
  const json header = json::parse(r.out.substr(2, r.out.find('\n') - 2));
  CHECK(header["spec"]["n_particles"] == 2);
}
