#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "helpers.hpp"
#include "jugglepac/cli.hpp"

using namespace jpac;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation cli(std::vector<std::string> args) {
  args.insert(args.begin(), "jugglepac");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string &name) {
  return std::filesystem::temp_directory_path() / ("jpac_cli_" + name);
}

} // namespace

TEST_CASE("schedule prints the two-dataset table") {
  const Invocation jp = cli({"schedule"});
  CHECK(jp.code == kExitOk);
  CHECK(jpac::testing::head_rows(jp.out, 14) == jpac::testing::read_file(JPAC_FIXTURE_DIR "/table1_jugglepac.txt"));

  const Invocation sp = cli({"schedule", "--engine", "simplepac"});
  CHECK(sp.code == kExitOk);
  CHECK(jpac::testing::head_rows(sp.out, 14) == jpac::testing::read_file(JPAC_FIXTURE_DIR "/table1_simplepac.txt"));
}

TEST_CASE("usage and configuration errors exit with 2") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"run", "--engine", "bogus"}).code == kExitUsage);
  CHECK(cli({"run", "-p", "0", "--datasets", "6"}).code == kExitUsage);

  const Invocation shortds = cli({"run", "-p", "14", "-L", "2", "--datasets", "30,24"});
  CHECK(shortds.code == kExitUsage);
  CHECK(shortds.err.find("dataset 1") != std::string::npos);

  CHECK(cli({"run", "--workload", "/nonexistent.json"}).code == kExitUsage);
  CHECK(cli({"run", "--datasets", "30", "--count", "3"}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("run writes trace and stats files") {
  const auto trace = temp_path("trace.csv");
  const auto stats = temp_path("stats.csv");
  const Invocation r = cli({"run", "-p", "5", "-L", "2", "--count", "8", "--seed", "3", "--trace", trace.string(),
                            "--stats", stats.string()});
  CHECK(r.code == kExitOk);
  const std::string s = jpac::testing::read_file(stats.string());
  CHECK(s.find("seed=3") != std::string::npos);
  const std::string t = jpac::testing::read_file(trace.string());
  CHECK(t.rfind("cycle,valid,input", 0) == 0);
  std::filesystem::remove(trace);
  std::filesystem::remove(stats);
}

TEST_CASE("flags override a workload file") {
  const auto wl = temp_path("workload.json");
  {
    std::ofstream os(wl);
    os << R"({"seed": 7, "datasets": [30, 30, 30]})";
  }
  const Invocation r = cli({"run", "--workload", wl.string(), "--seed", "9"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("seed=9") != std::string::npos);
  CHECK(r.err.find("--seed") != std::string::npos);
  std::filesystem::remove(wl);
}

TEST_CASE("verify passes on a valid workload") {
  const Invocation r = cli({"verify", "-p", "3", "-L", "2", "--count", "30", "--seed", "5"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("VERIFY PASS") != std::string::npos);
  CHECK(r.out.find("verified 30/30") != std::string::npos);
}

TEST_CASE("compare reports stalls for both engines") {
  const Invocation r = cli({"compare", "-p", "3", "--datasets", "6,8", "--values", "indexed"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("stall_cycles,5,0") != std::string::npos);
}

TEST_CASE("sweep lists minimum lengths") {
  const Invocation r = cli({"sweep", "--latencies", "14", "--label-widths", "1-4", "--count", "4"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("14,1,74,") != std::string::npos);
  CHECK(r.out.find("14,2,25,") != std::string::npos);
  CHECK(r.out.find("14,3,11,") != std::string::npos);
  CHECK(r.out.find("14,4,5,") != std::string::npos);
  CHECK(cli({"sweep", "--latencies", "0"}).code == kExitUsage);
}
