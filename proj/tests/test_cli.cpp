#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "netscale/manifest.hpp"

namespace fs = std::filesystem;

namespace {

const char* cli_path() { return NETSCALE_CLI_PATH; }

int run_cli(const std::string& args) {
  std::string cmd = std::string(cli_path()) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  if (status < 0) return -1;
  return WEXITSTATUS(status);
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("netscale_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

void write_sample_trace(const fs::path& p) {
  std::ofstream out(p);
  out << "user_id,timestamp,kind,symbol,x,y\n";
  for (int u = 0; u < 6; ++u) {
    for (int i = 0; i < 8; ++i) {
      int station = (u + i) % 5;
      out << "u" << u << ',' << i * 60 << ",location,s" << station << ','
          << station * 10 << ',' << station * 3 << '\n';
      out << "u" << u << ',' << i * 60 + 30 << ",web,site" << (u + 2 * i) % 4
          << ".com,,\n";
    }
  }
}

}  // namespace

TEST_CASE("ingest produces edge lists, stats and a manifest") {
  TempDir dir;
  write_sample_trace(dir.path / "trace.csv");
  int rc = run_cli("--output-dir " + (dir.path / "out").string() + " ingest " +
                   (dir.path / "trace.csv").string());
  CHECK(rc == 0);
  for (const char* f :
       {"mobility.edges", "attention.edges", "user_stats.csv",
        "manifest.json"}) {
    CHECK(fs::exists(dir.path / "out" / f));
  }
}

TEST_CASE("unreadable input exits with code 2") {
  TempDir dir;
  int rc = run_cli("--output-dir " + (dir.path / "out").string() + " ingest " +
                   (dir.path / "missing.csv").string());
  CHECK(rc == 2);
}

TEST_CASE("an empty trace exits with code 3") {
  TempDir dir;
  std::ofstream(dir.path / "empty.csv");
  int rc = run_cli("--output-dir " + (dir.path / "out").string() + " ingest " +
                   (dir.path / "empty.csv").string());
  CHECK(rc == 3);
}

TEST_CASE("strict mode demands a seed for randomized commands") {
  TempDir dir;
  write_sample_trace(dir.path / "trace.csv");
  REQUIRE(run_cli("--output-dir " + (dir.path / "in").string() + " ingest " +
                  (dir.path / "trace.csv").string()) == 0);
  const std::string edges = (dir.path / "in" / "mobility.edges").string();
  CHECK(run_cli("--strict --output-dir " + (dir.path / "o1").string() +
                " boxcount " + edges) == 4);
  CHECK(run_cli("--strict --seed 7 --output-dir " + (dir.path / "o2").string() +
                " boxcount " + edges + " --lb-max 4") == 0);
}

TEST_CASE("generate/boxcount/classify pipeline runs clean") {
  TempDir dir;
  const std::string gen_dir = (dir.path / "gen").string();
  REQUIRE(run_cli("--seed 5 --output-dir " + gen_dir +
                  " generate --rule all --n 250 --radius 50 --arena 1000") ==
          0);
  const std::string box_dir = (dir.path / "box").string();
  REQUIRE(run_cli("--seed 5 --output-dir " + box_dir + " boxcount " + gen_dir +
                  "/model.edges --lb-max 8 --restarts 10") == 0);
  CHECK(run_cli("--output-dir " + (dir.path / "cls").string() + " classify " +
                box_dir + "/box_counts.csv") == 0);
  CHECK(fs::exists(dir.path / "cls" / "classify.json"));
}

TEST_CASE("reruns with the same seed give byte-identical data outputs") {
  TempDir dir;
  write_sample_trace(dir.path / "trace.csv");
  for (const char* out : {"r1", "r2"}) {
    REQUIRE(run_cli("--seed 11 --output-dir " + (dir.path / out).string() +
                    " ingest " + (dir.path / "trace.csv").string()) == 0);
  }
  for (const char* f : {"mobility.edges", "attention.edges", "user_stats.csv"}) {
    CHECK(netscale::digest_file(dir.path / "r1" / f) ==
          netscale::digest_file(dir.path / "r2" / f));
  }
}

TEST_CASE("unknown subcommands fail to parse") {
  CHECK(run_cli("frobnicate") != 0);
}
