// End-to-end checks of the installed command line tool; each case shells out
// to the real binary (path injected by the build) and inspects stdout, files,
// and exit codes.
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string("\"") + RCONF_CLI_PATH + "\" " + args + " 2>cli_stderr_tmp.txt";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// Drops the wall-clock line so reports can be compared byte-for-byte.
std::string without_wall(const std::string& json_text) {
  std::string out;
  std::istringstream in(json_text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find("wall_seconds") != std::string::npos) continue;
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace

TEST_CASE("score subcommand prints the half-mass radius and rank") {
  spit("cli_data_tmp.csv", "-1\n0\n1\n");
  auto r = run_cli("score --data cli_data_tmp.csv --z 0");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "radius=1\nk=2\n");

  spit("cli_data_tmp.csv", "5\n");
  auto r2 = run_cli("score --data cli_data_tmp.csv --z 5");
  CHECK(r2.exit_code == 0);
  CHECK(r2.out == "radius=0\nk=1\n");
}

TEST_CASE("score rejects a dimension mismatch with a usage exit code") {
  spit("cli_data_tmp.csv", "-1\n0\n1\n");
  auto r = run_cli("score --data cli_data_tmp.csv --z 0,0");
  CHECK(r.exit_code == 2);
  CHECK(r.out.empty());  // errors go to stderr, stdout stays clean
  CHECK(!slurp("cli_stderr_tmp.txt").empty());
}

TEST_CASE("missing data file is a usage error") {
  auto r = run_cli("score --data cli_no_such_file.csv --z 0");
  CHECK(r.exit_code == 2);
  CHECK(r.out.empty());
}

TEST_CASE("pvalue prints the exact fraction and its decimal value") {
  spit("cli_data_tmp.csv", "0\n10\n");
  auto r = run_cli("pvalue --data cli_data_tmp.csv --z 20");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "2/3\n0.66666666666666663\n");

  spit("cli_data_tmp.csv", "0\n");
  auto r2 = run_cli("pvalue --data cli_data_tmp.csv --z 0");
  CHECK(r2.exit_code == 0);
  CHECK(r2.out == "1/1\n1\n");
}

TEST_CASE("region membership at a point and alpha validation") {
  spit("cli_data_tmp.csv", "0\n10\n");
  auto in_region = run_cli("region --data cli_data_tmp.csv --z 20 --alpha 0.5");
  CHECK(in_region.exit_code == 0);
  CHECK(in_region.out == "1\n");

  auto outside = run_cli("region --data cli_data_tmp.csv --z 20 --alpha 0.7");
  CHECK(outside.exit_code == 0);
  CHECK(outside.out == "0\n");

  auto bad = run_cli("region --data cli_data_tmp.csv --z 20 --alpha 1.2");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("region over a grid writes a mask CSV") {
  spit("cli_data_tmp.csv", "0\n10\n");
  auto no_out = run_cli("region --data cli_data_tmp.csv --grid 5:20:2 --alpha 0.5");
  CHECK(no_out.exit_code == 2);  // grid mode requires --out

  auto ok = run_cli("region --data cli_data_tmp.csv --grid 5:20:2 --alpha 0.5 --out cli_mask_tmp.csv");
  CHECK(ok.exit_code == 0);
  CHECK(slurp("cli_mask_tmp.csv") == "coord_1,member\n5,1\n20,1\n");
  std::remove("cli_mask_tmp.csv");
}

TEST_CASE("sets writes the four mask and ball files") {
  spit("cli_data_tmp.csv", "0\n1\n");
  auto r = run_cli("sets --data cli_data_tmp.csv --beta 0.5 --grid 0:1:3 --out cli_sets_tmp");
  CHECK(r.exit_code == 0);
  CHECK(slurp("cli_sets_tmp_qhat.csv") == "coord_1,member\n0,0\n0.5,1\n1,0\n");
  CHECK(slurp("cli_sets_tmp_shat.csv") == "coord_1,member\n0,1\n0.5,1\n1,1\n");
  std::string proxy = slurp("cli_sets_tmp_proxy.csv");
  CHECK(proxy.rfind("coord_1,member\n", 0) == 0);
  std::string balls = slurp("cli_sets_tmp_balls.csv");
  CHECK(balls.rfind("center_1,radius\n", 0) == 0);
  for (const char* suffix : {"_qhat.csv", "_shat.csv", "_proxy.csv", "_balls.csv"}) {
    std::remove((std::string("cli_sets_tmp") + suffix).c_str());
  }
}

TEST_CASE("experiment runs a config and reproduces its outputs bit for bit") {
  spit("cli_cfg_tmp.json",
       "{\"experiment\":\"coverage\",\"distribution\":{\"kind\":\"gaussian\",\"mean\":[0.0,0.0],"
       "\"sd\":1.0},\"n\":[10],\"alpha\":0.1,\"trials\":100,\"seed\":7}");
  auto r1 = run_cli("experiment --config cli_cfg_tmp.json --out cli_rep_a");
  CHECK(r1.exit_code == 0);
  auto r2 = run_cli("experiment --config cli_cfg_tmp.json --out cli_rep_b");
  CHECK(r2.exit_code == 0);

  std::string csv_a = slurp("cli_rep_a.csv");
  CHECK(csv_a.rfind("n,metric,value,std_error,trials\n", 0) == 0);
  CHECK(csv_a == slurp("cli_rep_b.csv"));
  CHECK(without_wall(slurp("cli_rep_a.json")) == without_wall(slurp("cli_rep_b.json")));

  // a different thread count must not change any number
  auto r3 = run_cli("--threads 3 experiment --config cli_cfg_tmp.json --out cli_rep_c");
  CHECK(r3.exit_code == 0);
  CHECK(csv_a == slurp("cli_rep_c.csv"));

  for (const char* f : {"cli_rep_a.csv", "cli_rep_a.json", "cli_rep_b.csv", "cli_rep_b.json",
                        "cli_rep_c.csv", "cli_rep_c.json", "cli_cfg_tmp.json"}) {
    std::remove(f);
  }
}

TEST_CASE("experiment seed flag overrides the config seed") {
  spit("cli_cfg_tmp.json",
       "{\"experiment\":\"coverage\",\"distribution\":{\"kind\":\"point-mass\",\"center\":[0.0]},"
       "\"n\":[5],\"alpha\":0.1,\"trials\":100,\"seed\":7}");
  auto r = run_cli("experiment --config cli_cfg_tmp.json --out cli_rep_s --seed 99");
  CHECK(r.exit_code == 0);
  std::string js = slurp("cli_rep_s.json");
  CHECK(js.find("\"seed\": 99") != std::string::npos);
  for (const char* f : {"cli_rep_s.csv", "cli_rep_s.json", "cli_cfg_tmp.json"}) std::remove(f);
}

TEST_CASE("bad config is a usage error naming the field") {
  spit("cli_cfg_tmp.json", "{\"experiment\":\"coverage\"}");
  auto r = run_cli("experiment --config cli_cfg_tmp.json --out cli_rep_x");
  CHECK(r.exit_code == 2);
  CHECK(r.out.empty());
  std::remove("cli_cfg_tmp.json");
}

TEST_CASE("unknown subcommands and missing flags are usage errors") {
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("score").exit_code == 2);  // --data and --z required
  CHECK(run_cli("").exit_code == 2);       // a subcommand is required
}

TEST_CASE("version flag reports the library version") {
  auto r = run_cli("--version");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("0.1.0") != std::string::npos);
}
