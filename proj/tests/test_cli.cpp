#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "nmntt/trace.hpp"

namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int status = -1;
  std::string out;
};

// Scratch directory per test case, removed on destruction.
struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() /
          ("nmntt_cli_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter()++));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  fs::path file(const std::string& name) const { return dir / name; }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

CmdResult run_cli(const Scratch& s, const std::string& args) {
  static int n = 0;
  const fs::path cap = s.dir / ("capture_" + std::to_string(n++) + ".txt");
  const std::string cmd = std::string(NMNTT_CLI_PATH) + " " + args + " > " +
                          cap.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  CmdResult res;
  if (WIFEXITED(rc)) res.status = WEXITSTATUS(rc);
  std::ifstream in(cap);
  std::stringstream ss;
  ss << in.rdbuf();
  res.out = ss.str();
  return res;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("ntt and intt on coefficient files") {
  Scratch s;
  write_file(s.file("in.txt"), "1 2 3 4\n");
  auto r = run_cli(s, "ntt --n 4 --q 17 --input " + s.file("in.txt").string());
  CHECK(r.status == 0);
  CHECK(r.out == "10 7 15 6\n");

  write_file(s.file("freq.txt"), "10 7 15 6");
  r = run_cli(s, "intt --n 4 --q 17 --input " + s.file("freq.txt").string());
  CHECK(r.status == 0);
  CHECK(r.out == "1 2 3 4\n");

  // file output round-trips through the reader format
  r = run_cli(s, "ntt --n 4 --q 17 --input " + s.file("in.txt").string() +
                     " --output " + s.file("out.txt").string());
  CHECK(r.status == 0);
  CHECK(read_file(s.file("out.txt")) == "10\n7\n15\n6\n");
}

TEST_CASE("polymul multiplies in the cyclic ring") {
  Scratch s;
  write_file(s.file("a.txt"), "1 1 1 1\n");
  write_file(s.file("b.txt"), "1 1 1 1\n");
  const auto r = run_cli(s, "polymul --n 4 --q 17 --input " +
                                s.file("a.txt").string() + " --input-b " +
                                s.file("b.txt").string());
  CHECK(r.status == 0);
  CHECK(r.out == "4 4 4 4\n");
}

TEST_CASE("coefficient file errors are loud and nonzero") {
  Scratch s;
  write_file(s.file("short.txt"), "1 2 3\n");
  auto r = run_cli(s, "ntt --n 4 --q 17 --input " + s.file("short.txt").string());
  CHECK(r.status == 1);
  CHECK(r.out.find("found 3") != std::string::npos);

  write_file(s.file("range.txt"), "1 2 3 99999\n");
  r = run_cli(s, "ntt --n 4 --q 12289 --input " + s.file("range.txt").string());
  CHECK(r.status == 1);
  CHECK(r.out.find("[0, q)") != std::string::npos);

  write_file(s.file("junk.txt"), "1 2 x 4\n");
  r = run_cli(s, "ntt --n 4 --q 17 --input " + s.file("junk.txt").string());
  CHECK(r.status == 1);

  write_file(s.file("extra.txt"), "1 2 3 4 5\n");
  r = run_cli(s, "ntt --n 4 --q 17 --input " + s.file("extra.txt").string());
  CHECK(r.status == 1);
  CHECK(r.out.find("trailing") != std::string::npos);

  r = run_cli(s, "ntt --n 4 --q 17 --input " + s.file("missing.txt").string());
  CHECK(r.status == 1);
}

TEST_CASE("config errors exit nonzero without partial stats") {
  Scratch s;
  auto r = run_cli(s, "simulate --n 100 --stats " + s.file("s.json").string());
  CHECK(r.status == 1);
  CHECK_FALSE(fs::exists(s.file("s.json")));

  // no default frequency away from the published points
  r = run_cli(s, "simulate --n 16");
  CHECK(r.status == 1);
  CHECK(r.out.find("--freq-mhz") != std::string::npos);

  r = run_cli(s, "ntt --n 4");  // --input is required
  CHECK(r.status != 0);
  r = run_cli(s, "frobnicate --n 4");
  CHECK(r.status != 0);
}

TEST_CASE("simulate writes stats, output and a valid trace") {
  Scratch s;
  auto r = run_cli(s, "simulate --n 256 --stats " + s.file("s.json").string());
  CHECK(r.status == 0);
  const std::string stats = read_file(s.file("s.json"));
  CHECK(stats.find("\"total_cycles\":2624") != std::string::npos);
  CHECK(stats.find("\"latency_us\":14.909091") != std::string::npos);
  CHECK(r.out == stats);  // same record on stdout

  write_file(s.file("in.txt"), "3 1 4 1 5 9 2 6 5 3 5 8 9 7 9 3\n");
  r = run_cli(s, "simulate --n 16 --freq-mhz 100 --input " +
                     s.file("in.txt").string() + " --output " +
                     s.file("sim_out.txt").string() + " --trace " +
                     s.file("t.jsonl").string());
  CHECK(r.status == 0);

  auto lib = run_cli(s, "ntt --n 16 --input " + s.file("in.txt").string() +
                            " --output " + s.file("lib_out.txt").string());
  CHECK(lib.status == 0);
  CHECK(read_file(s.file("sim_out.txt")) == read_file(s.file("lib_out.txt")));

  std::ifstream trace(s.file("t.jsonl"));
  const nmntt::sim::TraceValidation v = nmntt::sim::validate_trace(trace);
  CHECK(v.ok);
  INFO(v.error);
  CHECK(v.events > 0);
}

TEST_CASE("simulate convolution runs and inverse direction work") {
  Scratch s;
  write_file(s.file("a.txt"), "1 1 1 1\n");
  write_file(s.file("b.txt"), "1 1 1 1\n");
  auto r = run_cli(s, "simulate --n 4 --q 17 --bitwidth 5 --freq-mhz 50"
                      " --input " + s.file("a.txt").string() +
                      " --input-b " + s.file("b.txt").string() +
                      " --output " + s.file("prod.txt").string());
  CHECK(r.status == 0);
  CHECK(r.out.find("\"op\":\"polymul\"") != std::string::npos);
  CHECK(read_file(s.file("prod.txt")) == "4\n4\n4\n4\n");

  r = run_cli(s, "simulate --n 4 --q 17 --bitwidth 5 --freq-mhz 50"
                 " --direction inverse --input " + s.file("a.txt").string());
  CHECK(r.status == 0);
  CHECK(r.out.find("\"op\":\"intt\"") != std::string::npos);

  r = run_cli(s, "simulate --n 4 --q 17 --bitwidth 5 --freq-mhz 50"
                 " --direction inverse --input " + s.file("a.txt").string() +
                 " --input-b " + s.file("b.txt").string());
  CHECK(r.status == 1);
}

TEST_CASE("seeded runs are reproducible") {
  Scratch s;
  auto r1 = run_cli(s, "simulate --n 256 --seed 7 --output " +
                           s.file("o1.txt").string());
  auto r2 = run_cli(s, "simulate --n 256 --seed 7 --output " +
                           s.file("o2.txt").string());
  CHECK(r1.status == 0);
  CHECK(r2.status == 0);
  CHECK(r1.out == r2.out);
  CHECK(read_file(s.file("o1.txt")) == read_file(s.file("o2.txt")));

  auto r3 = run_cli(s, "simulate --n 256 --seed 8 --output " +
                           s.file("o3.txt").string());
  CHECK(r3.status == 0);
  CHECK(read_file(s.file("o1.txt")) != read_file(s.file("o3.txt")));

  auto v1 = run_cli(s, "verify --n 16 --seed 1");
  auto v2 = run_cli(s, "verify --n 16 --seed 1");
  CHECK(v1.status == 0);
  CHECK(v1.out == v2.out);
  CHECK(v1.out.find("all checks passed") != std::string::npos);
}

TEST_CASE("sweep emits one record per point with growing totals") {
  Scratch s;
  const auto r = run_cli(s, "sweep --stats " + s.file("sweep.jsonl").string());
  CHECK(r.status == 0);
  std::istringstream lines(read_file(s.file("sweep.jsonl")));
  std::string line;
  int count = 0;
  std::uint64_t prev = 0;
  while (std::getline(lines, line)) {
    const auto pos = line.find("\"total_cycles\":");
    REQUIRE(pos != std::string::npos);
    const std::uint64_t total = std::stoull(line.substr(pos + 15));
    CHECK(total > prev);
    prev = total;
    ++count;
  }
  CHECK(count == 3);

  // a point without a published frequency needs --freq-mhz
  auto bad = run_cli(s, "sweep --n 4,8");
  CHECK(bad.status == 1);
  auto ok = run_cli(s, "sweep --n 4,8 --freq-mhz 10 --q 17 --bitwidth 5");
  CHECK(ok.status == 0);
}

TEST_CASE("calibration file overrides the cost model") {
  Scratch s;
  // the shipped defaults file must be a no-op
  auto base = run_cli(s, "simulate --n 256 --seed 3");
  auto with = run_cli(s, "simulate --n 256 --seed 3 --calib " +
                             std::string(NMNTT_CALIB_JSON));
  CHECK(base.status == 0);
  CHECK(with.status == 0);
  CHECK(base.out == with.out);

  // narrower I/O mux: io = 2 * ceil(256*14/14) = 512, total = 512 + 8*296
  write_file(s.file("c.json"), "{\"io_mux_width\": 14}\n");
  auto narrow = run_cli(s, "simulate --n 256 --calib " + s.file("c.json").string());
  CHECK(narrow.status == 0);
  CHECK(narrow.out.find("\"io_cycles\":512") != std::string::npos);
  CHECK(narrow.out.find("\"total_cycles\":2880") != std::string::npos);

  write_file(s.file("bad.json"), "{\"stage9_overhead\": 1}\n");
  auto bad = run_cli(s, "simulate --n 256 --calib " + s.file("bad.json").string());
  CHECK(bad.status == 1);
  CHECK(bad.out.find("unknown key") != std::string::npos);

  auto missing = run_cli(s, "simulate --n 256 --calib " +
                                s.file("nope.json").string());
  CHECK(missing.status == 1);
}
