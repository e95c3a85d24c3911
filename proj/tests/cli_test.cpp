// End-to-end tests for the command line tool.  argv[1] is the binary path;
// commands run through the shell with stdout+stderr captured to a file.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

int g_failures = 0;

#define EXPECT(cond, what)                                              \
  do {                                                                  \
    if (!(cond)) {                                                      \
      std::cout << "FAIL " << what << " (line " << __LINE__ << ")\n";   \
      ++g_failures;                                                     \
    }                                                                   \
  } while (0)

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& cmd) {
  const char* capture = "cli_capture.txt";
  const int status = std::system((cmd + " > " + capture + " 2>&1").c_str());
  RunResult r;
  if (WIFEXITED(status)) r.code = WEXITSTATUS(status);
  std::ifstream in(capture);
  std::ostringstream buf;
  buf << in.rdbuf();
  r.out = buf.str();
  return r;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: cli_test <path-to-mtflow>\n";
    return 2;
  }
  const std::string bin = argv[1];

  write_file("cli_star.tree",
             "p tree 4 3\ne 1 2 1\ne 1 3 1\ne 1 4 1\nt 2\nt 3\nt 4\n");

  {
    const RunResult r = run(bin + " solve cli_star.tree");
    EXPECT(r.code == 0, "solve exits 0");
    EXPECT(contains(r.out, "value 2\n"), "solve prints the flow value");
    EXPECT(contains(r.out, "f 1 2 0"), "solve prints per-edge flow");
  }

  {
    const RunResult r =
        run(bin + " solve cli_star.tree --certificate --decompose");
    EXPECT(r.code == 0, "full solve exits 0");
    write_file("cli_star.sol", r.out);
    const RunResult v = run(bin + " verify cli_star.tree cli_star.sol");
    EXPECT(v.code == 0, "verify of a fresh solution exits 0");
    EXPECT(contains(v.out, "PASS (6/6 checks)"), "verify reports 6/6");
    EXPECT(contains(v.out, "check 1 feasibility: PASS"), "per-check lines");
    EXPECT(contains(v.out, "check 6 duality: PASS"), "per-check lines");
  }

  {
    // Keep the flow but drop the certificate: the cut-system check fails.
    write_file("cli_bad.sol", "value 2\nf 1 2 0\nf 1 3 1\nf 1 4 1\n");
    const RunResult v = run(bin + " verify cli_star.tree cli_bad.sol");
    EXPECT(v.code == 3, "verify of an incomplete solution exits 3");
    EXPECT(contains(v.out, "FAIL"), "verify reports the failure");
  }

  {
    write_file("cli_broken.tree", "p tree x 3\n");
    const RunResult r = run(bin + " solve cli_broken.tree");
    EXPECT(r.code == 2, "instance parse error exits 2");
    EXPECT(contains(r.out, "error:"), "parse error is reported");
    const RunResult m = run(bin + " solve cli_missing.tree");
    EXPECT(m.code == 2, "missing file exits 2");
    EXPECT(contains(m.out, "cannot open"), "missing file is reported");
  }

  {
    const RunResult r = run(bin + " solve");
    EXPECT(r.code == 1, "missing argument exits 1");
    const RunResult s = run(bin + " frobnicate");
    EXPECT(s.code == 1, "unknown subcommand exits 1");
    const RunResult h = run(bin + " --help");
    EXPECT(h.code == 0, "--help exits 0");
    EXPECT(contains(h.out, "solve"), "help lists subcommands");
    const RunResult g = run(bin + " gen --n 1");
    EXPECT(g.code == 1, "gen with n < 2 exits 1");
  }

  {
    const RunResult a =
        run(bin + " gen --n 40 --terminals 6 --max-cap 9 --seed 5 -o cli_a.tree");
    const RunResult b =
        run(bin + " gen --n 40 --terminals 6 --max-cap 9 --seed 5 -o cli_b.tree");
    EXPECT(a.code == 0 && b.code == 0, "gen exits 0");
    const std::string ta = read_file("cli_a.tree");
    EXPECT(ta == read_file("cli_b.tree"), "gen is deterministic per seed");
    EXPECT(contains(ta, "p tree 40 6"), "gen honors --n and --terminals");
    const RunResult s = run(bin + " solve cli_a.tree --certificate --decompose");
    EXPECT(s.code == 0, "generated instance solves");
    write_file("cli_a.sol", s.out);
    const RunResult v = run(bin + " verify cli_a.tree cli_a.sol");
    EXPECT(v.code == 0, "generated instance verifies 6/6");
  }

  {
    const RunResult r = run(
        bin + " solve cli_star.tree --format json --certificate --decompose");
    EXPECT(r.code == 0, "json solve exits 0");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(r.out);
    } catch (const std::exception& e) {
      EXPECT(false, std::string("json output parses: ") + e.what());
    }
    if (!j.is_null()) {
      EXPECT(j["value"] == 2, "json value");
      EXPECT(j["alpha"] == 1, "json alpha");
      EXPECT(j["edges"].size() == 3, "json edges");
      EXPECT(j["edges"][0]["flow"] == 0, "json edge flow");
      EXPECT(j["pairs"].size() == 1, "json pairs");
      EXPECT(j["cuts"].size() == 3, "json cuts");
      EXPECT(j["odd_sets"].size() == 1, "json odd sets");
      EXPECT(j["gamma"] == 3, "json gamma");
      EXPECT(j["kappa"] == 1, "json kappa");
    }
  }

  {
    const RunResult r =
        run(bin + " bench --sizes 64,128 --seed 2 --oracle-check 5");
    EXPECT(r.code == 0, "bench exits 0");
    EXPECT(contains(r.out, "n=64 "), "bench row for first size");
    EXPECT(contains(r.out, "n=128 "), "bench row for second size");
    EXPECT(contains(r.out, "ns_per_edge="), "bench reports per-edge time");
    EXPECT(contains(r.out, "oracle check: 5 instances matched"),
           "bench oracle check reports");
  }

  if (g_failures == 0) {
    std::cout << "cli_test: all checks passed\n";
    return 0;
  }
  std::cout << "cli_test: " << g_failures << " checks failed\n";
  return 1;
}
