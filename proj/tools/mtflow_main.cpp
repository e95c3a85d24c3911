// Command-line front end: solve, verify, gen, bench.
//
// Exit codes: 0 success; 1 usage or internal error; 2 parse error;
// 3 verification failure or oracle mismatch.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mtflow/certificate.hpp"
#include "mtflow/instance.hpp"
#include "mtflow/oracle.hpp"
#include "mtflow/solver.hpp"

namespace {

mtflow::Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mtflow::ParseError(0, "cannot open " + path);
  return mtflow::parse_instance(in);
}

mtflow::SolutionDoc load_solution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mtflow::ParseError(0, "cannot open " + path);
  return mtflow::read_solution(in);
}

int run_solve(const std::string& file, const std::string& format,
              bool with_cert, bool with_pairs) {
  const mtflow::Instance inst = load_instance(file);
  const mtflow::Solution sol = mtflow::solve(inst);
  mtflow::InstanceCertificate cert;
  std::vector<mtflow::PairFlow> pairs;
  if (with_cert) cert = mtflow::build_certificate(inst, sol);
  if (with_pairs) pairs = mtflow::build_decomposition(inst, sol);
  if (format == "text") {
    const mtflow::SolutionDoc doc = mtflow::make_doc(
        inst, sol, with_cert ? &cert : nullptr, with_pairs ? &pairs : nullptr);
    mtflow::write_solution(std::cout, doc);
    return 0;
  }
  nlohmann::ordered_json j;
  j["value"] = sol.value2;
  j["alpha"] = sol.value2 / 2;
  j["edges"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < inst.edges.size(); ++i)
    j["edges"].push_back({{"u", inst.edges[i].u},
                          {"v", inst.edges[i].v},
                          {"flow", sol.edge_flow[i]}});
  if (with_pairs) {
    j["pairs"] = nlohmann::ordered_json::array();
    for (const auto& p : pairs)
      j["pairs"].push_back({{"s", p.s}, {"t", p.t}, {"units", p.units}});
  }
  if (with_cert) {
    j["cuts"] = nlohmann::ordered_json::array();
    for (const auto& c : cert.cuts)
      j["cuts"].push_back({{"terminal", c.terminal}, {"vertices", c.vertices}});
    j["odd_sets"] = cert.odd_sets;
    j["gamma"] = cert.gamma;
    j["kappa"] = cert.kappa;
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int run_verify(const std::string& file, const std::string& solfile) {
  const mtflow::Instance inst = load_instance(file);
  const mtflow::SolutionDoc doc = load_solution(solfile);
  const mtflow::VerificationReport rep = mtflow::verify_solution(inst, doc);
  mtflow::write_report(std::cout, rep);
  return rep.pass ? 0 : 3;
}

int run_gen(std::int32_t n, std::int32_t terminals, mtflow::Value max_cap,
            std::uint64_t seed, const std::string& out_path) {
  if (n < 2) {
    std::cerr << "error: --n must be at least 2\n";
    return 1;
  }
  if (terminals < 2 || terminals > n) {
    std::cerr << "error: --terminals must be between 2 and n\n";
    return 1;
  }
  mtflow::GenParams params;
  params.n = n;
  params.terminal_fraction = static_cast<double>(terminals) / n;
  params.max_cap = max_cap;
  params.seed = seed;
  const mtflow::Instance inst = mtflow::random_instance(params);
  if (out_path.empty()) {
    mtflow::write_instance(std::cout, inst);
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: cannot write " << out_path << '\n';
      return 1;
    }
    mtflow::write_instance(out, inst);
  }
  return 0;
}

int run_bench(const std::string& sizes_csv, std::uint64_t seed,
              std::int64_t oracle_check, std::int32_t threads) {
  std::vector<std::int64_t> sizes;
  {
    std::stringstream ss(sizes_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        sizes.push_back(std::stoll(item));
      } catch (const std::exception&) {
        std::cerr << "error: bad size '" << item << "'\n";
        return 1;
      }
      if (sizes.back() < 2) {
        std::cerr << "error: sizes must be at least 2\n";
        return 1;
      }
    }
  }
  if (sizes.empty()) {
    std::cerr << "error: --sizes is empty\n";
    return 1;
  }

  std::vector<std::string> rows(sizes.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next.fetch_add(1); i < sizes.size();
         i = next.fetch_add(1)) {
      mtflow::GenParams params;
      params.n = static_cast<std::int32_t>(sizes[i]);
      params.terminal_fraction = 0.3;
      params.max_cap = 1000000;
      params.seed = seed + i;
      const mtflow::Instance inst = mtflow::random_instance(params);
      const auto t0 = std::chrono::steady_clock::now();
      const mtflow::Solution sol = mtflow::solve(inst);
      const auto t1 = std::chrono::steady_clock::now();
      const double ms =
          std::chrono::duration<double, std::milli>(t1 - t0).count();
      const double ns_per_edge = ms * 1e6 / static_cast<double>(inst.edges.size());
      std::ostringstream row;
      row << "n=" << sizes[i] << " alpha=" << sol.value2 / 2 << " wall_ms=" << ms
          << " ns_per_edge=" << ns_per_edge;
      rows[i] = row.str();
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::int32_t t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& row : rows) std::cout << row << '\n';

  for (std::int64_t i = 0; i < oracle_check; ++i) {
    mtflow::GenParams params;
    params.n = static_cast<std::int32_t>(2 + (i % 11));
    params.terminal_fraction = 0.45;
    params.max_cap = 4;
    params.seed = seed * 1000003ull + static_cast<std::uint64_t>(i);
    const mtflow::Instance inst = mtflow::random_instance(params);
    const mtflow::Value got = mtflow::solve(inst).value2 / 2;
    const mtflow::Value want = mtflow::brute_force(inst).alpha;
    if (got != want) {
      std::cout << "oracle mismatch at seed " << params.seed << ": solver "
                << got << ", oracle " << want << '\n';
      return 3;
    }
  }
  if (oracle_check > 0)
    std::cout << "oracle check: " << oracle_check << " instances matched\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maximum integral multiterminal flow on capacitated trees"};
  app.require_subcommand(1);

  std::string solve_file, solve_format = "text";
  bool with_cert = false, with_pairs = false;
  auto* cmd_solve = app.add_subcommand("solve", "solve an instance");
  cmd_solve->add_option("file", solve_file, "instance file")->required();
  cmd_solve->add_option("--format", solve_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  cmd_solve->add_flag("--certificate", with_cert,
                      "include the optimal cut-system");
  cmd_solve->add_flag("--decompose", with_pairs,
                      "include a terminal-pair path decomposition");

  std::string verify_file, verify_sol;
  auto* cmd_verify =
      app.add_subcommand("verify", "re-check a solution document");
  cmd_verify->add_option("file", verify_file, "instance file")->required();
  cmd_verify->add_option("solfile", verify_sol, "solution file")->required();

  std::int32_t gen_n = 0, gen_terminals = 2;
  std::uint64_t gen_max_cap = 8, gen_seed = 0;
  std::string gen_out;
  auto* cmd_gen = app.add_subcommand("gen", "generate a random instance");
  cmd_gen->add_option("--n", gen_n, "vertex count")->required();
  cmd_gen->add_option("--terminals", gen_terminals, "terminal count");
  cmd_gen->add_option("--max-cap", gen_max_cap, "maximum capacity");
  cmd_gen->add_option("--seed", gen_seed, "generator seed");
  cmd_gen->add_option("-o,--output", gen_out, "output file (default stdout)");

  std::string bench_sizes;
  std::uint64_t bench_seed = 0;
  std::int64_t bench_oracle = 0;
  std::int32_t bench_threads = 1;
  auto* cmd_bench = app.add_subcommand("bench", "time solves per size");
  cmd_bench->add_option("--sizes", bench_sizes, "comma-separated vertex counts")
      ->required();
  cmd_bench->add_option("--seed", bench_seed, "generator seed");
  cmd_bench->add_option("--oracle-check", bench_oracle,
                        "also cross-check N small instances");
  cmd_bench->add_option("--threads", bench_threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(cmd_solve))
      return run_solve(solve_file, solve_format, with_cert, with_pairs);
    if (app.got_subcommand(cmd_verify)) return run_verify(verify_file, verify_sol);
    if (app.got_subcommand(cmd_gen))
      return run_gen(gen_n, gen_terminals, gen_max_cap, gen_seed, gen_out);
    if (app.got_subcommand(cmd_bench))
      return run_bench(bench_sizes, bench_seed, bench_oracle, bench_threads);
  } catch (const mtflow::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
