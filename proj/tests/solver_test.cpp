#include <doctest.h>

#include <vector>

#include "mtflow/instance.hpp"
#include "mtflow/oracle.hpp"
#include "mtflow/solver.hpp"

using namespace mtflow;

TEST_CASE("unit star: one unit of flow between two of the three tips") {
  const Instance inst = parse_instance(
      "p tree 4 3\ne 1 2 1\ne 1 3 1\ne 1 4 1\nt 2\nt 3\nt 4\n");
  const Solution sol = solve(inst);
  CHECK(sol.value2 == 2);
  CHECK(sol.edge_flow == std::vector<Value>{0, 1, 1});
}

TEST_CASE("dominating child absorbs the capacity shortfall above it") {
  const Instance inst = parse_instance(
      "p tree 4 3\ne 1 2 2\ne 2 3 5\ne 2 4 1\nt 1\nt 3\nt 4\n");
  const Solution sol = solve(inst);
  CHECK(sol.value2 == 6);
  CHECK(sol.edge_flow == std::vector<Value>{2, 3, 1});
}

TEST_CASE("two terminals across a path: bottleneck") {
  const Instance inst =
      parse_instance("p tree 3 2\ne 1 2 3\ne 2 3 5\nt 1\nt 3\n");
  const Solution sol = solve(inst);
  CHECK(sol.value2 == 6);
  CHECK(sol.edge_flow == std::vector<Value>{3, 3});
}

TEST_CASE("internal terminal splits the problem; dangling side is dropped") {
  const Instance inst =
      parse_instance("p tree 3 2\ne 1 2 3\ne 2 3 7\nt 1\nt 2\n");
  const Solution sol = solve(inst);
  CHECK(sol.value2 == 6);
  CHECK(sol.edge_flow == std::vector<Value>{3, 0});
}

TEST_CASE("all-zero capacities solve to zero") {
  const Instance inst =
      parse_instance("p tree 3 2\ne 1 2 0\ne 2 3 0\nt 1\nt 3\n");
  const Solution sol = solve(inst);
  CHECK(sol.value2 == 0);
  CHECK(sol.edge_flow == std::vector<Value>{0, 0});
  CHECK(sol.norm.trees.empty());
}

TEST_CASE("solver equals the brute-force oracle on guarded instances") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    GenParams params;
    params.n = 2 + static_cast<std::int32_t>(seed % 11);
    params.terminal_fraction = 0.45;
    params.max_cap = 4;
    params.seed = 1000 + seed;
    const Instance inst = random_instance(params);
    const Value got = solve(inst).value2;
    const Value want = brute_force(inst).alpha;
    INFO("seed ", params.seed, " n ", params.n);
    REQUIRE(got == 2 * want);
  }
}

TEST_CASE("solve is deterministic") {
  GenParams params;
  params.n = 4000;
  params.terminal_fraction = 0.3;
  params.max_cap = 100;
  params.seed = 9;
  const Instance inst = random_instance(params);
  const Solution a = solve(inst);
  const Solution b = solve(inst);
  CHECK(a.value2 == b.value2);
  CHECK(a.edge_flow == b.edge_flow);
}

TEST_CASE("labels: parity, ordering, capacity bound, saturation membership") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    GenParams params;
    params.n = 2 + static_cast<std::int32_t>(seed * 17 % 300);
    params.terminal_fraction = 0.25 + 0.5 * static_cast<double>(seed % 4) / 4.0;
    params.max_cap = seed % 2 ? 9 : 2;
    params.seed = 31337 + seed;
    const Instance inst = random_instance(params);
    const Solution sol = solve(inst);
    for (std::size_t ti = 0; ti < sol.norm.trees.size(); ++ti) {
      const CanonicalTree& tree = sol.norm.trees[ti];
      const EdgeLabels& lb = sol.labels[ti];
      const FlowAssignment& fa = sol.flows[ti];
      for (std::int32_t v = 1; v < tree.n; ++v) {
        const ParityInterval psi = lb.psi[v];
        REQUIRE(psi.lo <= psi.hi);
        REQUIRE(((psi.lo ^ psi.hi) & 1) == 0);
        REQUIRE(psi.hi <= tree.cap[v]);
        REQUIRE(psi.contains(fa.target[v]));
        REQUIRE(fa.flow[v] <= fa.target[v]);
        // A saturated edge always has its capacity among the achievable
        // blocking values.
        if (fa.flow[v] == tree.cap[v]) REQUIRE(psi.contains(tree.cap[v]));
      }
    }
  }
}

TEST_CASE("value2 is even and matches terminal-incident flow") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    GenParams params;
    params.n = 100;
    params.terminal_fraction = 0.4;
    params.max_cap = 7;
    params.seed = 555 + seed;
    const Instance inst = random_instance(params);
    const Solution sol = solve(inst);
    CHECK((sol.value2 & 1) == 0);
    std::vector<Value> vsum(inst.n + 1, 0);
    for (std::size_t i = 0; i < inst.edges.size(); ++i) {
      vsum[inst.edges[i].u] += sol.edge_flow[i];
      vsum[inst.edges[i].v] += sol.edge_flow[i];
    }
    Value total = 0;
    for (const std::int32_t t : inst.terminals) total += vsum[t];
    CHECK(total == sol.value2);
    for (std::size_t i = 0; i < inst.edges.size(); ++i)
      CHECK(sol.edge_flow[i] <= inst.edges[i].cap);
  }
}
