#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "mtflow/instance.hpp"
#include "mtflow/oracle.hpp"

using namespace mtflow;

namespace {

// Re-checks a witness by routing it along tree paths and comparing loads
// against capacities.
void check_witness(const Instance& inst, const BruteForceResult& res) {
  Value total = 0;
  std::vector<std::vector<std::pair<std::int32_t, std::size_t>>> adj(inst.n +
                                                                     1);
  for (std::size_t i = 0; i < inst.edges.size(); ++i) {
    adj[inst.edges[i].u].push_back({inst.edges[i].v, i});
    adj[inst.edges[i].v].push_back({inst.edges[i].u, i});
  }
  std::vector<Value> load(inst.edges.size(), 0);
  const std::set<std::int32_t> tset(inst.terminals.begin(),
                                    inst.terminals.end());
  for (const PairFlow& p : res.witness) {
    REQUIRE(p.s < p.t);
    REQUIRE(tset.count(p.s) == 1);
    REQUIRE(tset.count(p.t) == 1);
    REQUIRE(p.units >= 1);
    total += p.units;
    // BFS path from s to t.
    std::vector<std::int32_t> par(inst.n + 1, 0);
    std::vector<std::size_t> pare(inst.n + 1, 0);
    std::vector<std::int32_t> queue{p.s};
    par[p.s] = p.s;
    for (std::size_t qi = 0; qi < queue.size(); ++qi)
      for (const auto& [w, ei] : adj[queue[qi]])
        if (par[w] == 0) {
          par[w] = queue[qi];
          pare[w] = ei;
          queue.push_back(w);
        }
    REQUIRE(par[p.t] != 0);
    for (std::int32_t v = p.t; v != p.s; v = par[v]) load[pare[v]] += p.units;
  }
  CHECK(total == res.alpha);
  for (std::size_t i = 0; i < inst.edges.size(); ++i)
    CHECK(load[i] <= inst.edges[i].cap);
}

}  // namespace

TEST_CASE("oracle: frozen optima") {
  CHECK(brute_force(parse_instance(
                        "p tree 4 3\ne 1 2 1\ne 1 3 1\ne 1 4 1\nt 2\nt 3\nt 4\n"))
            .alpha == 1);
  CHECK(brute_force(parse_instance(
                        "p tree 4 3\ne 1 2 2\ne 2 3 5\ne 2 4 1\nt 1\nt 3\nt 4\n"))
            .alpha == 3);
  CHECK(brute_force(parse_instance("p tree 2 2\ne 1 2 4\nt 1\nt 2\n")).alpha ==
        4);
  CHECK(brute_force(parse_instance("p tree 2 2\ne 1 2 0\nt 1\nt 2\n")).alpha ==
        0);
}

TEST_CASE("oracle witnesses are feasible routings of the claimed value") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    GenParams params;
    params.n = 2 + static_cast<std::int32_t>(seed % 10);
    params.terminal_fraction = 0.5;
    params.max_cap = 3;
    params.seed = 4242 + seed;
    const Instance inst = random_instance(params);
    check_witness(inst, brute_force(inst));
  }
}

TEST_CASE("oracle refuses oversized instances") {
  GenParams params;
  params.n = 40;
  params.terminal_fraction = 0.9;
  params.max_cap = 1000;
  params.seed = 7;
  const Instance inst = random_instance(params);
  CHECK_THROWS_AS(brute_force(inst), OracleLimitError);
}

TEST_CASE("generator: deterministic, different across seeds, valid trees") {
  GenParams params;
  params.n = 60;
  params.terminal_fraction = 0.3;
  params.max_cap = 12;
  params.seed = 99;
  const Instance a = random_instance(params);
  const Instance b = random_instance(params);
  params.seed = 100;
  const Instance c = random_instance(params);

  std::ostringstream sa, sb, sc;
  write_instance(sa, a);
  write_instance(sb, b);
  write_instance(sc, c);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str() != sc.str());

  // The serialized form must parse back as a valid tree instance.
  const Instance back = parse_instance(sa.str());
  CHECK(back.n == 60);
  CHECK(back.edges.size() == 59);
  CHECK(back.terminals.size() == 18);  // round(0.3 * 60)
  CHECK(std::is_sorted(back.terminals.begin(), back.terminals.end()));
  for (const auto& e : a.edges) CHECK(e.cap <= 12);
}

TEST_CASE("generator: terminal count clamps to [2, n]") {
  GenParams params;
  params.n = 5;
  params.terminal_fraction = 0.01;
  params.max_cap = 1;
  params.seed = 1;
  CHECK(random_instance(params).terminals.size() == 2);
  params.terminal_fraction = 1.0;
  CHECK(random_instance(params).terminals.size() == 5);
}

TEST_CASE("generator rejects bad parameters") {
  GenParams params;
  params.n = 1;
  CHECK_THROWS_AS(random_instance(params), std::invalid_argument);
  params.n = 4;
  params.terminal_fraction = 0.0;
  CHECK_THROWS_AS(random_instance(params), std::invalid_argument);
  params.terminal_fraction = 1.5;
  CHECK_THROWS_AS(random_instance(params), std::invalid_argument);
  params.terminal_fraction = 0.5;
  params.max_cap = kMaxCapacity + 1;
  CHECK_THROWS_AS(random_instance(params), std::invalid_argument);
}
