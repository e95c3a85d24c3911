#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "mtflow/instance.hpp"
#include "mtflow/normalize.hpp"
#include "mtflow/oracle.hpp"

using namespace mtflow;

namespace {

const char* kStar =
    "p tree 4 3\n"
    "e 1 2 1\n"
    "e 1 3 1\n"
    "e 1 4 1\n"
    "t 2\nt 3\nt 4\n";

void check_parse_error(const std::string& text, int line, const std::string& needle) {
  try {
    parse_instance(text);
    FAIL("expected a parse error containing '" << needle << "'");
  } catch (const ParseError& e) {
    CHECK(e.line() == line);
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

// A canonical component re-read as a standalone instance (ids shifted by 1).
Instance tree_as_instance(const CanonicalTree& tree) {
  Instance inst;
  inst.n = tree.n;
  for (std::int32_t v = 1; v < tree.n; ++v)
    inst.edges.push_back({tree.parent[v] + 1, v + 1, tree.cap[v]});
  inst.terminals.push_back(1);
  for (std::int32_t v = 1; v < tree.n; ++v)
    if (tree.is_leaf(v)) inst.terminals.push_back(v + 1);
  std::sort(inst.terminals.begin(), inst.terminals.end());
  return inst;
}

}  // namespace

TEST_CASE("parse accepts the documented grammar") {
  const Instance inst = parse_instance(
      "# a comment\n"
      "p tree 3 2   # trailing comment\n"
      "\n"
      "e 1 2 3\n"
      "e 2 3 5\n"
      "t 3\n"
      "t 1\n");
  CHECK(inst.n == 3);
  REQUIRE(inst.edges.size() == 2);
  CHECK(inst.edges[0].u == 1);
  CHECK(inst.edges[0].v == 2);
  CHECK(inst.edges[0].cap == 3);
  CHECK(inst.terminals == std::vector<std::int32_t>{1, 3});
  CHECK(inst.is_terminal(1));
  CHECK_FALSE(inst.is_terminal(2));
}

TEST_CASE("write then parse is the identity") {
  const Instance inst = parse_instance(kStar);
  std::ostringstream out;
  write_instance(out, inst);
  const Instance again = parse_instance(out.str());
  CHECK(again.n == inst.n);
  REQUIRE(again.edges.size() == inst.edges.size());
  for (std::size_t i = 0; i < inst.edges.size(); ++i) {
    CHECK(again.edges[i].u == inst.edges[i].u);
    CHECK(again.edges[i].v == inst.edges[i].v);
    CHECK(again.edges[i].cap == inst.edges[i].cap);
  }
  CHECK(again.terminals == inst.terminals);
}

TEST_CASE("parse rejects malformed input with the offending line") {
  check_parse_error("e 1 2 1\n", 1, "expected problem line");
  check_parse_error("p tree\n", 1, "malformed problem line");
  check_parse_error("p graph 3 2\n", 1, "malformed problem line");
  check_parse_error("p tree 0 0\n", 1, "vertex count out of range");
  check_parse_error("p tree 2 3\n", 1, "terminal count exceeds vertex count");
  check_parse_error("p tree 2 1\ne 1 2 1\ne 1 2 1\nt 1\n", 3,
                    "edge count mismatch");
  check_parse_error("p tree 3 1\ne 1 2 1\nt 1\n", 3, "edge count mismatch");
  check_parse_error("p tree 3 2\ne 1 2 1\ne 2 3 1\nt 1\nt 2\nt 3\n", 6,
                    "terminal count mismatch");
  check_parse_error("p tree 2 2\ne 1 2\nt 1\nt 2\n", 2, "malformed edge line");
  check_parse_error("p tree 2 1\ne 1 2 5000000000\nt 1\n", 2,
                    "capacity out of range");
  check_parse_error("p tree 2 1\ne 1 2 -3\nt 1\n", 2, "negative capacity");
  check_parse_error("p tree 2 1\ne 1 2 x\nt 1\n", 2, "malformed capacity");
  check_parse_error("p tree 2 1\ne 1 3 1\nt 1\n", 2, "vertex id out of range");
  check_parse_error("p tree 2 1\ne 0 2 1\nt 1\n", 2, "vertex id out of range");
  check_parse_error("p tree 2 1\ne 1 1 1\nt 1\n", 2, "self-loop");
  check_parse_error("p tree 3 1\ne 1 2 1\ne 2 1 1\nt 1\n", 3, "closes a cycle");
  check_parse_error("p tree 2 2\ne 1 2 1\nt 1\nt 1\n", 4, "duplicate terminal");
  check_parse_error("p tree 2 1\ne 1 2 1\nq 1\nt 1\n", 3, "unknown line type");
  check_parse_error("p tree 2 1\ne 1 2 1\n", 0, "terminal count mismatch");
  check_parse_error("", 0, "missing problem line");
}

TEST_CASE("normalize keeps an already-canonical star, rooted at terminal 2") {
  const Normalization norm = normalize(parse_instance(kStar));
  REQUIRE(norm.trees.size() == 1);
  const CanonicalTree& tree = norm.trees[0];
  CHECK(tree.n == 4);
  CHECK(std::ranges::equal(tree.orig_vertex, std::vector<std::int32_t>{2, 1, 3, 4}));
  CHECK(std::ranges::equal(tree.parent, std::vector<std::int32_t>{-1, 0, 1, 1}));
  CHECK(tree.cap[1] == 1);
  CHECK(tree.cap[2] == 1);
  CHECK(tree.cap[3] == 1);
  CHECK(norm.dropped_edges.empty());
  CHECK(norm.dropped_terminals.empty());
}

TEST_CASE("normalize contracts a non-terminal degree-2 vertex to min capacity") {
  const Normalization norm =
      normalize(parse_instance("p tree 3 2\ne 1 2 3\ne 2 3 5\nt 1\nt 3\n"));
  REQUIRE(norm.trees.size() == 1);
  const CanonicalTree& tree = norm.trees[0];
  REQUIRE(tree.n == 2);
  CHECK(tree.orig_vertex[0] == 1);
  CHECK(tree.orig_vertex[1] == 3);
  CHECK(tree.cap[1] == 3);
  // Chain listed from the child end: (2,3) then (1,2).
  REQUIRE(tree.chain_off[2] - tree.chain_off[1] == 2);
  CHECK(tree.chain_edges[tree.chain_off[1]] == 1);
  CHECK(tree.chain_edges[tree.chain_off[1] + 1] == 0);
}

TEST_CASE("normalize splits an internal terminal into components") {
  const Normalization norm =
      normalize(parse_instance("p tree 3 3\ne 1 2 2\ne 2 3 4\nt 1\nt 2\nt 3\n"));
  REQUIRE(norm.trees.size() == 2);
  CHECK(norm.trees[0].n == 2);
  CHECK(std::ranges::equal(norm.trees[0].orig_vertex,
                           std::vector<std::int32_t>{1, 2}));
  CHECK(norm.trees[0].cap[1] == 2);
  CHECK(norm.trees[1].n == 2);
  CHECK(std::ranges::equal(norm.trees[1].orig_vertex,
                           std::vector<std::int32_t>{2, 3}));
  CHECK(norm.trees[1].cap[1] == 4);
}

TEST_CASE("normalize expands a degree-4 vertex into two degree-3 vertices") {
  const Normalization norm = normalize(parse_instance(
      "p tree 5 4\ne 1 2 1\ne 1 3 2\ne 1 4 3\ne 1 5 4\nt 2\nt 3\nt 4\nt 5\n"));
  REQUIRE(norm.trees.size() == 1);
  const CanonicalTree& tree = norm.trees[0];
  CHECK(tree.n == 6);
  std::int32_t internals = 0;
  Value synthetic_cap = 0;
  for (std::int32_t v = 1; v < tree.n; ++v)
    if (!tree.is_leaf(v)) {
      ++internals;
      if (tree.chain_off[v + 1] == tree.chain_off[v]) synthetic_cap = tree.cap[v];
    }
  CHECK(internals == 2);
  CHECK(synthetic_cap == 1 + 2 + 3 + 4);
  for (std::int32_t v = 1; v < tree.n; ++v)
    if (tree.is_leaf(v)) CHECK(tree.chain_off[v + 1] - tree.chain_off[v] == 1);
}

TEST_CASE("normalize drops zero-capacity edges and partnerless terminals") {
  const Normalization norm = normalize(
      parse_instance("p tree 4 2\ne 1 2 0\ne 2 3 5\ne 3 4 2\nt 1\nt 3\n"));
  // Vertex 1 is separated by the dead edge; 4 dangles below 3.
  REQUIRE(norm.trees.empty());
  CHECK(norm.dropped_edges.size() == 3);
  CHECK(norm.dropped_terminals == std::vector<std::int32_t>{1, 3});
}

TEST_CASE("normalized components satisfy the canonical-shape invariants") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    GenParams params;
    params.n = 2 + static_cast<std::int32_t>(seed % 40);
    params.terminal_fraction = 0.1 + 0.8 * static_cast<double>(seed % 7) / 7.0;
    params.max_cap = seed % 3 == 0 ? 3 : 12;  // a third with frequent zeros
    params.seed = seed * 7919 + 1;
    const Instance inst = random_instance(params);
    const Normalization norm = normalize(inst);

    std::vector<int> edge_cover(inst.edges.size(), 0);
    for (const std::int32_t e : norm.dropped_edges) ++edge_cover[e];
    for (const CanonicalTree& tree : norm.trees) {
      REQUIRE(tree.n >= 2);
      CHECK(tree.parent[0] == -1);
      CHECK(tree.child[0][1] == -1);
      REQUIRE(tree.child[0][0] > 0);
      std::int32_t leaves = 0;
      for (std::int32_t v = 1; v < tree.n; ++v) {
        CHECK(tree.cap[v] >= 1);
        CHECK(tree.parent[v] >= 0);
        CHECK(tree.parent[v] < v);  // BFS order
        if (tree.is_leaf(v)) {
          ++leaves;
          CHECK(inst.is_terminal(tree.orig_vertex[v]));
          CHECK(tree.chain_off[v + 1] > tree.chain_off[v]);
        } else {
          CHECK(tree.child[v][0] > 0);
          CHECK(tree.child[v][1] > 0);
        }
        for (std::uint32_t i = tree.chain_off[v]; i < tree.chain_off[v + 1]; ++i)
          ++edge_cover[tree.chain_edges[i]];
      }
      CHECK(leaves >= 1);
      CHECK(inst.is_terminal(tree.orig_vertex[0]));
    }
    // Every original edge lies in exactly one chain or is dropped.
    for (const int c : edge_cover) CHECK(c == 1);
  }
}

TEST_CASE("reductions preserve the brute-force optimum") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    GenParams params;
    params.n = 2 + static_cast<std::int32_t>(seed % 11);
    params.terminal_fraction = 0.45;
    params.max_cap = 4;
    params.seed = 424242 + seed;
    const Instance inst = random_instance(params);
    const Normalization norm = normalize(inst);
    Value split_sum = 0;
    for (const CanonicalTree& tree : norm.trees)
      split_sum += brute_force(tree_as_instance(tree)).alpha;
    CHECK(split_sum == brute_force(inst).alpha);
  }
}

TEST_CASE("project_flow_back fills chains and rejects bad shapes") {
  const Instance inst =
      parse_instance("p tree 3 2\ne 1 2 3\ne 2 3 5\nt 1\nt 3\n");
  const Normalization norm = normalize(inst);
  REQUIRE(norm.trees.size() == 1);
  const std::vector<Value> flat =
      project_flow_back(inst, norm, {{0, 3}});
  CHECK(flat == std::vector<Value>{3, 3});
  CHECK_THROWS_AS(project_flow_back(inst, norm, {}), std::invalid_argument);
  CHECK_THROWS_AS(project_flow_back(inst, norm, {{0, 3, 1}}),
                  std::invalid_argument);
}
