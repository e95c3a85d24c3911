#pragma once

#include <memory>
#include <memory_resource>
#include <vector>

#include "mtflow/instance.hpp"
#include "mtflow/interval.hpp"
#include "mtflow/normalize.hpp"
#include "mtflow/types.hpp"

namespace mtflow {

// Per-edge value sets computed bottom-up.  psi[v] is the exact set of flow
// values edge v can carry in a blocking flow of its subtree; unclamped[v] is
// the product of the two child sets before the capacity cut-off.  Edge v is
// "dominating" when its values strictly exceed everything its sibling can
// carry (sibling.hi + 2 <= psi[v].lo): every blocking flow then routes at
// least psi[v].lo units from above the join into v's subtree, headroom the
// second pass may consume.
//
// The containers take a memory resource so per-component results can share
// one arena (a forest holds many small components; one heap block each would
// dominate the solve).  Default-constructed instances use the global heap.
struct EdgeLabels {
  std::pmr::vector<ParityInterval> psi;
  std::pmr::vector<ParityInterval> unclamped;  // meaningful for non-leaf edges
  std::pmr::vector<std::uint8_t> dominating;
};

// Decisions of the top-down pass.  target[v] is the blocking value assigned
// to edge v before decrements; decrement[v] is the reduction owed along the
// dominating path through v (it never exceeds psi[v].lo); flow[v] is the
// final edge flow, target - decrement.
struct FlowAssignment {
  std::pmr::vector<Value> target;
  std::pmr::vector<Value> decrement;
  std::pmr::vector<Value> flow;
};

EdgeLabels compute_labels(
    const CanonicalTree& tree,
    std::pmr::memory_resource* mem = std::pmr::get_default_resource());

// Assigns a maximum blocking flow top-down: the root edge takes its largest
// achievable value, splits propagate values to children, and capacity
// shortfalls at a join are paid for by decrementing the dominating path below
// it.  Vertex conservation is checked at every internal vertex.
FlowAssignment build_blocking_flow(
    const CanonicalTree& tree, const EdgeLabels& labels,
    std::pmr::memory_resource* mem = std::pmr::get_default_resource());

// Twice the flow value of a canonical component: the total flow on
// terminal-incident edges (each routed path has two terminal endpoints).
Value blocking_value(const CanonicalTree& tree, const FlowAssignment& fa);

// A maximum integral multiterminal flow for an instance, with the per-tree
// state retained so certificates and path decompositions can be derived
// without re-solving.  All label/assignment vectors live in the solution's
// arena; they are valid for the lifetime of the Solution (the struct is
// move-only, and moving keeps the arena alive at its old address).
struct Solution {
  Value value2 = 0;           // twice the flow value; always even
  std::vector<Value> edge_flow;  // per original edge, input order
  Normalization norm;
  std::unique_ptr<std::pmr::monotonic_buffer_resource> arena;
  std::vector<EdgeLabels> labels;    // parallel to norm.trees
  std::vector<FlowAssignment> flows; // parallel to norm.trees
};

Solution solve(const Instance& inst);

}  // namespace mtflow
