#include "mtflow/solver.hpp"

#include <algorithm>

namespace mtflow {

EdgeLabels compute_labels(const CanonicalTree& tree,
                          std::pmr::memory_resource* mem) {
  EdgeLabels lb{std::pmr::vector<ParityInterval>(mem),
                std::pmr::vector<ParityInterval>(mem),
                std::pmr::vector<std::uint8_t>(mem)};
  lb.psi.assign(tree.n, ParityInterval{});
  lb.unclamped.assign(tree.n, ParityInterval{});
  lb.dominating.assign(tree.n, 0);

  // Children precede parents in reverse index order (BFS numbering).
  for (std::int32_t v = tree.n - 1; v >= 1; --v) {
    const Value c = tree.cap[v];
    if (tree.is_leaf(v)) {
      lb.psi[v] = {c, c};  // a leaf edge always carries exactly its capacity
      continue;
    }
    const std::int32_t c1 = tree.child[v][0];
    const std::int32_t c2 = tree.child[v][1];
    const ParityInterval raw = product(lb.psi[c1], lb.psi[c2]);
    lb.unclamped[v] = raw;

    // Clamp to the edge capacity; if even clamping is impossible, blocking
    // pins the edge to its capacity exactly.
    ParityInterval psi;
    if (raw.hi <= c)
      psi = raw;
    else if (raw.lo <= c)
      psi = {raw.lo, ((raw.lo ^ c) & 1) ? c - 1 : c};
    else
      psi = {c, c};
    MTFLOW_CHECK(psi.lo <= psi.hi && psi.hi <= c, "label outside [0, cap]");
    lb.psi[v] = psi;

    // A child dominates when even its smallest value exceeds everything the
    // sibling can carry; at most one side can.
    bool d1 = lb.psi[c2].hi + 2 <= lb.psi[c1].lo;
    bool d2 = lb.psi[c1].hi + 2 <= lb.psi[c2].lo;
    MTFLOW_CHECK(!(d1 && d2), "both children dominating");
    lb.dominating[c1] = d1;
    lb.dominating[c2] = d2;
  }
  return lb;
}

FlowAssignment build_blocking_flow(const CanonicalTree& tree,
                                   const EdgeLabels& labels,
                                   std::pmr::memory_resource* mem) {
  FlowAssignment fa{std::pmr::vector<Value>(mem), std::pmr::vector<Value>(mem),
                    std::pmr::vector<Value>(mem)};
  fa.target.assign(tree.n, 0);
  fa.decrement.assign(tree.n, 0);
  fa.flow.assign(tree.n, 0);
  if (tree.n <= 1) return fa;

  const std::int32_t rc = tree.child[0][0];
  fa.target[rc] = labels.psi[rc].hi;  // maximum achievable at the root edge
  fa.decrement[rc] = 0;

  for (std::int32_t v = 1; v < tree.n; ++v) {
    MTFLOW_CHECK(labels.psi[v].contains(fa.target[v]),
                 "assigned value escaped the edge's label");
    MTFLOW_CHECK(fa.decrement[v] <= labels.psi[v].lo,
                 "decrement exceeds guaranteed slack");
    fa.flow[v] = fa.target[v] - fa.decrement[v];
    if (tree.is_leaf(v)) continue;

    const std::int32_t c1 = tree.child[v][0];
    const std::int32_t c2 = tree.child[v][1];
    if (labels.unclamped[v].lo <= tree.cap[v]) {
      auto w = split_product(labels.psi[c1], labels.psi[c2], fa.target[v]);
      fa.target[c1] = w.xa;
      fa.target[c2] = w.xb;
      // Deferred decrements ride the dominating path; the split above gave
      // the dominating child its maximal share, so the slack survives.
      if (labels.dominating[c1]) {
        fa.decrement[c1] = fa.decrement[v];
        fa.decrement[c2] = 0;
      } else if (labels.dominating[c2]) {
        fa.decrement[c2] = fa.decrement[v];
        fa.decrement[c1] = 0;
      } else {
        MTFLOW_CHECK(fa.decrement[v] == 0,
                     "pending decrement at a join with no dominating child");
        fa.decrement[c1] = fa.decrement[c2] = 0;
      }
    } else {
      // The children produce more than this edge passes even at their
      // minimum; the overshoot is paid back inside the dominating subtree.
      MTFLOW_CHECK(fa.target[v] == tree.cap[v], "clamped edge not at capacity");
      const bool d1 = labels.dominating[c1] != 0;
      MTFLOW_CHECK(d1 != (labels.dominating[c2] != 0),
                   "capacity shortfall without a unique dominating child");
      const std::int32_t ci = d1 ? c1 : c2;
      const std::int32_t cj = d1 ? c2 : c1;
      const Value overshoot = labels.unclamped[v].lo - tree.cap[v];
      fa.target[ci] = labels.psi[ci].lo;
      fa.target[cj] = labels.psi[cj].hi;
      fa.decrement[ci] = fa.decrement[v] + overshoot;
      fa.decrement[cj] = 0;
    }
  }

  // Vertex conservation: the three incident flows at every internal vertex
  // must pair up into whole path strands.
  for (std::int32_t v = 1; v < tree.n; ++v) {
    if (tree.is_leaf(v)) continue;
    const Value f0 = fa.flow[v];
    const Value f1 = fa.flow[tree.child[v][0]];
    const Value f2 = fa.flow[tree.child[v][1]];
    MTFLOW_CHECK(((f0 + f1 + f2) & 1) == 0, "odd strand total at a join");
    MTFLOW_CHECK(f0 <= f1 + f2 && f1 <= f0 + f2 && f2 <= f0 + f1,
                 "negative strand count at a join");
  }
  return fa;
}

Value blocking_value(const CanonicalTree& tree, const FlowAssignment& fa) {
  if (tree.n <= 1) return 0;
  Value total = fa.flow[tree.child[0][0]];  // the root terminal's edge
  for (std::int32_t v = 1; v < tree.n; ++v)
    if (tree.is_leaf(v)) total += fa.flow[v];
  return total;
}

Solution solve(const Instance& inst) {
  Solution sol;
  sol.norm = normalize(inst);

  // One arena sized for the whole forest: per-vertex label/assignment payload
  // plus per-component alignment slack, rounded up so a single chunk (served
  // from the recycled mapping pool) covers everything.
  const std::size_t payload =
      (2 * sizeof(ParityInterval) + sizeof(std::uint8_t) + 3 * sizeof(Value)) *
          sol.norm.storage.parent.size() +
      64 * sol.norm.trees.size() + 4096;
  constexpr std::size_t kChunk = std::size_t{2} << 20;
  sol.arena = std::make_unique<std::pmr::monotonic_buffer_resource>(
      (payload + kChunk - 1) & ~(kChunk - 1), detail::pool_resource());
  std::pmr::memory_resource* mem = sol.arena.get();

  sol.labels.reserve(sol.norm.trees.size());
  sol.flows.reserve(sol.norm.trees.size());
  sol.edge_flow.assign(inst.edges.size(), 0);
  for (const auto& tree : sol.norm.trees) {
    sol.labels.push_back(compute_labels(tree, mem));
    sol.flows.push_back(build_blocking_flow(tree, sol.labels.back(), mem));
    sol.value2 += blocking_value(tree, sol.flows.back());
    // Project onto the original edges in place of the dropped/contracted ones.
    const FlowAssignment& fa = sol.flows.back();
    for (std::int32_t v = 1; v < tree.n; ++v)
      for (auto c = tree.chain_off[v]; c < tree.chain_off[v + 1]; ++c)
        sol.edge_flow[tree.chain_edges[c]] = fa.flow[v];
  }
  MTFLOW_CHECK((sol.value2 & 1) == 0, "flow value must be even");
  return sol;
}

}  // namespace mtflow
