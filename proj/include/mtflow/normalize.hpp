#pragma once

#include <array>
#include <cstdint>
#include <memory_resource>
#include <span>
#include <vector>

#include "mtflow/instance.hpp"
#include "mtflow/types.hpp"

namespace mtflow {

namespace detail {

// Allocation hooks for the reduction's large arrays.  Blocks of 2 MiB and up
// come from a process-lifetime pool of anonymous mappings hinted for
// transparent huge pages (data-dependent traversals over hundreds of MB are
// TLB-bound otherwise, and recycling the mappings avoids re-faulting zeroed
// pages on every call); smaller blocks take the ordinary heap path.
void* pool_alloc(std::size_t bytes);
void pool_free(void* p, std::size_t bytes) noexcept;

// The same pool behind the pmr interface, for arena upstreams.
std::pmr::memory_resource* pool_resource() noexcept;

template <class T>
struct PoolAlloc {
  using value_type = T;

  PoolAlloc() = default;
  template <class U>
  PoolAlloc(const PoolAlloc<U>&) {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(pool_alloc(n * sizeof(T)));
  }
  void deallocate(T* p, std::size_t n) noexcept { pool_free(p, n * sizeof(T)); }
  template <class U>
  bool operator==(const PoolAlloc<U>&) const {
    return true;
  }
};

}  // namespace detail

// One reduced component in solver-ready shape: a rooted tree whose root is a
// terminal of degree 1, every other leaf is a terminal, every internal vertex
// has degree exactly 3, and every capacity is positive.  Vertices are indexed
// 0..n-1 in BFS order from the root, so ascending index order is
// non-decreasing depth and each vertex's parent precedes it.  The edge towards
// the root is identified with its lower endpoint: edge v = (parent[v], v).
//
// The arrays are views into the owning Normalization's shared storage (one
// allocation per field for the whole forest, instead of six per component);
// a tree is valid exactly as long as the Normalization that produced it.
struct CanonicalTree {
  std::int32_t n = 0;
  std::span<const std::int32_t> parent;               // parent[0] == -1
  std::span<const std::array<std::int32_t, 2>> child; // -1 when absent
  std::span<const Value> cap;                  // cap[v] of edge v; cap[0] unused

  // Back-references into the original instance.  orig_vertex maps synthetic
  // vertices (degree expansion) to the vertex they were carved from and
  // terminal copies to the original terminal.  Edge v stands for the chain of
  // original edges chain_edges[chain_off[v]..chain_off[v+1]), listed from the
  // child end towards the parent end; the chain is empty only for synthetic
  // expansion edges.
  std::span<const std::int32_t> orig_vertex;
  std::span<const std::uint32_t> chain_off;           // size n+1
  std::span<const std::int32_t> chain_edges;          // original edge indices

  bool is_leaf(std::int32_t v) const { return child[v][0] < 0; }
};

// Result of reducing an instance: the canonical components plus enough
// mapping data to translate flows and cuts back.  Original edges not covered
// by any chain carry zero flow in every solution (zero capacity, dead ends,
// or components with fewer than two terminals).
//
// Move-only: the trees are views into `storage`, so a copy would alias the
// source.  Moving is fine (the heap buffers keep their addresses).
struct Normalization {
  std::vector<CanonicalTree> trees;
  std::vector<std::int32_t> dropped_edges;      // forced zero flow
  std::vector<std::int32_t> dropped_terminals;  // terminals with no partner

  // Backing arrays for every tree's views, in tree emission order.  Allocated
  // through the huge-page pool: the solver's passes stream and random-access
  // these across the whole forest.
  template <class T>
  using pool_vector = std::vector<T, detail::PoolAlloc<T>>;
  struct Storage {
    pool_vector<std::int32_t> parent;
    pool_vector<std::array<std::int32_t, 2>> child;
    pool_vector<Value> cap;
    pool_vector<std::int32_t> orig_vertex;
    pool_vector<std::uint32_t> chain_off;
    pool_vector<std::int32_t> chain_edges;
  } storage;

  Normalization() = default;
  Normalization(Normalization&&) = default;
  Normalization& operator=(Normalization&&) = default;
  Normalization(const Normalization&) = delete;
  Normalization& operator=(const Normalization&) = delete;
};

// Reduces an instance to canonical components:
//   1. delete zero-capacity edges (splitting the tree into a forest),
//   2. split each terminal of degree d >= 2 into d leaf copies,
//   3. repeatedly remove non-terminal leaves,
//   4. contract non-terminal degree-2 vertices (merged capacity = min),
//   5. expand non-terminal vertices of degree d >= 4 into a path of d-2
//      degree-3 vertices whose internal edges get the summed incident
//      capacity (never binding),
//   6. root every remaining component at its lowest-numbered terminal.
// Components containing fewer than two terminals cannot carry flow and land
// in the dropped records.
Normalization normalize(const Instance& inst);

// Expands per-tree edge flows to the original edge list (input order).
// tree_flows[t][v] is the flow on canonical edge v of trees[t]; every edge of
// a contraction chain receives the merged flow, dropped edges receive zero.
// Throws std::invalid_argument if the shapes do not match the normalization.
std::vector<Value> project_flow_back(
    const Instance& inst, const Normalization& norm,
    const std::vector<std::vector<Value>>& tree_flows);

}  // namespace mtflow
