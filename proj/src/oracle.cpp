#include "mtflow/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace mtflow {

Instance random_instance(const GenParams& params) {
  if (params.n < 2)
    throw std::invalid_argument("random_instance: n must be at least 2");
  if (!(params.terminal_fraction > 0.0) || params.terminal_fraction > 1.0)
    throw std::invalid_argument(
        "random_instance: terminal_fraction must be in (0, 1]");
  if (params.max_cap > kMaxCapacity)
    throw std::invalid_argument("random_instance: max_cap exceeds the capacity limit");

  SplitMix64 rng(params.seed);
  Instance inst;
  inst.n = params.n;
  inst.edges.reserve(params.n - 1);
  for (std::int32_t i = 2; i <= params.n; ++i) {
    const auto p = static_cast<std::int32_t>(1 + rng.bounded(i - 1));
    const Value cap = rng.bounded(params.max_cap + 1);
    inst.edges.push_back({p, i, cap});
  }
  auto k = static_cast<std::int32_t>(
      std::llround(params.terminal_fraction * params.n));
  k = std::clamp(k, 2, params.n);
  std::vector<std::int32_t> pool(params.n);
  std::iota(pool.begin(), pool.end(), 1);
  for (std::int32_t j = 0; j < k; ++j) {
    const auto r = j + static_cast<std::int32_t>(rng.bounded(params.n - j));
    std::swap(pool[j], pool[r]);
  }
  inst.terminals.assign(pool.begin(), pool.begin() + k);
  std::sort(inst.terminals.begin(), inst.terminals.end());
  return inst;
}

namespace {

struct PairPath {
  std::int32_t s = 0;
  std::int32_t t = 0;
  std::vector<std::int32_t> edges;  // edge indices along the tree path
  Value bottleneck = 0;
};

struct Search {
  const std::vector<PairPath>& pairs;
  std::vector<Value> residual;
  std::vector<Value> units;
  std::vector<Value> best_units;
  Value best = 0;

  Value path_residual(const PairPath& p) const {
    Value r = residual[p.edges[0]];
    for (const std::int32_t e : p.edges) r = std::min(r, residual[e]);
    return r;
  }

  // Admissible optimistic total for pairs i..end: each routed independently
  // at its current residual bottleneck.
  Value bound_from(std::size_t i) const {
    Value b = 0;
    for (std::size_t j = i; j < pairs.size(); ++j) b += path_residual(pairs[j]);
    return b;
  }

  void dfs(std::size_t i, Value total) {
    if (i == pairs.size()) {
      if (total > best) {
        best = total;
        best_units = units;
      }
      return;
    }
    if (total + bound_from(i) <= best) return;
    const Value top = path_residual(pairs[i]);
    for (Value u = top;; --u) {
      units[i] = u;
      for (const std::int32_t e : pairs[i].edges) residual[e] -= u;
      dfs(i + 1, total + u);
      for (const std::int32_t e : pairs[i].edges) residual[e] += u;
      if (u == 0) break;
    }
    units[i] = 0;
  }
};

}  // namespace

BruteForceResult brute_force(const Instance& inst) {
  const std::int32_t n = inst.n;
  const std::size_t m = inst.edges.size();

  std::vector<std::int32_t> head(n + 2, 0), adj_to(2 * m), adj_e(2 * m);
  for (const auto& e : inst.edges) {
    ++head[e.u + 1];
    ++head[e.v + 1];
  }
  for (std::int32_t v = 1; v <= n; ++v) head[v + 1] += head[v];
  {
    std::vector<std::int32_t> cur(head.begin(), head.end() - 1);
    for (std::size_t i = 0; i < m; ++i) {
      const auto& e = inst.edges[i];
      adj_to[cur[e.u]] = e.v;
      adj_e[cur[e.u]++] = static_cast<std::int32_t>(i);
      adj_to[cur[e.v]] = e.u;
      adj_e[cur[e.v]++] = static_cast<std::int32_t>(i);
    }
  }

  // Tree paths between all terminal pairs, one BFS per source.
  std::vector<PairPath> pairs;
  std::vector<std::int32_t> parent(n + 1), pedge(n + 1), order;
  order.reserve(n);
  const std::size_t k = inst.terminals.size();
  for (std::size_t a = 0; a + 1 < k; ++a) {
    const std::int32_t s = inst.terminals[a];
    std::fill(parent.begin(), parent.end(), 0);
    order.assign(1, s);
    parent[s] = s;
    for (std::size_t qi = 0; qi < order.size(); ++qi) {
      const std::int32_t u = order[qi];
      for (std::int32_t j = head[u]; j < head[u + 1]; ++j) {
        const std::int32_t w = adj_to[j];
        if (parent[w] != 0) continue;
        parent[w] = u;
        pedge[w] = adj_e[j];
        order.push_back(w);
      }
    }
    for (std::size_t b = a + 1; b < k; ++b) {
      PairPath p;
      p.s = s;
      p.t = inst.terminals[b];
      p.bottleneck = kMaxCapacity + 1;
      for (std::int32_t w = p.t; w != s; w = parent[w]) {
        p.edges.push_back(pedge[w]);
        p.bottleneck = std::min(p.bottleneck, inst.edges[pedge[w]].cap);
      }
      if (p.bottleneck > 0) pairs.push_back(std::move(p));
    }
  }

  Value guard = 1;
  for (const auto& p : pairs) {
    guard *= p.bottleneck + 1;
    if (guard > 100000000ull) throw OracleLimitError("too large for oracle");
  }

  Search search{pairs, {}, {}, {}, 0};
  search.residual.reserve(m);
  for (const auto& e : inst.edges) search.residual.push_back(e.cap);
  search.units.assign(pairs.size(), 0);
  search.best_units.assign(pairs.size(), 0);
  search.dfs(0, 0);

  BruteForceResult res;
  res.alpha = search.best;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (search.best_units[i] > 0)
      res.witness.push_back({pairs[i].s, pairs[i].t, search.best_units[i]});
  return res;
}

}  // namespace mtflow
