#include "mtflow/normalize.hpp"

#if defined(__linux__)
#include <sys/mman.h>
#endif

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <new>

namespace mtflow {

namespace detail {

namespace {

constexpr std::size_t kHuge = std::size_t{2} << 20;

#if defined(__linux__) && defined(MADV_HUGEPAGE)
// Process-lifetime cache of huge-page-backed mappings.  Repeated solves would
// otherwise hand every large block back to the kernel and re-fault it zeroed
// on the next call, which costs a memset of the whole working set per solve;
// recycling the mappings keeps the pages (and their TLB entries) warm.  Peak
// memory is unchanged: the pool only ever holds blocks the process already
// touched.
class MapPool {
 public:
  static MapPool& instance() {
    static MapPool pool;
    return pool;
  }

  void* take(std::size_t rounded) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = free_.find(rounded);
      if (it != free_.end() && !it->second.empty()) {
        void* p = it->second.back();
        it->second.pop_back();
        return p;
      }
    }
    void* p = mmap(nullptr, rounded, PROT_READ | PROT_WRITE,
                   MAP_PRIVATE | MAP_ANONYMOUS, -1, 0);
    if (p == MAP_FAILED) throw std::bad_alloc();
    (void)madvise(p, rounded, MADV_HUGEPAGE);
    return p;
  }

  void put(std::size_t rounded, void* p) noexcept {
    try {
      std::lock_guard<std::mutex> lock(mu_);
      free_[rounded].push_back(p);
    } catch (...) {
      (void)munmap(p, rounded);
    }
  }

  ~MapPool() {
    for (auto& [rounded, blocks] : free_)
      for (void* p : blocks) (void)munmap(p, rounded);
  }

 private:
  std::mutex mu_;
  std::map<std::size_t, std::vector<void*>> free_;
};
#endif

}  // namespace

void* pool_alloc(std::size_t bytes) {
#if defined(__linux__) && defined(MADV_HUGEPAGE)
  if (bytes >= kHuge) {
    const std::size_t rounded = (bytes + kHuge - 1) & ~(kHuge - 1);
    return MapPool::instance().take(rounded);
  }
#endif
  return ::operator new(bytes);
}

void pool_free(void* p, std::size_t bytes) noexcept {
#if defined(__linux__) && defined(MADV_HUGEPAGE)
  if (bytes >= kHuge) {
    const std::size_t rounded = (bytes + kHuge - 1) & ~(kHuge - 1);
    MapPool::instance().put(rounded, p);
    return;
  }
#endif
  ::operator delete(p);
}

namespace {

// pool_alloc behind the pmr interface, so monotonic arenas can draw their
// chunks from the recycled mappings.  Over-aligned requests (which the pool
// cannot honour past page alignment) fall through to new/delete.
class PoolResource final : public std::pmr::memory_resource {
  void* do_allocate(std::size_t bytes, std::size_t align) override {
    if (align > alignof(std::max_align_t))
      return std::pmr::new_delete_resource()->allocate(bytes, align);
    return pool_alloc(bytes);
  }
  void do_deallocate(void* p, std::size_t bytes, std::size_t align) override {
    if (align > alignof(std::max_align_t)) {
      std::pmr::new_delete_resource()->deallocate(p, bytes, align);
      return;
    }
    pool_free(p, bytes);
  }
  bool do_is_equal(const std::pmr::memory_resource& other) const noexcept override {
    return this == &other;
  }
};

}  // namespace

std::pmr::memory_resource* pool_resource() noexcept {
  static PoolResource res;
  return &res;
}

}  // namespace detail

namespace {

template <class T>
using svec = std::vector<T, detail::PoolAlloc<T>>;

// Working edge after terminal splitting.  One struct per edge keeps every
// walk over the edge list to a single cache line per touch.
struct WEdge {
  std::int32_t a = 0;
  std::int32_t b = 0;
  std::int32_t orig = 0;      // original edge index
  std::uint32_t cap = 0;      // fits: capacities are bounded by kMaxCapacity
};

// Contracted edge: a maximal run of degree-2 non-terminals squeezed to one
// edge of the minimum capacity along the run.
struct CEdge {
  std::int32_t a = 0;
  std::int32_t b = 0;
  std::uint32_t cap = 0;
};

// Per-edge payload of the fully expanded (degree <= 3) forest; the endpoints
// live in separate arrays that die once the adjacency is built.  chain >= 0
// indexes the contracted edge an edge came from; -1 marks the synthetic spine
// of an expanded vertex, whose capacity is a sum and may exceed 32 bits.
struct FMeta {
  Value cap = 0;
  std::int32_t chain = -1;
};

// Per working-vertex peeling state: alive degree plus the XOR of alive
// incident edge ids.  At degree one the xor IS the remaining edge, which is
// what both the peel and the contraction walk need -- no adjacency lists.
struct PeelNode {
  std::int32_t deg = 0;
  std::int32_t exor = 0;
};

constexpr std::uint8_t kTerm = 1, kAlive = 2, kKept = 4;
constexpr std::uint8_t kEdgeAlive = 1, kEdgeWalked = 2;

// Expansion bookkeeping for one working vertex, packed for the slot lookups.
// The path length is recomputed from the degree on the fly; capacity sums
// live in a separate array touched only for vertices that actually expand.
struct ExpandNode {
  std::int32_t fbase = -1;
  std::int32_t attach = 0;
  std::int32_t cdeg = 0;
};

// Number of final vertices a kept vertex of contracted degree d becomes.
inline std::int32_t expand_span(std::int32_t cdeg) {
  return cdeg <= 3 ? 1 : cdeg - 2;
}

// One directed half of an expanded-forest edge, as stored in the CSR rows.
// `other` is the far endpoint; `enc` is the edge index, bitwise-complemented
// when the far endpoint is the edge's own `a` side.  The sign therefore both
// recovers the orientation (chains are stored a-end first) and marks each
// undirected edge exactly once across the two rows that mention it.
struct Arc {
  std::int32_t enc = 0;
  std::int32_t other = 0;
};

// CSR adjacency over the expanded forest.
struct Adjacency {
  svec<std::int32_t> off;
  svec<Arc> arc;

  void build(std::int32_t nodes, const svec<std::int32_t>& ea,
             const svec<std::int32_t>& eb) {
    off.assign(nodes + 2, 0);
    for (std::size_t i = 0; i < ea.size(); ++i) {
      ++off[ea[i] + 1];
      ++off[eb[i] + 1];
    }
    for (std::int32_t v = 0; v <= nodes; ++v) off[v + 1] += off[v];
    arc.resize(off[nodes + 1]);
    svec<std::int32_t> cursor(off.begin(), off.end() - 1);
    for (std::size_t i = 0; i < ea.size(); ++i) {
      const auto e = static_cast<std::int32_t>(i);
      arc[cursor[ea[i]]++] = {e, eb[i]};   // far endpoint is the b side
      arc[cursor[eb[i]]++] = {~e, ea[i]};  // far endpoint is the a side
    }
  }
};

}  // namespace

Normalization normalize(const Instance& inst) {
  const std::int32_t n = inst.n;
  const auto m = static_cast<std::int32_t>(inst.edges.size());
  Normalization out;

  svec<std::uint8_t> is_term(n + 1, 0);
  for (auto t : inst.terminals) is_term[t] = 1;

  // --- zero-capacity edges go away up front -------------------------------
  svec<std::int32_t> posdeg(n + 1, 0);
  for (std::int32_t i = 0; i < m; ++i) {
    if (inst.edges[i].cap > 0) {
      ++posdeg[inst.edges[i].u];
      ++posdeg[inst.edges[i].v];
    } else {
      out.dropped_edges.push_back(i);
    }
  }

  // --- split terminals of degree >= 2 into leaf copies --------------------
  std::int32_t num_nodes = n;
  svec<std::int32_t> copy_base(n + 1, 0);  // 0 = not split
  for (std::int32_t v = 1; v <= n; ++v) {
    if (is_term[v] && posdeg[v] >= 2) {
      copy_base[v] = num_nodes + 1;
      num_nodes += posdeg[v];
    }
  }

  svec<std::int32_t> node_orig(num_nodes + 1, 0);
  svec<std::uint8_t> flags(num_nodes + 1, kAlive);
  for (std::int32_t v = 1; v <= n; ++v) {
    node_orig[v] = v;
    if (is_term[v] && copy_base[v] == 0) flags[v] |= kTerm;
  }
  for (std::int32_t v = 1; v <= n; ++v) {
    if (copy_base[v] == 0) continue;
    for (std::int32_t j = 0; j < posdeg[v]; ++j) {
      node_orig[copy_base[v] + j] = v;
      flags[copy_base[v] + j] |= kTerm;
    }
  }

  // Working edges: the positive original edges with split endpoints mapped to
  // their copies, assigned in input edge order.  Degrees and incident-edge
  // xors accumulate in the same pass while the endpoints are in registers.
  svec<WEdge> we;
  we.reserve(m);
  svec<PeelNode> peel(num_nodes + 1);
  {
    svec<std::int32_t> copy_next(copy_base);
    for (std::int32_t i = 0; i < m; ++i) {
      const auto& e = inst.edges[i];
      if (e.cap == 0) continue;
      const std::int32_t a = copy_base[e.u] ? copy_next[e.u]++ : e.u;
      const std::int32_t b = copy_base[e.v] ? copy_next[e.v]++ : e.v;
      const auto id = static_cast<std::int32_t>(we.size());
      we.push_back({a, b, i, static_cast<std::uint32_t>(e.cap)});
      ++peel[a].deg;
      ++peel[b].deg;
      peel[a].exor ^= id;
      peel[b].exor ^= id;
    }
  }
  svec<std::uint8_t>().swap(is_term);
  svec<std::int32_t>().swap(posdeg);
  svec<std::int32_t>().swap(copy_base);
  const auto wm = static_cast<std::int32_t>(we.size());

  // --- peel non-terminal leaves -------------------------------------------
  svec<std::uint8_t> eflags(wm, kEdgeAlive);
  svec<std::int32_t> queue;
  for (std::int32_t u = 1; u <= num_nodes; ++u)
    if (!(flags[u] & kTerm) && peel[u].deg <= 1) queue.push_back(u);
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const std::int32_t u = queue[qi];
    if (!(flags[u] & kAlive)) continue;
    flags[u] &= ~kAlive;
    if (peel[u].deg != 1) continue;
    const std::int32_t e = peel[u].exor;  // the single alive incident edge
    eflags[e] &= ~kEdgeAlive;
    out.dropped_edges.push_back(we[e].orig);
    const std::int32_t other = we[e].a == u ? we[e].b : we[e].a;
    peel[u].deg = 0;
    peel[u].exor = 0;
    peel[other].exor ^= e;
    if (--peel[other].deg <= 1 && !(flags[other] & kTerm) &&
        (flags[other] & kAlive))
      queue.push_back(other);
  }

  for (std::int32_t u = 1; u <= num_nodes; ++u) {
    if (!(flags[u] & kAlive)) continue;
    if (flags[u] & kTerm) {
      MTFLOW_CHECK(peel[u].deg <= 1, "split terminal still has degree >= 2");
      if (peel[u].deg == 0)
        out.dropped_terminals.push_back(node_orig[u]);  // no partner reachable
      else
        flags[u] |= kKept;
    } else {
      MTFLOW_CHECK(peel[u].deg >= 2, "peeling left a non-terminal leaf");
      if (peel[u].deg >= 3) flags[u] |= kKept;
    }
  }

  // --- contract degree-2 runs into single edges ---------------------------
  // Every alive edge lies on a unique maximal run between kept vertices; the
  // run is discovered at its lowest edge index and walked out both ways
  // through the xor links.  The chain lists the original edges a-end first.
  svec<CEdge> ce;
  svec<std::uint32_t> ce_chain_off(1, 0);
  svec<std::int32_t> ce_chain;
  ce_chain.reserve(wm);
  svec<std::int32_t> scratch;
  for (std::int32_t e0 = 0; e0 < wm; ++e0) {
    if (eflags[e0] != kEdgeAlive) continue;  // dead or already walked
    eflags[e0] |= kEdgeWalked;
    Value mincap = we[e0].cap;
    auto extend = [&](std::int32_t v, std::int32_t via,
                      svec<std::int32_t>* chain) {
      while (!(flags[v] & kKept)) {
        MTFLOW_CHECK((flags[v] & kAlive) && !(flags[v] & kTerm) &&
                         peel[v].deg == 2,
                     "contraction walk hit an unexpected vertex");
        const std::int32_t ne = peel[v].exor ^ via;
        eflags[ne] |= kEdgeWalked;
        if (chain) chain->push_back(we[ne].orig);
        mincap = std::min<Value>(mincap, we[ne].cap);
        v = we[ne].a == v ? we[ne].b : we[ne].a;
        via = ne;
      }
      return v;
    };
    scratch.clear();
    const std::int32_t a_end = extend(we[e0].a, e0, &scratch);
    for (auto it = scratch.rbegin(); it != scratch.rend(); ++it)
      ce_chain.push_back(*it);
    ce_chain.push_back(we[e0].orig);
    const std::int32_t b_end = extend(we[e0].b, e0, &ce_chain);
    ce.push_back({a_end, b_end, static_cast<std::uint32_t>(mincap)});
    ce_chain_off.push_back(static_cast<std::uint32_t>(ce_chain.size()));
  }
  svec<WEdge>().swap(we);
  svec<PeelNode>().swap(peel);
  svec<std::uint8_t>().swap(eflags);
  svec<std::int32_t>().swap(queue);
  const auto cm = static_cast<std::int32_t>(ce.size());

  // --- expand degree >= 4 vertices into degree-3 paths --------------------
  // The degree count runs over a narrow array first; the capacity sums (only
  // needed where a synthetic path appears) accumulate later, inside the pass
  // that already has each endpoint's expansion record in hand.
  svec<std::int32_t> cdeg(num_nodes + 1, 0);
  for (const CEdge& e : ce) {
    ++cdeg[e.a];
    ++cdeg[e.b];
  }

  svec<ExpandNode> ex(num_nodes + 1);
  std::int32_t fcount = 0;
  for (std::int32_t u = 1; u <= num_nodes; ++u) {
    if (!(flags[u] & kKept)) continue;
    ex[u].fbase = fcount;
    ex[u].cdeg = cdeg[u];
    fcount += expand_span(cdeg[u]);
  }
  svec<std::int32_t> f_orig(fcount, 0);
  svec<std::uint8_t> f_term(fcount, 0);
  for (std::int32_t u = 1; u <= num_nodes; ++u) {
    if (!(flags[u] & kKept)) continue;
    for (std::int32_t j = 0; j < expand_span(cdeg[u]); ++j)
      f_orig[ex[u].fbase + j] = node_orig[u];
    if (flags[u] & kTerm) f_term[ex[u].fbase] = 1;
  }

  svec<std::int32_t> fe_a, fe_b;
  svec<FMeta> fe_meta;
  fe_a.reserve(cm);
  fe_b.reserve(cm);
  fe_meta.reserve(cm);
  {
    svec<Value> capsum(num_nodes + 1, 0);
    auto slot = [&](std::int32_t u, std::uint32_t cap) {
      ExpandNode& x = ex[u];
      if (x.cdeg >= 4) capsum[u] += cap;
      const std::int32_t j = x.attach++;
      const std::int32_t fspan = expand_span(x.cdeg);
      const std::int32_t z =
          j <= 1 ? 0 : (j >= x.cdeg - 2 ? fspan - 1 : j - 1);
      return x.fbase + z;
    };
    for (std::int32_t e = 0; e < cm; ++e) {
      fe_a.push_back(slot(ce[e].a, ce[e].cap));
      fe_b.push_back(slot(ce[e].b, ce[e].cap));
      fe_meta.push_back({ce[e].cap, e});
    }
    for (std::int32_t u = 1; u <= num_nodes; ++u) {
      for (std::int32_t j = 0; j + 1 < expand_span(ex[u].cdeg); ++j) {
        fe_a.push_back(ex[u].fbase + j);
        fe_b.push_back(ex[u].fbase + j + 1);
        fe_meta.push_back({capsum[u], -1});
      }
    }
  }
  svec<CEdge>().swap(ce);
  svec<std::int32_t>().swap(cdeg);
  svec<ExpandNode>().swap(ex);
  svec<std::int32_t>().swap(node_orig);
  svec<std::uint8_t>().swap(flags);
  const auto fm = static_cast<std::int32_t>(fe_a.size());

  // --- cluster the forest by component --------------------------------------
  // The vertices of one component are scattered across the id space, which
  // would make every per-component pass below a pointer chase over the whole
  // forest.  A union-find over the edge list (cheap: it only touches one
  // int32 array) yields the components; vertices are then renumbered so each
  // component is a contiguous block, and the edges are sorted to match.
  // Both renumberings are stable -- blocks appear in first-vertex order and
  // edges keep their relative order inside a component -- so the adjacency
  // rows, the BFS orders, and hence the emitted trees are exactly the ones
  // the unclustered layout would produce.
  svec<std::int32_t> comp(fcount);
  std::int32_t ncomp = 0;
  {
    svec<std::int32_t> uf(fcount);
    for (std::int32_t v = 0; v < fcount; ++v) uf[v] = v;
    auto find = [&](std::int32_t x) {
      while (uf[x] != x) {
        uf[x] = uf[uf[x]];  // path halving
        x = uf[x];
      }
      return x;
    };
    for (std::int32_t e = 0; e < fm; ++e) {
      const std::int32_t ra = find(fe_a[e]), rb = find(fe_b[e]);
      if (ra != rb) uf[rb] = ra;
    }
    svec<std::int32_t> slot(fcount, -1);
    for (std::int32_t v = 0; v < fcount; ++v) {
      const std::int32_t r = find(v);
      if (slot[r] < 0) slot[r] = ncomp++;
      comp[v] = slot[r];
    }
  }

  svec<std::int32_t> nbase(ncomp + 1, 0);  // component -> first new vertex id
  for (std::int32_t v = 0; v < fcount; ++v) ++nbase[comp[v] + 1];
  for (std::int32_t c = 0; c < ncomp; ++c) nbase[c + 1] += nbase[c];

  svec<std::int32_t> ebase(ncomp + 1, 0);  // component -> first new edge id
  svec<std::int32_t> ecomp(fm);
  for (std::int32_t e = 0; e < fm; ++e) {
    ecomp[e] = comp[fe_a[e]];
    ++ebase[ecomp[e] + 1];
  }
  for (std::int32_t c = 0; c < ncomp; ++c) ebase[c + 1] += ebase[c];

  // Renumber the vertex payload.  The edge endpoints are not rewritten in
  // place: the permute pass below reads them once and applies the renumbering
  // on the fly, saving a full pass over the endpoint arrays.
  svec<std::int32_t> new_id(fcount);
  {
    {
      svec<std::int32_t> cur(nbase.begin(), nbase.end() - 1);
      for (std::int32_t v = 0; v < fcount; ++v) new_id[v] = cur[comp[v]]++;
    }
    svec<std::int32_t> orig2(fcount);
    svec<std::uint8_t> term2(fcount);
    for (std::int32_t v = 0; v < fcount; ++v) {
      orig2[new_id[v]] = f_orig[v];
      term2[new_id[v]] = f_term[v];
    }
    f_orig = std::move(orig2);
    f_term = std::move(term2);
  }
  svec<std::int32_t>().swap(comp);

  // Sort the edges into component blocks, carrying capacity and chain along.
  // Scattering the chain id next to the edge's new position lets the metadata
  // be read once, in order, as a stream; the chain runs are then copied in the
  // new edge order, where a chain's id can simply be its edge's id: coff[e] ..
  // coff[e+1] lists edge e's original edges (empty for synthetic path edges).
  svec<Value> fe_cap(fm);
  svec<std::uint32_t> coff(fm + 1, 0);
  svec<std::int32_t> cchain;
  cchain.reserve(ce_chain.size());
  {
    svec<std::int32_t> eperm(fm);  // old edge id -> new edge id
    {
      svec<std::int32_t> cur(ebase.begin(), ebase.end() - 1);
      for (std::int32_t e = 0; e < fm; ++e) eperm[e] = cur[ecomp[e]]++;
    }
    svec<std::int32_t> ea2(fm), eb2(fm), echain(fm);
    for (std::int32_t e = 0; e < fm; ++e) {
      const std::int32_t en = eperm[e];
      ea2[en] = new_id[fe_a[e]];
      eb2[en] = new_id[fe_b[e]];
      fe_cap[en] = fe_meta[e].cap;
      echain[en] = fe_meta[e].chain;
    }
    fe_a = std::move(ea2);
    fe_b = std::move(eb2);
    svec<std::int32_t>().swap(new_id);
    svec<FMeta>().swap(fe_meta);
    for (std::int32_t en = 0; en < fm; ++en) {
      const std::int32_t chain = echain[en];
      if (chain >= 0)
        cchain.insert(cchain.end(), ce_chain.begin() + ce_chain_off[chain],
                      ce_chain.begin() + ce_chain_off[chain + 1]);
      coff[en + 1] = static_cast<std::uint32_t>(cchain.size());
    }
  }
  svec<std::int32_t>().swap(ce_chain);
  svec<std::uint32_t>().swap(ce_chain_off);
  svec<std::int32_t>().swap(ecomp);

  Adjacency fadj;
  fadj.build(fcount > 0 ? fcount - 1 : 0, fe_a, fe_b);
  // Adjacency::build takes the max node id; f-nodes are 0-based.
  // The endpoint arrays only feed the CSR; the arcs carry both directions.
  svec<std::int32_t>().swap(fe_a);
  svec<std::int32_t>().swap(fe_b);

  // --- carve out components, root them, emit canonical trees --------------
  // Every tree writes straight into the shared storage; the spans are fixed
  // up after the loop, once the backing arrays have reached their final
  // addresses.  The reserves below are exact upper bounds (each f-node and
  // each chained original edge lands in at most one tree), so growth
  // reallocations are rare, but correctness never depends on that.
  auto& store = out.storage;
  store.parent.reserve(fcount);
  store.child.reserve(fcount);
  store.cap.reserve(fcount);
  store.orig_vertex.reserve(fcount);
  store.chain_off.reserve(fcount + 1);
  store.chain_edges.reserve(static_cast<std::size_t>(wm));

  // With the component-clustered layout every pass below runs over a
  // contiguous slice: vertices nbase[c]..nbase[c+1]) and edges
  // ebase[c]..ebase[c+1]) belong to component c, and local ids are global
  // ids minus the block base.  The BFS pop order doubles as the canonical
  // vertex order; on a tree the only visited neighbour is the BFS parent,
  // so the arc back there is the one to skip.
  std::vector<std::int32_t> order, parent_enc, parent_bfs;
  for (std::int32_t c = 0; c < ncomp; ++c) {
    const std::int32_t base = nbase[c];
    const std::int32_t tn = nbase[c + 1] - base;

    std::int32_t root_l = -1, terms = 0;
    for (std::int32_t k = 0; k < tn; ++k) {
      if (!f_term[base + k]) continue;
      ++terms;
      if (root_l < 0 || f_orig[base + k] < f_orig[base + root_l]) root_l = k;
    }

    if (terms < 2) {
      // No pair to route between: everything here is forced to zero.
      for (std::int32_t e = ebase[c]; e < ebase[c + 1]; ++e)
        for (auto ci = coff[e]; ci < coff[e + 1]; ++ci)
          out.dropped_edges.push_back(cchain[ci]);
      for (std::int32_t k = 0; k < tn; ++k)
        if (f_term[base + k])
          out.dropped_terminals.push_back(f_orig[base + k]);
      continue;
    }

    const std::size_t nb = store.parent.size();  // this tree's node base
    store.parent.resize(nb + tn, -1);
    store.child.resize(nb + tn, {-1, -1});
    store.cap.resize(nb + tn, 0);
    store.orig_vertex.resize(nb + tn, 0);
    store.chain_off.resize(store.chain_off.size() + tn + 1, 0);
    const std::uint32_t cb =
        static_cast<std::uint32_t>(store.chain_edges.size());
    // Raw slices stay valid through this tree: only chain_edges grows below,
    // and it is touched through the vector itself.
    std::int32_t* tparent = store.parent.data() + nb;
    auto* tchild = store.child.data() + nb;
    Value* tcap = store.cap.data() + nb;
    std::int32_t* torig = store.orig_vertex.data() + nb;
    std::uint32_t* toff = store.chain_off.data() + store.chain_off.size() - tn - 1;

    order.assign(1, root_l);
    parent_enc.assign(1, -1);
    parent_bfs.assign(1, -1);
    for (std::size_t qi = 0; qi < order.size(); ++qi) {
      const std::int32_t lv = order[qi];
      const std::int32_t from =
          parent_bfs[qi] >= 0 ? order[parent_bfs[qi]] : -1;
      const std::int32_t v = base + lv;
      for (std::int32_t idx = fadj.off[v]; idx < fadj.off[v + 1]; ++idx) {
        const Arc a = fadj.arc[idx];
        const std::int32_t w = a.other - base;
        if (w == from) continue;
        MTFLOW_CHECK(static_cast<std::int32_t>(order.size()) < tn,
                     "component BFS incomplete");
        order.push_back(w);
        parent_enc.push_back(a.enc);
        parent_bfs.push_back(static_cast<std::int32_t>(qi));
      }
    }
    MTFLOW_CHECK(static_cast<std::int32_t>(order.size()) == tn,
                 "component BFS incomplete");

    for (std::int32_t id = 0; id < tn; ++id) {
      torig[id] = f_orig[base + order[id]];
      if (id == 0) {
        toff[1] = toff[0];
        continue;
      }
      // The BFS walked this edge parent -> child, so the child is the far
      // endpoint of the recorded arc and the encoding's sign says whether
      // that is the edge's a side.
      const std::int32_t enc = parent_enc[id];
      const bool child_is_a = enc < 0;
      const std::int32_t eidx = enc < 0 ? ~enc : enc;
      const std::int32_t p = parent_bfs[id];
      tparent[id] = p;
      tcap[id] = fe_cap[eidx];
      MTFLOW_CHECK(tcap[id] >= 1, "canonical capacity must be positive");
      auto& pc = tchild[p];
      if (pc[0] < 0)
        pc[0] = id;
      else if (pc[1] < 0)
        pc[1] = id;
      else
        MTFLOW_CHECK(false, "canonical vertex with more than two children");
      // Chain of original edges, oriented child -> parent.
      const auto lo = coff[eidx];
      const auto hi = coff[eidx + 1];
      if (child_is_a)
        store.chain_edges.insert(store.chain_edges.end(), cchain.begin() + lo,
                                 cchain.begin() + hi);
      else
        for (auto ci = hi; ci-- > lo;)
          store.chain_edges.push_back(cchain[ci]);
      toff[id + 1] =
          static_cast<std::uint32_t>(store.chain_edges.size()) - cb;
    }
    MTFLOW_CHECK(tchild[0][0] >= 0 && tchild[0][1] < 0,
                 "root must have exactly one child");
    for (std::int32_t id = 1; id < tn; ++id) {
      const bool leaf = tchild[id][0] < 0;
      const bool full = tchild[id][1] >= 0;
      MTFLOW_CHECK(leaf || full, "internal canonical vertex must have two children");
      MTFLOW_CHECK(leaf == (f_term[base + order[id]] != 0),
                   "canonical leaves and terminals must coincide");
    }
    CanonicalTree tree;
    tree.n = tn;
    out.trees.push_back(tree);
  }

  // Point every tree's views at its slice, now that the arrays are final.
  {
    std::size_t nb = 0, cb = 0;
    for (std::size_t i = 0; i < out.trees.size(); ++i) {
      CanonicalTree& t = out.trees[i];
      const auto tn = static_cast<std::size_t>(t.n);
      t.parent = {store.parent.data() + nb, tn};
      t.child = {store.child.data() + nb, tn};
      t.cap = {store.cap.data() + nb, tn};
      t.orig_vertex = {store.orig_vertex.data() + nb, tn};
      t.chain_off = {store.chain_off.data() + nb + i, tn + 1};
      t.chain_edges = {store.chain_edges.data() + cb, t.chain_off[tn]};
      nb += tn;
      cb += t.chain_off[tn];
    }
  }

  // Split copies of one terminal may be dropped independently; report the
  // original id once.
  std::sort(out.dropped_terminals.begin(), out.dropped_terminals.end());
  out.dropped_terminals.erase(
      std::unique(out.dropped_terminals.begin(), out.dropped_terminals.end()),
      out.dropped_terminals.end());
  return out;
}

std::vector<Value> project_flow_back(
    const Instance& inst, const Normalization& norm,
    const std::vector<std::vector<Value>>& tree_flows) {
  if (tree_flows.size() != norm.trees.size())
    throw std::invalid_argument("project_flow_back: flow/component count mismatch");
  std::vector<Value> flow(inst.edges.size(), 0);
  for (std::size_t t = 0; t < norm.trees.size(); ++t) {
    const auto& tree = norm.trees[t];
    const auto& f = tree_flows[t];
    if (f.size() != static_cast<std::size_t>(tree.n))
      throw std::invalid_argument("project_flow_back: flow/component shape mismatch");
    for (std::int32_t v = 1; v < tree.n; ++v)
      for (auto c = tree.chain_off[v]; c < tree.chain_off[v + 1]; ++c)
        flow[tree.chain_edges[c]] = f[v];
  }
  return flow;
}

}  // namespace mtflow
