#include "mtflow/certificate.hpp"

#include <algorithm>
#include <istream>
#include <list>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "text_util.hpp"

namespace mtflow {

namespace {

// Adjacency over the positive-capacity edges only; zero-capacity edges carry
// no flow and separate components for every cut/parity computation.
struct PosAdj {
  std::vector<std::int32_t> off;   // size n+2, 1-based vertices
  std::vector<std::int32_t> to;
  std::vector<std::int32_t> eidx;
};

PosAdj positive_adjacency(const Instance& inst) {
  PosAdj a;
  a.off.assign(inst.n + 2, 0);
  for (const auto& e : inst.edges)
    if (e.cap > 0) {
      ++a.off[e.u + 1];
      ++a.off[e.v + 1];
    }
  for (std::int32_t v = 1; v <= inst.n; ++v) a.off[v + 1] += a.off[v];
  a.to.assign(a.off[inst.n + 1], 0);
  a.eidx.assign(a.to.size(), 0);
  std::vector<std::int32_t> cur(a.off.begin(), a.off.end() - 1);
  for (std::size_t i = 0; i < inst.edges.size(); ++i) {
    const auto& e = inst.edges[i];
    if (e.cap == 0) continue;
    a.to[cur[e.u]] = e.v;
    a.eidx[cur[e.u]++] = static_cast<std::int32_t>(i);
    a.to[cur[e.v]] = e.u;
    a.eidx[cur[e.v]++] = static_cast<std::int32_t>(i);
  }
  return a;
}

}  // namespace

TreeCuts extract_cuts(const CanonicalTree& tree, const FlowAssignment& fa) {
  const std::int32_t n = tree.n;
  MTFLOW_CHECK(static_cast<std::int32_t>(fa.flow.size()) == n,
               "flow does not match the tree");
  TreeCuts tc;
  tc.cut_of.assign(n, -1);

  std::vector<std::int32_t> todo;
  auto visit = [&](std::int32_t x, std::int32_t cut) {
    MTFLOW_CHECK(tc.cut_of[x] < 0, "cut sets overlap");
    tc.cut_of[x] = cut;
    todo.push_back(x);
  };
  auto grow = [&](std::int32_t t) {
    const std::int32_t cut = static_cast<std::int32_t>(tc.cut_terminal.size());
    tc.cut_terminal.push_back(t);
    todo.clear();
    visit(t, cut);
    // One free residual unit lets another unit leave t upward...
    std::int32_t w = t;
    while (w != 0 && tree.cap[w] >= fa.flow[w] + 1) {
      visit(tree.parent[w], cut);
      w = tree.parent[w];
    }
    // ...while turning downward consumes two (one out, one back).
    while (!todo.empty()) {
      const std::int32_t v = todo.back();
      todo.pop_back();
      for (const std::int32_t c : tree.child[v]) {
        if (c < 0 || tc.cut_of[c] == cut) continue;
        if (tree.cap[c] >= fa.flow[c] + 2) visit(c, cut);
      }
    }
  };
  grow(0);
  for (std::int32_t v = 1; v < n; ++v)
    if (tree.is_leaf(v)) grow(v);
  const std::int32_t ncuts = static_cast<std::int32_t>(tc.cut_terminal.size());

  // Vertices in no cut fall into residual components.
  std::vector<std::int32_t> rcomp(n, -1);
  std::vector<std::vector<std::int32_t>> rvert;
  std::vector<std::int32_t> stack;
  for (std::int32_t v = 0; v < n; ++v) {
    if (tc.cut_of[v] >= 0 || rcomp[v] >= 0) continue;
    const std::int32_t id = static_cast<std::int32_t>(rvert.size());
    rvert.emplace_back();
    rcomp[v] = id;
    stack.assign(1, v);
    while (!stack.empty()) {
      const std::int32_t x = stack.back();
      stack.pop_back();
      rvert[id].push_back(x);
      auto extend = [&](std::int32_t y) {
        if (y >= 0 && tc.cut_of[y] < 0 && rcomp[y] < 0) {
          rcomp[y] = id;
          stack.push_back(y);
        }
      };
      extend(tree.parent[x]);
      extend(tree.child[x][0]);
      extend(tree.child[x][1]);
    }
  }

  // Boundary weights plus the saturation rules a blocked flow guarantees.
  std::vector<Value> cbound(ncuts, 0);
  std::vector<Value> rbound(rvert.size(), 0);
  for (std::int32_t v = 1; v < n; ++v) {
    const std::int32_t p = tree.parent[v];
    const std::int32_t sv = tc.cut_of[v];
    const std::int32_t sp = tc.cut_of[p];
    const Value cap = tree.cap[v];
    if (sv >= 0 && sp >= 0) {
      if (sv == sp) continue;
      MTFLOW_CHECK(fa.flow[v] == cap, "boundary edge between two cuts is unsaturated");
      cbound[sv] += cap;
      cbound[sp] += cap;
    } else if (sv >= 0) {
      MTFLOW_CHECK(fa.flow[v] == cap, "cut parent-edge is unsaturated");
      cbound[sv] += cap;
      rbound[rcomp[p]] += cap;
    } else if (sp >= 0) {
      cbound[sp] += cap;
      rbound[rcomp[v]] += cap;
    }
    // Two adjacent cut-free vertices always share a component.
  }

  // Odd components hang below a cut through an edge one unit short of
  // saturation; even ones below a saturated edge.
  std::vector<std::uint8_t> odd(rvert.size(), 0);
  for (std::size_t i = 0; i < rvert.size(); ++i) odd[i] = rbound[i] & 1;
  std::vector<std::int32_t> owner(rvert.size(), -1);
  std::vector<Value> owned(ncuts, 0);
  for (std::int32_t v = 1; v < n; ++v) {
    if (tc.cut_of[v] >= 0) continue;
    const std::int32_t sp = tc.cut_of[tree.parent[v]];
    if (sp < 0) continue;
    const std::int32_t id = rcomp[v];
    MTFLOW_CHECK(owner[id] < 0, "residual component with two parent-edges");
    owner[id] = sp;
    MTFLOW_CHECK(fa.flow[v] + (odd[id] ? 1 : 0) == tree.cap[v],
                 "flow above a residual component off by more than parity");
    if (odd[id]) owned[sp] += 1;
  }
  for (std::size_t i = 0; i < rvert.size(); ++i)
    MTFLOW_CHECK(owner[i] >= 0, "residual component without a parent-edge");

  // Blocked condition: each terminal's edge carries exactly the cut boundary
  // minus one unit per odd component it owns.
  for (std::int32_t cut = 0; cut < ncuts; ++cut) {
    const std::int32_t t = tc.cut_terminal[cut];
    const std::int32_t e = (t == 0) ? tree.child[0][0] : t;
    MTFLOW_CHECK(fa.flow[e] + owned[cut] == cbound[cut],
                 "terminal edge does not match its blocked cut");
  }

  tc.cut_vertices.assign(ncuts, {});
  for (std::int32_t v = 0; v < n; ++v)
    if (tc.cut_of[v] >= 0) tc.cut_vertices[tc.cut_of[v]].push_back(v);
  for (std::size_t i = 0; i < rvert.size(); ++i) {
    if (!odd[i]) continue;
    TreeCuts::OddSet os;
    os.vertices = std::move(rvert[i]);
    std::sort(os.vertices.begin(), os.vertices.end());
    os.owner_cut = owner[i];
    tc.odd_sets.push_back(std::move(os));
  }
  for (const Value w : cbound) tc.gamma += w;
  tc.kappa = tc.odd_sets.size();
  return tc;
}

std::vector<PairFlow> decompose(const CanonicalTree& tree,
                                std::span<const Value> flow) {
  const std::int32_t n = tree.n;
  MTFLOW_CHECK(static_cast<std::int32_t>(flow.size()) == n,
               "flow does not match the tree");
  for (std::int32_t v = 1; v < n; ++v) {
    if (tree.is_leaf(v)) continue;
    const Value f0 = flow[v];
    const Value f1 = flow[tree.child[v][0]];
    const Value f2 = flow[tree.child[v][1]];
    const bool even = ((f0 + f1 + f2) & 1) == 0;
    if (!even || f0 > f1 + f2 || f1 > f0 + f2 || f2 > f0 + f1)
      throw std::domain_error("flow not conserved at vertex " + std::to_string(v));
  }

  // Strand lists: per edge, (terminal, units) runs totalling the edge flow.
  std::map<std::pair<std::int32_t, std::int32_t>, Value> acc;
  auto emit = [&](std::int32_t a, std::int32_t b, Value units) {
    MTFLOW_CHECK(a != b, "path with equal endpoints");
    if (a > b) std::swap(a, b);
    acc[{a, b}] += units;
  };
  std::vector<std::list<std::pair<std::int32_t, Value>>> strands(n);
  for (std::int32_t v = 1; v < n; ++v)
    if (tree.is_leaf(v) && flow[v] > 0)
      strands[v].push_back({tree.orig_vertex[v], flow[v]});
  for (std::int32_t v = n - 1; v >= 1; --v) {
    if (tree.is_leaf(v)) continue;
    auto& l1 = strands[tree.child[v][0]];
    auto& l2 = strands[tree.child[v][1]];
    Value pair_units =
        (flow[tree.child[v][0]] + flow[tree.child[v][1]] - flow[v]) / 2;
    while (pair_units > 0) {
      MTFLOW_CHECK(!l1.empty() && !l2.empty(), "strand bookkeeping underflow");
      auto& a = l1.front();
      auto& b = l2.front();
      const Value m = std::min({a.second, b.second, pair_units});
      emit(a.first, b.first, m);
      a.second -= m;
      b.second -= m;
      if (a.second == 0) l1.pop_front();
      if (b.second == 0) l2.pop_front();
      pair_units -= m;
    }
    strands[v] = std::move(l1);
    strands[v].splice(strands[v].end(), l2);
  }
  if (n > 1) {
    const std::int32_t rc = tree.child[0][0];
    Value total = 0;
    for (const auto& s : strands[rc]) {
      emit(tree.orig_vertex[0], s.first, s.second);
      total += s.second;
    }
    MTFLOW_CHECK(total == flow[rc], "strands lost at the root");
  }

  std::vector<PairFlow> out;
  out.reserve(acc.size());
  for (const auto& [key, units] : acc) out.push_back({key.first, key.second, units});
  return out;
}

InstanceCertificate build_certificate(const Instance& inst, const Solution& sol) {
  const std::int32_t n = inst.n;
  const std::int32_t k = static_cast<std::int32_t>(inst.terminals.size());
  MTFLOW_CHECK(sol.norm.trees.size() == sol.flows.size(),
               "solution components out of shape");
  auto slot_of = [&](std::int32_t t) {
    const auto it =
        std::lower_bound(inst.terminals.begin(), inst.terminals.end(), t);
    MTFLOW_CHECK(it != inst.terminals.end() && *it == t,
                 "cut owner is not a terminal");
    return static_cast<std::int32_t>(it - inst.terminals.begin());
  };

  // Vertex states: a cut index, -1 for residual, -2 for not yet placed
  // (pruned dead ends and flowless components).
  std::vector<std::int32_t> state(n + 1, -2);
  auto set_state = [&](std::int32_t v, std::int32_t s) {
    if (state[v] == s) return;
    MTFLOW_CHECK(state[v] == -2, "conflicting cut assignment for a vertex");
    state[v] = s;
  };

  for (std::size_t ti = 0; ti < sol.norm.trees.size(); ++ti) {
    const CanonicalTree& tree = sol.norm.trees[ti];
    const TreeCuts tc = extract_cuts(tree, sol.flows[ti]);
    for (std::int32_t v = 0; v < tree.n; ++v) {
      const std::int32_t s = tc.cut_of[v];
      set_state(tree.orig_vertex[v],
                s >= 0 ? slot_of(tree.orig_vertex[tc.cut_terminal[s]]) : -1);
    }
    // Interior vertices of contraction chains side with the chain's child end
    // up to the first minimum-capacity edge, the only edge that can satisfy
    // the boundary saturation rules, then with the parent end.
    for (std::int32_t v = 1; v < tree.n; ++v) {
      const std::uint32_t off = tree.chain_off[v];
      const std::uint32_t cnt = tree.chain_off[v + 1] - off;
      if (cnt < 2) continue;
      const std::int32_t sc = state[tree.orig_vertex[v]];
      const std::int32_t sp = state[tree.orig_vertex[tree.parent[v]]];
      std::uint32_t boundary = cnt;
      if (sc != sp) {
        boundary = 0;
        while (boundary < cnt &&
               inst.edges[tree.chain_edges[off + boundary]].cap != tree.cap[v])
          ++boundary;
        MTFLOW_CHECK(boundary < cnt, "chain lost its minimum-capacity edge");
      }
      std::int32_t cur = tree.orig_vertex[v];
      for (std::uint32_t i = 0; i < cnt; ++i) {
        const auto& e = inst.edges[tree.chain_edges[off + i]];
        MTFLOW_CHECK(e.u == cur || e.v == cur, "chain edges out of order");
        const std::int32_t nxt = (e.u == cur) ? e.v : e.u;
        if (i + 1 < cnt) set_state(nxt, i < boundary ? sc : sp);
        cur = nxt;
      }
      MTFLOW_CHECK(cur == tree.orig_vertex[tree.parent[v]],
                   "chain does not reach its parent");
    }
  }

  // Terminals that could not route any flow still own a cut.
  for (std::int32_t slot = 0; slot < k; ++slot) {
    const std::int32_t t = inst.terminals[slot];
    if (state[t] == -2)
      state[t] = slot;
    else
      MTFLOW_CHECK(state[t] == slot, "terminal landed in a foreign cut");
  }

  // Sweep cut states into unplaced vertices across positive edges: dead-end
  // subtrees join the adjacent cut (their boundary would otherwise be
  // overcounted), and flowless components collapse into their terminal's cut
  // with an empty boundary.
  const PosAdj adj = positive_adjacency(inst);
  std::vector<std::int32_t> queue;
  queue.reserve(n);
  for (std::int32_t v = 1; v <= n; ++v)
    if (state[v] >= 0) queue.push_back(v);
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const std::int32_t u = queue[qi];
    for (std::int32_t j = adj.off[u]; j < adj.off[u + 1]; ++j) {
      const std::int32_t w = adj.to[j];
      if (state[w] == -2) {
        state[w] = state[u];
        queue.push_back(w);
      }
    }
  }

  // Residual components of the original instance.
  std::vector<std::int32_t> comp(n + 1, -1);
  std::vector<std::vector<std::int32_t>> comp_vertices;
  std::vector<std::int32_t> stack;
  for (std::int32_t v = 1; v <= n; ++v) {
    if (state[v] >= 0 || comp[v] >= 0) continue;
    const std::int32_t id = static_cast<std::int32_t>(comp_vertices.size());
    comp_vertices.emplace_back();
    comp[v] = id;
    stack.assign(1, v);
    while (!stack.empty()) {
      const std::int32_t x = stack.back();
      stack.pop_back();
      comp_vertices[id].push_back(x);
      for (std::int32_t j = adj.off[x]; j < adj.off[x + 1]; ++j) {
        const std::int32_t w = adj.to[j];
        if (state[w] < 0 && comp[w] < 0) {
          comp[w] = id;
          stack.push_back(w);
        }
      }
    }
  }

  std::vector<Value> cut_weight(k, 0);
  std::vector<Value> comp_weight(comp_vertices.size(), 0);
  for (const auto& e : inst.edges) {
    if (e.cap == 0) continue;
    const std::int32_t su = state[e.u];
    const std::int32_t sv = state[e.v];
    if (su >= 0 && sv >= 0) {
      if (su == sv) continue;
      cut_weight[su] += e.cap;
      cut_weight[sv] += e.cap;
    } else if (su >= 0) {
      cut_weight[su] += e.cap;
      comp_weight[comp[e.v]] += e.cap;
    } else if (sv >= 0) {
      cut_weight[sv] += e.cap;
      comp_weight[comp[e.u]] += e.cap;
    }
  }

  InstanceCertificate cert;
  cert.cuts.resize(k);
  for (std::int32_t slot = 0; slot < k; ++slot)
    cert.cuts[slot].terminal = inst.terminals[slot];
  for (std::int32_t v = 1; v <= n; ++v)
    if (state[v] >= 0) cert.cuts[state[v]].vertices.push_back(v);
  for (std::size_t i = 0; i < comp_vertices.size(); ++i) {
    if ((comp_weight[i] & 1) == 0) continue;
    std::sort(comp_vertices[i].begin(), comp_vertices[i].end());
    cert.odd_sets.push_back(std::move(comp_vertices[i]));
  }
  for (const Value w : cut_weight) cert.gamma += w;
  cert.kappa = cert.odd_sets.size();
  MTFLOW_CHECK(cert.gamma == sol.value2 + cert.kappa,
               "certificate disagrees with the flow value");
  return cert;
}

std::vector<PairFlow> build_decomposition(const Instance& inst,
                                          const Solution& sol) {
  MTFLOW_CHECK(sol.edge_flow.size() == inst.edges.size(),
               "flow does not match the instance");
  std::map<std::pair<std::int32_t, std::int32_t>, Value> acc;
  for (std::size_t ti = 0; ti < sol.norm.trees.size(); ++ti)
    for (const PairFlow& p : decompose(sol.norm.trees[ti], sol.flows[ti].flow))
      acc[{p.s, p.t}] += p.units;
  std::vector<PairFlow> out;
  out.reserve(acc.size());
  for (const auto& [key, units] : acc) out.push_back({key.first, key.second, units});
  return out;
}

SolutionDoc make_doc(const Instance& inst, const Solution& sol,
                     const InstanceCertificate* cert,
                     const std::vector<PairFlow>* pairs) {
  MTFLOW_CHECK(sol.edge_flow.size() == inst.edges.size(),
               "flow does not match the instance");
  SolutionDoc doc;
  doc.has_value = true;
  doc.value2 = sol.value2;
  doc.flows.reserve(inst.edges.size());
  for (std::size_t i = 0; i < inst.edges.size(); ++i)
    doc.flows.push_back({inst.edges[i].u, inst.edges[i].v, sol.edge_flow[i]});
  if (pairs) {
    doc.has_pairs = true;
    doc.pairs = *pairs;
  }
  if (cert) {
    doc.has_cuts = true;
    doc.cuts = cert->cuts;
    doc.odd_sets = cert->odd_sets;
  }
  return doc;
}

void write_solution(std::ostream& out, const SolutionDoc& doc) {
  if (doc.has_value) out << "value " << doc.value2 << '\n';
  for (const auto& ef : doc.flows)
    out << "f " << ef.u << ' ' << ef.v << ' ' << ef.flow << '\n';
  if (doc.has_pairs)
    for (const auto& p : doc.pairs)
      out << "g " << p.s << ' ' << p.t << ' ' << p.units << '\n';
  for (const auto& cut : doc.cuts) {
    out << "X " << cut.terminal;
    for (const std::int32_t v : cut.vertices)
      if (v != cut.terminal) out << ' ' << v;
    out << '\n';
  }
  for (const auto& w : doc.odd_sets) {
    out << 'W';
    for (const std::int32_t v : w) out << ' ' << v;
    out << '\n';
  }
}

namespace {

std::int32_t parse_id(std::string_view tok, int line) {
  const std::uint64_t v = detail::parse_u64(tok, line, "vertex id");
  if (v < 1 || v > 0x7FFFFFFFull) throw ParseError(line, "vertex id out of range");
  return static_cast<std::int32_t>(v);
}

}  // namespace

SolutionDoc read_solution(std::istream& in) {
  SolutionDoc doc;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = detail::tokenize(line);
    if (tok.empty()) continue;
    if (tok[0] == "value") {
      if (tok.size() != 2) throw ParseError(lineno, "value line needs one number");
      if (doc.has_value) throw ParseError(lineno, "duplicate value line");
      doc.value2 = detail::parse_u64(tok[1], lineno, "flow value");
      doc.has_value = true;
    } else if (tok[0] == "f") {
      if (tok.size() != 4)
        throw ParseError(lineno, "flow line needs two endpoints and a value");
      SolutionDoc::EdgeFlow ef;
      ef.u = parse_id(tok[1], lineno);
      ef.v = parse_id(tok[2], lineno);
      ef.flow = detail::parse_u64(tok[3], lineno, "flow value");
      doc.flows.push_back(ef);
    } else if (tok[0] == "g") {
      if (tok.size() != 4)
        throw ParseError(lineno, "pair line needs two terminals and a count");
      PairFlow p;
      p.s = parse_id(tok[1], lineno);
      p.t = parse_id(tok[2], lineno);
      p.units = detail::parse_u64(tok[3], lineno, "pair units");
      doc.pairs.push_back(p);
      doc.has_pairs = true;
    } else if (tok[0] == "X") {
      if (tok.size() < 2) throw ParseError(lineno, "cut line needs a terminal");
      InstanceCertificate::Cut cut;
      cut.terminal = parse_id(tok[1], lineno);
      cut.vertices.push_back(cut.terminal);
      for (std::size_t i = 2; i < tok.size(); ++i)
        cut.vertices.push_back(parse_id(tok[i], lineno));
      std::sort(cut.vertices.begin(), cut.vertices.end());
      cut.vertices.erase(std::unique(cut.vertices.begin(), cut.vertices.end()),
                         cut.vertices.end());
      doc.cuts.push_back(std::move(cut));
      doc.has_cuts = true;
    } else if (tok[0] == "W") {
      if (tok.size() < 2) throw ParseError(lineno, "odd set line needs a vertex");
      std::vector<std::int32_t> w;
      for (std::size_t i = 1; i < tok.size(); ++i)
        w.push_back(parse_id(tok[i], lineno));
      std::sort(w.begin(), w.end());
      w.erase(std::unique(w.begin(), w.end()), w.end());
      doc.odd_sets.push_back(std::move(w));
    } else {
      throw ParseError(lineno, "unknown line type");
    }
  }
  return doc;
}

SolutionDoc read_solution(const std::string& text) {
  std::istringstream in(text);
  return read_solution(in);
}

VerificationReport verify_solution(const Instance& inst, const SolutionDoc& doc) {
  VerificationReport rep;
  const char* names[6] = {"feasibility", "decomposition", "value",
                          "cut-system",  "odd-sets",      "duality"};
  for (std::size_t i = 0; i < 6; ++i) rep.checks[i].name = names[i];
  auto fail = [&](std::size_t i, std::string detail) {
    rep.checks[i].pass = false;
    if (rep.checks[i].detail.empty()) rep.checks[i].detail = std::move(detail);
  };
  for (auto& c : rep.checks) c.pass = true;

  const std::int32_t n = inst.n;
  const std::size_t m = inst.edges.size();
  const std::int32_t k = static_cast<std::int32_t>(inst.terminals.size());
  auto edge_name = [&](std::int32_t u, std::int32_t v) {
    return std::to_string(u) + "-" + std::to_string(v);
  };

  // (1) feasibility: each edge claimed exactly once, 0 <= f <= c.
  std::unordered_map<std::uint64_t, std::int32_t> edge_ix;
  edge_ix.reserve(2 * m);
  auto ekey = [](std::int32_t a, std::int32_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  };
  for (std::size_t i = 0; i < m; ++i)
    edge_ix.emplace(ekey(inst.edges[i].u, inst.edges[i].v),
                    static_cast<std::int32_t>(i));
  std::vector<Value> f(m, 0);
  std::vector<std::uint8_t> covered(m, 0);
  bool flows_ok = true;
  for (const auto& ef : doc.flows) {
    const auto it = (ef.u >= 1 && ef.u <= n && ef.v >= 1 && ef.v <= n)
                        ? edge_ix.find(ekey(ef.u, ef.v))
                        : edge_ix.end();
    if (it == edge_ix.end()) {
      fail(0, "flow on unknown edge " + edge_name(ef.u, ef.v));
      flows_ok = false;
      continue;
    }
    const std::int32_t i = it->second;
    if (covered[i]) {
      fail(0, "duplicate flow line for edge " + edge_name(ef.u, ef.v));
      flows_ok = false;
      continue;
    }
    covered[i] = 1;
    f[i] = ef.flow;
    if (ef.flow > inst.edges[i].cap) {
      fail(0, "flow exceeds capacity on edge " + edge_name(ef.u, ef.v));
      flows_ok = false;
    }
  }
  std::size_t ncovered = 0;
  for (const std::uint8_t c : covered) ncovered += c;
  if (ncovered != m) {
    fail(0, "flow lines cover " + std::to_string(ncovered) + " of " +
                std::to_string(m) + " edges");
    flows_ok = false;
  }

  // (2) decomposition: claimed pairs reproduce f edge-by-edge, or f passes
  // the exact decomposability test (even degree-sum and no incident edge
  // carrying more than half) at every non-terminal.
  if (!flows_ok) {
    fail(1, "flow lines unusable");
  } else if (doc.has_pairs) {
    std::vector<std::int32_t> parent(n + 1, 0), pedge(n + 1, -1), depth(n + 1, 0);
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
    std::vector<std::int32_t> order;
    order.reserve(n);
    if (n >= 1) {
      parent[1] = 0;
      order.push_back(1);
      for (std::size_t qi = 0; qi < order.size(); ++qi) {
        const std::int32_t u = order[qi];
        for (std::int32_t j = head[u]; j < head[u + 1]; ++j) {
          const std::int32_t w = adj_to[j];
          if (w == parent[u]) continue;
          parent[w] = u;
          pedge[w] = adj_e[j];
          depth[w] = depth[u] + 1;
          order.push_back(w);
        }
      }
    }
    std::vector<Value> acc(m, 0);
    for (const auto& p : doc.pairs) {
      if (p.s < 1 || p.s > n || p.t < 1 || p.t > n ||
          !inst.is_terminal(p.s) || !inst.is_terminal(p.t) || p.s == p.t) {
        fail(1, "pair " + edge_name(p.s, p.t) + " is not a distinct terminal pair");
        break;
      }
      if (p.units == 0) {
        fail(1, "pair " + edge_name(p.s, p.t) + " carries no units");
        break;
      }
      std::int32_t a = p.s, b = p.t;
      while (a != b) {
        if (depth[a] < depth[b]) std::swap(a, b);
        acc[pedge[a]] += p.units;
        a = parent[a];
      }
    }
    if (rep.checks[1].pass)
      for (std::size_t i = 0; i < m; ++i)
        if (acc[i] != f[i]) {
          fail(1, "pairs route " + std::to_string(acc[i]) + " on edge " +
                      edge_name(inst.edges[i].u, inst.edges[i].v) + ", flow says " +
                      std::to_string(f[i]));
          break;
        }
  } else {
    std::vector<Value> vsum(n + 1, 0), vmax(n + 1, 0);
    for (std::size_t i = 0; i < m; ++i) {
      vsum[inst.edges[i].u] += f[i];
      vsum[inst.edges[i].v] += f[i];
      vmax[inst.edges[i].u] = std::max(vmax[inst.edges[i].u], f[i]);
      vmax[inst.edges[i].v] = std::max(vmax[inst.edges[i].v], f[i]);
    }
    for (std::int32_t v = 1; v <= n; ++v) {
      if (inst.is_terminal(v)) continue;
      if ((vsum[v] & 1) != 0 || 2 * vmax[v] > vsum[v]) {
        fail(1, "flow not decomposable at vertex " + std::to_string(v));
        break;
      }
    }
  }

  // (3) value: twice alpha is the total flow incident to terminals.
  if (!doc.has_value) {
    fail(2, "missing value line");
  } else if (!flows_ok) {
    fail(2, "flow lines unusable");
  } else {
    std::vector<Value> vsum(n + 1, 0);
    for (std::size_t i = 0; i < m; ++i) {
      vsum[inst.edges[i].u] += f[i];
      vsum[inst.edges[i].v] += f[i];
    }
    Value total = 0;
    for (const std::int32_t t : inst.terminals) total += vsum[t];
    if (total != doc.value2)
      fail(2, "claimed value " + std::to_string(doc.value2) +
                  ", terminal-incident flow " + std::to_string(total));
  }

  // (4) cut-system: one connected cut per terminal, pairwise disjoint,
  // containing its own terminal and no other.
  const PosAdj adj = positive_adjacency(inst);
  std::vector<std::int32_t> state(n + 1, -1);
  if (static_cast<std::int32_t>(doc.cuts.size()) != k)
    fail(3, "expected " + std::to_string(k) + " cuts, got " +
                std::to_string(doc.cuts.size()));
  std::vector<std::uint8_t> cut_seen(k, 0);
  for (const auto& cut : doc.cuts) {
    const auto it =
        std::lower_bound(inst.terminals.begin(), inst.terminals.end(), cut.terminal);
    if (it == inst.terminals.end() || *it != cut.terminal) {
      fail(3, "cut owner " + std::to_string(cut.terminal) + " is not a terminal");
      continue;
    }
    const std::int32_t slot = static_cast<std::int32_t>(it - inst.terminals.begin());
    if (cut_seen[slot]) {
      fail(3, "duplicate cut for terminal " + std::to_string(cut.terminal));
      continue;
    }
    cut_seen[slot] = 1;
    bool contains_owner = false;
    for (const std::int32_t v : cut.vertices) {
      if (v < 1 || v > n) {
        fail(3, "cut of terminal " + std::to_string(cut.terminal) +
                    " lists unknown vertex " + std::to_string(v));
        continue;
      }
      if (state[v] != -1) {
        fail(3, "cuts overlap at vertex " + std::to_string(v));
        continue;
      }
      state[v] = slot;
      if (v == cut.terminal) contains_owner = true;
      else if (inst.is_terminal(v))
        fail(3, "cut of terminal " + std::to_string(cut.terminal) +
                    " contains terminal " + std::to_string(v));
    }
    if (!contains_owner) {
      fail(3, "cut of terminal " + std::to_string(cut.terminal) +
                  " does not contain it");
      continue;
    }
    // Connectivity across positive edges, starting at the owner.  Visited
    // vertices flip to -2-slot (never the -1 "unassigned" sentinel) and are
    // restored afterwards, so the sweep stays linear over all cuts.
    const std::int32_t mark = -2 - slot;
    std::size_t reached = 0;
    std::vector<std::int32_t> stack(1, cut.terminal);
    state[cut.terminal] = mark;
    while (!stack.empty()) {
      const std::int32_t u = stack.back();
      stack.pop_back();
      ++reached;
      for (std::int32_t j = adj.off[u]; j < adj.off[u + 1]; ++j) {
        const std::int32_t w = adj.to[j];
        if (state[w] == slot) {
          state[w] = mark;
          stack.push_back(w);
        }
      }
    }
    for (const std::int32_t v : cut.vertices)
      if (v >= 1 && v <= n && state[v] == mark) state[v] = slot;
    if (reached != cut.vertices.size())
      fail(3, "cut of terminal " + std::to_string(cut.terminal) +
                  " is disconnected");
  }

  // (5) odd sets: recount residual components with odd boundary capacity.
  for (const auto& w : doc.odd_sets)
    for (const std::int32_t v : w)
      if (v < 1 || v > n) {
        fail(4, "odd set lists unknown vertex " + std::to_string(v));
        break;
      }
  std::vector<std::int32_t> comp(n + 1, -1);
  std::int32_t ncomp = 0;
  {
    std::vector<std::int32_t> stack;
    for (std::int32_t v = 1; v <= n; ++v) {
      if (state[v] >= 0 || comp[v] >= 0) continue;
      const std::int32_t id = ncomp++;
      comp[v] = id;
      stack.assign(1, v);
      while (!stack.empty()) {
        const std::int32_t x = stack.back();
        stack.pop_back();
        for (std::int32_t j = adj.off[x]; j < adj.off[x + 1]; ++j) {
          const std::int32_t w = adj.to[j];
          if (state[w] < 0 && comp[w] < 0) {
            comp[w] = id;
            stack.push_back(w);
          }
        }
      }
    }
  }
  std::vector<Value> cut_weight(k, 0), comp_weight(ncomp, 0);
  for (const auto& e : inst.edges) {
    if (e.cap == 0) continue;
    const std::int32_t su = state[e.u];
    const std::int32_t sv = state[e.v];
    if (su >= 0 && sv >= 0) {
      if (su == sv) continue;
      cut_weight[su] += e.cap;
      cut_weight[sv] += e.cap;
    } else if (su >= 0) {
      cut_weight[su] += e.cap;
      comp_weight[comp[e.v]] += e.cap;
    } else if (sv >= 0) {
      cut_weight[sv] += e.cap;
      comp_weight[comp[e.u]] += e.cap;
    }
  }
  Value kappa_re = 0;
  for (const Value w : comp_weight) kappa_re += w & 1;
  if (kappa_re != doc.odd_sets.size())
    fail(4, "recounted " + std::to_string(kappa_re) + " odd sets, claimed " +
                std::to_string(doc.odd_sets.size()));

  // (6) duality: recomputed gamma minus recomputed kappa equals the value.
  Value gamma_re = 0;
  for (const Value w : cut_weight) gamma_re += w;
  if (!doc.has_value)
    fail(5, "missing value line");
  else if (doc.value2 + kappa_re != gamma_re)
    fail(5, "value " + std::to_string(doc.value2) + " but gamma " +
                std::to_string(gamma_re) + ", kappa " + std::to_string(kappa_re));

  rep.pass = true;
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

void write_report(std::ostream& out, const VerificationReport& rep) {
  int passed = 0;
  for (std::size_t i = 0; i < rep.checks.size(); ++i) {
    const auto& c = rep.checks[i];
    passed += c.pass ? 1 : 0;
    out << "check " << (i + 1) << ' ' << c.name << ": "
        << (c.pass ? "PASS" : "FAIL");
    if (!c.pass && !c.detail.empty()) out << " (" << c.detail << ")";
    out << '\n';
  }
  out << (rep.pass ? "PASS" : "FAIL") << " (" << passed << "/"
      << rep.checks.size() << " checks)\n";
}

}  // namespace mtflow
