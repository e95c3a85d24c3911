#include "mtflow/instance.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

#include "text_util.hpp"

namespace mtflow {

bool Instance::is_terminal(std::int32_t v) const {
  return std::binary_search(terminals.begin(), terminals.end(), v);
}

std::string ParseError::format(int line, const std::string& msg) {
  if (line <= 0) return msg;
  return "line " + std::to_string(line) + ": " + msg;
}

namespace {

using detail::parse_u64;
using detail::tokenize;

std::int32_t parse_vertex(std::string_view tok, int line, std::int32_t n) {
  std::uint64_t v = parse_u64(tok, line, "vertex id");
  if (v < 1 || v > static_cast<std::uint64_t>(n))
    throw ParseError(line, "vertex id out of range");
  return static_cast<std::int32_t>(v);
}

// Union-find for the tree check.
struct Dsu {
  std::vector<std::int32_t> parent;
  explicit Dsu(std::int32_t n) : parent(n + 1) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::int32_t find(std::int32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

Instance parse_instance(std::istream& in) {
  Instance inst;
  std::string line;
  int lineno = 0;
  bool have_problem = false;
  std::int64_t k = 0;
  std::size_t edges_seen = 0, terminals_seen = 0;
  Dsu dsu(0);
  std::vector<std::uint8_t> term_seen;

  while (std::getline(in, line)) {
    ++lineno;
    auto tok = tokenize(line);
    if (tok.empty()) continue;

    if (!have_problem) {
      if (tok[0] != "p")
        throw ParseError(lineno, "expected problem line 'p tree <n> <k>'");
      if (tok.size() != 4 || tok[1] != "tree")
        throw ParseError(lineno, "malformed problem line, want 'p tree <n> <k>'");
      std::uint64_t n = parse_u64(tok[2], lineno, "vertex count");
      if (n < 1 || n > 0x7FFFFFFFull)
        throw ParseError(lineno, "vertex count out of range");
      std::uint64_t kk = parse_u64(tok[3], lineno, "terminal count");
      if (kk > n) throw ParseError(lineno, "terminal count exceeds vertex count");
      inst.n = static_cast<std::int32_t>(n);
      k = static_cast<std::int64_t>(kk);
      inst.edges.reserve(n - 1);
      dsu = Dsu(inst.n);
      term_seen.assign(inst.n + 1, 0);
      have_problem = true;
      continue;
    }

    if (tok[0] == "e") {
      if (edges_seen >= static_cast<std::size_t>(inst.n - 1) || terminals_seen > 0)
        throw ParseError(lineno, "edge count mismatch: unexpected edge line");
      if (tok.size() != 4)
        throw ParseError(lineno, "malformed edge line, want 'e <u> <v> <cap>'");
      Instance::Edge e;
      e.u = parse_vertex(tok[1], lineno, inst.n);
      e.v = parse_vertex(tok[2], lineno, inst.n);
      e.cap = parse_u64(tok[3], lineno, "capacity");
      if (e.cap > kMaxCapacity)
        throw ParseError(lineno, "capacity out of range");
      if (e.u == e.v)
        throw ParseError(lineno, "non-tree edge set: self-loop");
      if (!dsu.unite(e.u, e.v))
        throw ParseError(lineno, "non-tree edge set: edge closes a cycle");
      inst.edges.push_back(e);
      ++edges_seen;
      continue;
    }

    if (tok[0] == "t") {
      if (edges_seen < static_cast<std::size_t>(inst.n - 1))
        throw ParseError(lineno, "edge count mismatch: expected " +
                                     std::to_string(inst.n - 1) + " edges, got " +
                                     std::to_string(edges_seen));
      if (terminals_seen >= static_cast<std::size_t>(k))
        throw ParseError(lineno, "terminal count mismatch: unexpected terminal line");
      if (tok.size() != 2)
        throw ParseError(lineno, "malformed terminal line, want 't <v>'");
      std::int32_t v = parse_vertex(tok[1], lineno, inst.n);
      if (term_seen[v]) throw ParseError(lineno, "duplicate terminal");
      term_seen[v] = 1;
      inst.terminals.push_back(v);
      ++terminals_seen;
      continue;
    }

    throw ParseError(lineno, "unknown line type '" + std::string(tok[0]) + "'");
  }

  if (!have_problem) throw ParseError(0, "missing problem line");
  if (edges_seen != static_cast<std::size_t>(inst.n - 1))
    throw ParseError(0, "edge count mismatch: expected " +
                            std::to_string(inst.n - 1) + " edges, got " +
                            std::to_string(edges_seen));
  if (terminals_seen != static_cast<std::size_t>(k))
    throw ParseError(0, "terminal count mismatch: expected " + std::to_string(k) +
                            " terminals, got " + std::to_string(terminals_seen));
  // n-1 cycle-free edges connect everything; no separate connectivity check.
  std::sort(inst.terminals.begin(), inst.terminals.end());
  return inst;
}

Instance parse_instance(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

void write_instance(std::ostream& out, const Instance& inst) {
  out << "p tree " << inst.n << ' ' << inst.terminals.size() << '\n';
  for (const auto& e : inst.edges)
    out << "e " << e.u << ' ' << e.v << ' ' << e.cap << '\n';
  for (auto t : inst.terminals) out << "t " << t << '\n';
}

}  // namespace mtflow
