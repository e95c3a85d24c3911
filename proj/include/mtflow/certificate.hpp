#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mtflow/instance.hpp"
#include "mtflow/normalize.hpp"
#include "mtflow/solver.hpp"
#include "mtflow/types.hpp"

namespace mtflow {

// Cut system extracted from a blocked flow on one canonical tree.  Cut i is
// the set of vertices the flow cannot push another unit away from terminal
// cut_terminal[i]; the cuts are pairwise disjoint and each contains exactly
// its own terminal.  Vertices in no cut form residual components; those with
// odd boundary capacity are the odd sets, and each hangs below a specific
// cut (its owner) through a one-short-of-saturated edge.
struct TreeCuts {
  struct OddSet {
    std::vector<std::int32_t> vertices;
    std::int32_t owner_cut = -1;
  };
  std::vector<std::int32_t> cut_of;        // vertex -> cut index, -1 = none
  std::vector<std::int32_t> cut_terminal;  // cut index -> terminal vertex
  std::vector<std::vector<std::int32_t>> cut_vertices;
  std::vector<OddSet> odd_sets;
  Value gamma = 0;  // total boundary capacity of all cuts
  Value kappa = 0;  // number of odd sets
};

// Walks outward from every terminal of a blocked flow and checks the
// blocking invariants on the way (saturated cut boundaries, odd sets behind
// capacity-minus-one edges, flow(terminal edge) = c(cut) - #odd sets owned).
// Violations throw std::logic_error: they mean the flow is not blocked.
TreeCuts extract_cuts(const CanonicalTree& tree, const FlowAssignment& fa);

// units routed between two distinct terminals (original vertex ids, s < t).
struct PairFlow {
  std::int32_t s = 0;
  std::int32_t t = 0;
  Value units = 0;
};

// Splits a conserved flow on a canonical tree into terminal-to-terminal path
// flows by matching strands bottom-up.  Requires vertex conservation at every
// internal vertex (throws std::domain_error naming the vertex otherwise);
// result pairs use original terminal ids and are sorted.
std::vector<PairFlow> decompose(const CanonicalTree& tree,
                                std::span<const Value> flow);

// Optimality certificate in terms of the original instance: one connected
// vertex set per terminal (pairwise disjoint), plus the odd residual
// components.  gamma - kappa equals twice the maximum flow value.
// Zero-capacity edges separate the instance for every connectivity and
// parity computation here, matching their role as non-edges for the flow.
struct InstanceCertificate {
  struct Cut {
    std::int32_t terminal = 0;
    std::vector<std::int32_t> vertices;  // sorted, contains terminal
  };
  std::vector<Cut> cuts;                           // sorted by terminal
  std::vector<std::vector<std::int32_t>> odd_sets; // each sorted
  Value gamma = 0;
  Value kappa = 0;
};

InstanceCertificate build_certificate(const Instance& inst, const Solution& sol);

// Merged path decomposition across all components of a solution.
std::vector<PairFlow> build_decomposition(const Instance& inst,
                                          const Solution& sol);

// Solution / certificate document, mirroring the text format:
//   value <2alpha>
//   f <u> <v> <flow>        one line per edge
//   g <t1> <t2> <units>     optional decomposition
//   X <t> <v...>            optional cut, terminal first
//   W <v...>                optional odd set
struct SolutionDoc {
  bool has_value = false;
  Value value2 = 0;
  struct EdgeFlow {
    std::int32_t u = 0;
    std::int32_t v = 0;
    Value flow = 0;
  };
  std::vector<EdgeFlow> flows;
  bool has_pairs = false;
  std::vector<PairFlow> pairs;
  bool has_cuts = false;
  std::vector<InstanceCertificate::Cut> cuts;
  std::vector<std::vector<std::int32_t>> odd_sets;
};

SolutionDoc make_doc(const Instance& inst, const Solution& sol,
                     const InstanceCertificate* cert = nullptr,
                     const std::vector<PairFlow>* pairs = nullptr);

void write_solution(std::ostream& out, const SolutionDoc& doc);
SolutionDoc read_solution(std::istream& in);  // throws ParseError
SolutionDoc read_solution(const std::string& text);

// Independent re-check of a claimed solution document against the instance;
// trusts nothing beyond the two inputs.  Check names, in order:
//   feasibility    0 <= f <= c on every edge, edges covered exactly once
//   decomposition  f splits into terminal-to-terminal paths (or matches g)
//   value          2alpha equals total terminal-incident flow
//   cut-system     disjoint connected sets, one per terminal
//   odd-sets       recounted odd residual components match the claim
//   duality        2alpha == gamma - kappa, both recomputed
struct VerificationReport {
  struct Check {
    std::string name;
    bool pass = false;
    std::string detail;  // empty when passing
  };
  std::array<Check, 6> checks;
  bool pass = false;
};

VerificationReport verify_solution(const Instance& inst, const SolutionDoc& doc);

void write_report(std::ostream& out, const VerificationReport& report);

}  // namespace mtflow
