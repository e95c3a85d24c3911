#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mtflow/certificate.hpp"
#include "mtflow/instance.hpp"
#include "mtflow/types.hpp"

namespace mtflow {

// SplitMix64: the fixed generator behind random_instance, chosen so seeds
// stay portable across implementations.  next() follows the published
// constants; bounded() maps a draw to [0, n) by 128-bit multiply-shift.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  std::uint64_t bounded(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

// Parameters for the seeded instance generator.
struct GenParams {
  std::int32_t n = 2;              // vertices, >= 2
  double terminal_fraction = 0.5;  // in (0, 1]; at least 2 terminals
  Value max_cap = 1;               // capacities drawn uniformly from [0, max_cap]
  std::uint64_t seed = 0;
};

// Uniform random recursive tree: vertex i attaches to a uniform vertex < i.
// Fully determined by the seed.
Instance random_instance(const GenParams& params);

// The instance is too big for exhaustive search.
class OracleLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BruteForceResult {
  Value alpha = 0;                // maximum number of routed path units
  std::vector<PairFlow> witness;  // one optimal routing
};

// Reference optimum by exhaustive search over per-pair routing amounts, with
// capacity pruning and an admissible remaining-bottleneck bound.  Refuses
// instances where the product of (1 + path bottleneck) over terminal pairs
// exceeds 10^8 (OracleLimitError).  Shares no code with the solver.
BruteForceResult brute_force(const Instance& inst);

}  // namespace mtflow
