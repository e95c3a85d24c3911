#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mtflow {

// Flow values, capacities and cut weights.  Input capacities fit in 32 bits,
// but merged capacities (vertex expansion sums an entire incidence list) and
// certificate weights can exceed them, so everything downstream is 64-bit.
using Value = std::uint64_t;

constexpr Value kMaxCapacity = 0xFFFFFFFFull;

// Internal consistency check that stays active in release builds.  A failure
// means the solver itself is broken, not that the input is bad.
#define MTFLOW_CHECK(cond, msg)                                          \
  do {                                                                   \
    if (!(cond)) throw std::logic_error(std::string("internal: ") + (msg)); \
  } while (0)

}  // namespace mtflow
