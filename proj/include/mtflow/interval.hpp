#pragma once

#include <algorithm>
#include <stdexcept>

#include "mtflow/types.hpp"

namespace mtflow {

// Arithmetic progression {lo, lo+2, ..., hi} of same-parity integers.
// These sets describe which totals an edge can carry in a blocking flow,
// and they are closed under the product below, so two 64-bit endpoints
// represent them exactly.
struct ParityInterval {
  Value lo = 0;
  Value hi = 0;

  bool contains(Value x) const {
    return lo <= x && x <= hi && (((x ^ lo) & 1) == 0);
  }
  bool intersects(const ParityInterval& o) const {
    if (((lo ^ o.lo) & 1) != 0) return false;
    return std::max(lo, o.lo) <= std::min(hi, o.hi);
  }
  bool operator==(const ParityInterval& o) const {
    return lo == o.lo && hi == o.hi;
  }
};

// All totals x1 + x2 - 2y with x1 in a, x2 in b and 0 <= y <= min(x1,x2):
// the y paired units cancel (they turn around below the join vertex), the
// rest continues upward.  The result is again a parity interval.
inline ParityInterval product(const ParityInterval& a, const ParityInterval& b) {
  const Value top = a.hi + b.hi;
  if (a.intersects(b)) return {0, top};
  if (b.lo <= a.hi && a.lo <= b.hi) return {1, top};
  if (b.hi < a.lo) return {a.lo - b.hi, top};
  return {b.lo - a.hi, top};  // a.hi < b.lo
}

// One way of writing x as xa + xb - 2*paired with xa in a, xb in b.
struct ProductWitness {
  Value xa = 0;
  Value xb = 0;
  Value paired = 0;
};

// Inverts product() for a single member in O(1).  The side with the larger
// maximum takes the large role: its share comes out maximal among all valid
// witnesses, which keeps enough headroom on dominating edges for the flow
// assignment to push deferred decrements through (see solver.hpp).
inline ProductWitness split_product(const ParityInterval& a,
                                    const ParityInterval& b, Value x) {
  if (!product(a, b).contains(x))
    throw std::domain_error("split_product: value not in interval product");
  const bool swapped = a.hi > b.hi;
  const ParityInterval& small = swapped ? b : a;
  const ParityInterval& large = swapped ? a : b;
  Value xs, xl, paired;
  if (x <= large.hi - small.hi) {
    // The small side saturates and cancels entirely; what survives upward
    // comes from the large side alone.
    xs = small.hi;
    paired = small.hi;
    xl = x + small.hi;
  } else {
    xs = small.hi;
    xl = large.hi;
    paired = (small.hi + large.hi - x) / 2;
  }
  ProductWitness w;
  w.xa = swapped ? xl : xs;
  w.xb = swapped ? xs : xl;
  w.paired = paired;
  return w;
}

}  // namespace mtflow
