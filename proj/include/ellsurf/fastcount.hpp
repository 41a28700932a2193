#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <vector>

#include "ellsurf/gf.hpp"

namespace ellsurf {

// Trace-of-Frobenius source for short Weierstrass fibers y^2 = x^3+Ax+B
// over one tabled field.  Traces depend only on the isomorphism class,
// so results are memoized per (j-invariant, twist class): for j not in
// {0, 1728} the two quadratic twist classes, for j = 0 the sextic and
// for j = 1728 the quartic classes, keyed through discrete logs.
// Character-sum enumeration below a threshold, Shanks-Mestre BSGS above.
class TraceCache {
 public:
  explicit TraceCache(FieldPtr F);

  // trace a with #E(F_q) = q + 1 - a; requires 4A^3 + 27B^2 != 0
  int32_t trace(Elt A, Elt B);

  // process-wide cache per field
  static TraceCache& for_field(const FieldPtr& F);

  uint64_t misses() const { return misses_.load(); }
  uint64_t lookups() const { return lookups_.load(); }

  // direct counts (exposed for cross-validation)
  int64_t trace_by_enumeration(Elt A, Elt B) const;
  int64_t trace_by_bsgs(Elt A, Elt B) const;

 private:
  size_t cell_index(Elt A, Elt B) const;

  FieldPtr F_;
  uint64_t q_ = 0;
  uint64_t enum_threshold_ = 2048;
  std::vector<std::atomic<int32_t>> cells_;
  std::atomic<uint64_t> misses_{0};
  std::atomic<uint64_t> lookups_{0};
};

}  // namespace ellsurf
