#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ellsurf/gf.hpp"

namespace ellsurf {

// Abelian group Z/n1 x Z/n2 with n1 | n2.
struct GroupStructure {
  uint64_t n1 = 1;
  uint64_t n2 = 1;
  uint64_t order() const { return n1 * n2; }
};

// Dense bivariate polynomial over a field: coeff(i, j) * x^i * y^j.
class Bivariate {
 public:
  Bivariate(FieldPtr f, size_t deg_x, size_t deg_y);
  void set(size_t i, size_t j, Elt c) { c_[i][j] = c; }
  Elt get(size_t i, size_t j) const { return c_[i][j]; }
  const FieldPtr& field() const { return f_; }
  size_t deg_x() const { return c_.size() - 1; }
  size_t deg_y() const { return c_[0].size() - 1; }

 private:
  FieldPtr f_;
  std::vector<std::vector<Elt>> c_;
};

inline constexpr uint64_t kDefaultCountCap = uint64_t(1) << 20;

// Exact number of affine solutions by exhaustive enumeration over x
// with per-x root counting in y.
uint64_t count_affine(const Bivariate& eq, uint64_t cap = kDefaultCountCap);

// General Weierstrass coefficients over one finite field.
struct WeierstrassFiber {
  FieldPtr f;
  Elt a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;

  Elt b2() const;
  Elt b4() const;
  Elt b6() const;
  Elt b8() const;
  Elt c4() const;
  Elt disc() const;
  // right-hand side after completing the square (p odd): y^2 = quartic-free
  // cubic x^3 + (b2/4) x^2 + (b4/2) x + b6/4
  std::array<Elt, 4> rhs_cubic() const;
};

// Affine point or infinity; group law for the generic Weierstrass form.
struct FiberPoint {
  bool inf = true;
  Elt x = 0, y = 0;
};
bool fiber_on_curve(const WeierstrassFiber& E, const FiberPoint& P);
FiberPoint fiber_neg(const WeierstrassFiber& E, const FiberPoint& P);
FiberPoint fiber_add(const WeierstrassFiber& E, const FiberPoint& P,
                     const FiberPoint& Q);
FiberPoint fiber_mul(const WeierstrassFiber& E, uint64_t k,
                     const FiberPoint& P);

struct EllipticCount {
  uint64_t order = 0;
  GroupStructure structure;
};

// Order by exhaustive affine count plus infinity; Hasse bound asserted.
// Structure by computing element orders.
EllipticCount count_elliptic(const WeierstrassFiber& E,
                             uint64_t cap = kDefaultCountCap);

enum class SingularKind { NodeSplit, NodeNonsplit, Cusp };

struct SingularCount {
  uint64_t smooth_locus_count = 0;
  SingularKind kind = SingularKind::Cusp;
};

// Reduced singular Weierstrass fiber: locate the singular point, classify
// node/cusp and tangent rationality, count smooth points by enumeration.
SingularCount count_singular_weierstrass(const WeierstrassFiber& E,
                                         uint64_t cap = kDefaultCountCap);

// Power sum alpha^m + beta^m for alpha beta = q, alpha + beta = a
// (the trace of Frobenius over the degree-m extension).
int64_t trace_power(int64_t a, uint64_t q, uint32_t m);
// #E(F_{q^m}) = q^m + 1 - trace_power(a, q, m); q^m must fit in int64
int64_t count_over_extension(int64_t a, uint64_t q, uint32_t m);

}  // namespace ellsurf
