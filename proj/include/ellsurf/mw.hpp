#pragma once

#include <cstdint>
#include <vector>

#include "ellsurf/funcfield.hpp"
#include "ellsurf/tate.hpp"
#include "ellsurf/wmodel.hpp"

namespace ellsurf {

// Finite abelian group Z/n1 x Z/n2 (n1 | n2) with a distinguished
// automorphism given by the images of the two generators.
struct FrobeniusModule {
  std::vector<uint64_t> cyclic_orders;  // [] trivial, [n] cyclic, [n1, n2]
  // frob_images[i] = coordinates of frob(generator i)
  std::vector<std::vector<uint64_t>> frob_images;

  uint64_t order() const;
  bool frob_is_identity() const;
};

// A torsion section on the given model: x, y polynomial coordinates
// with constants in F_{q^m}.
struct SectionWitness {
  RationalFunction x, y;
  uint32_t level = 1;     // m with coordinates over F_{q^m}(t)
  uint64_t order = 1;
};

struct TorsionCertificate {
  FrobeniusModule lower;     // verified subgroup with Frobenius action
  uint64_t upper_bound = 1;  // prime-to-p bound for the geometric torsion
  enum class Status { Exact, Interval } status = Status::Interval;
  std::vector<SectionWitness> witnesses;
  uint32_t searched_level = 1;
};

struct TorsionConfig {
  uint32_t m_max = 4;
  int64_t deg_cap = -1;  // negative: 2 + ceil(deg of minimal discriminant / 6)
  uint64_t combo_cap = 1 << 18;
  uint32_t samples = 6;
  uint64_t max_order = 12;  // largest section order searched per prime power
};

// gcd of good-fiber group orders over the compositum residue fields
// containing F_{q^m}; prime-to-p part.  Upper bound for E(F_{q^m}(t))_tors.
uint64_t torsion_upper_bound(const WeierstrassCurve& E, uint32_t m,
                             uint32_t samples);

// All sections of exact order dividing N with polynomial x of degree
// <= deg_cap over F_{q^m}[t], by specialize/root-list/interpolate with
// exact verification of every survivor.
std::vector<SectionWitness> torsion_sections(const WeierstrassCurve& E,
                                             uint64_t N, uint32_t m,
                                             int64_t deg_cap,
                                             uint64_t combo_cap = 1 << 18);

// Prime-to-p geometric torsion with Frobenius action and a two-sided
// certificate.
TorsionCertificate geometric_torsion(const WeierstrassCurve& E,
                                     const TorsionConfig& cfg = {});

// |(A tensor Z_ell(j))^{Frob} summed over ell != p| = #ker(q^j frob - 1).
uint64_t twisted_invariants(const FrobeniusModule& M, int64_t j, uint64_t q,
                            uint32_t p);

// T_U for U = P^1 minus `removed`; requires removed to contain every bad
// place (UnsupportedU otherwise), in which case T_U = T.
FrobeniusModule torsion_restricted(const WeierstrassCurve& E,
                                   const std::vector<Place>& removed,
                                   const TorsionCertificate& cert);

// ---- function-field point arithmetic on a short model (exposed for
// tests and the section search) ----
struct FFPoint {
  bool inf = true;
  RationalFunction x, y;
};

// curve y^2 = x^3 + A x + B with A, B polynomials over some field
FFPoint ff_neg(const Poly& A, const Poly& B, const FFPoint& P);
FFPoint ff_add(const Poly& A, const Poly& B, const FFPoint& P,
               const FFPoint& Q);
FFPoint ff_mul(const Poly& A, const Poly& B, uint64_t k, const FFPoint& P);
bool ff_on_curve(const Poly& A, const Poly& B, const FFPoint& P);

// division polynomial psi_N as a polynomial in x with coefficients in
// F_q[t]; for even N the returned vector is psi_N / y.
std::vector<Poly> division_polynomial(const Poly& A, const Poly& B,
                                      uint64_t N);

// polynomial square root; false when g is not a square
bool poly_sqrt(const Poly& g, Poly& out);

}  // namespace ellsurf
