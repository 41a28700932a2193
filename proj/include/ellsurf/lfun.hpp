#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ellsurf/tate.hpp"
#include "ellsurf/wmodel.hpp"

namespace ellsurf {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Integer polynomial in T = q^{-s} with purity-weight metadata.
struct LPolynomial {
  std::vector<BigInt> coeffs{1};  // constant term first, always 1
  uint64_t q = 0;
  int weight = 0;
  std::string label;

  int deg() const;
  BigInt coeff(size_t k) const {
    return k < coeffs.size() ? coeffs[k] : BigInt(0);
  }
  bool is_one() const { return deg() == 0; }
  BigRat eval(const BigRat& T) const;
  LPolynomial operator*(const LPolynomial& o) const;
  // exact division; InternalError if not exact
  LPolynomial div_exact(const LPolynomial& o) const;
  bool operator==(const LPolynomial& o) const { return coeffs == o.coeffs; }
  std::string str() const;
};

LPolynomial lpoly_one(uint64_t q, int weight, std::string label = "");
// 1 - c T^k
LPolynomial lpoly_linear(uint64_t q, const BigInt& c, uint32_t k, int weight,
                         std::string label = "");

// Local Euler factor in T^{deg v} from Tate data (weight 1).
LPolynomial local_factor(const LocalData& data);

// L evaluated at T = q^{-s0}, exact; VanishesAtPoint when zero.
BigRat special_value(const LPolynomial& L, int64_t s0);

// L(T) = (1 - q^{s0} T)^r g(T) with g(q^{-s0}) != 0; returns (r, g(q^{-s0})).
struct LeadingValue {
  uint32_t r = 0;
  BigRat value;
};
LeadingValue leading_coefficient(const LPolynomial& L, int64_t s0);

// Frobenius permutation-module determinant:
// prod over orbits (1 - (q^shift T)^{orbit_size * place_degree}).
struct OrbitEntry {
  uint32_t orbit_size = 1;
  uint32_t place_degree = 1;
};
LPolynomial perm_l(const std::vector<OrbitEntry>& orbits, uint32_t shift,
                   uint64_t q);

// Tate data at every place dividing the global discriminant plus the
// place at infinity (entries may be Good when the model was non-minimal).
struct CurveLocalSweep {
  WeierstrassCurve model;  // global short model
  std::vector<LocalData> special;
  std::vector<LocalData> bad;  // entries of special with f > 0
  int64_t conductor_degree = 0;

  const LocalData* special_at(const Place& v) const;
};
CurveLocalSweep local_sweep(const WeierstrassCurve& E);

struct GlobalLResult {
  LPolynomial L;
  int64_t conductor_degree = 0;
  int64_t N = 0;  // deg L
  int epsilon = 0;
  CurveLocalSweep sweep;
};

// L(E,T) by expanding the Euler product as a power series over places
// of degree <= N + guard; the guard coefficients must vanish.
GlobalLResult global_l(const WeierstrassCurve& E, uint32_t guard = 4);

// Independent recovery: Lefschetz fiber counts over F_{q^n}, n = 1..N,
// Newton identities for the h^2 factor.  Shares only the per-fiber
// trace source with the Euler route.
LPolynomial l_from_lefschetz(const WeierstrassCurve& E,
                             const GlobalLResult& euler);

// Power-sum Lefschetz identity check for n = 1..n_max: the fiberwise
// point sums match the alternating trace of the zeta factors exactly.
bool lefschetz_check(const WeierstrassCurve& E, const GlobalLResult& euler,
                     uint32_t n_max);

struct SurfaceZeta {
  LPolynomial h0, h1, h2, h3, h4;
  bool has_compact = false;
  LPolynomial hc0, hc1, hc2, hc3, hc4;
  std::vector<OrbitEntry> irr0_orbits;  // non-identity components, bad fibers
};

// Zeta factorization of the proper minimal elliptic surface over P^1.
SurfaceZeta assemble_surface_zeta(const WeierstrassCurve& E,
                                  const GlobalLResult& euler);

// Compact-support factors of the surface over U = P^1 minus `removed`.
SurfaceZeta open_surface_l(const WeierstrassCurve& E,
                           const GlobalLResult& euler,
                           const std::vector<Place>& removed);

// (qT)^N L(1/(q^2 T)) = eps L(T); nullopt when the symmetry fails.
std::optional<int> functional_equation_sign(const LPolynomial& L);

// p_n = sum of n-th powers of the reciprocal roots, n = 1..n_max.
std::vector<BigInt> reciprocal_root_power_sums(const LPolynomial& L,
                                               uint32_t n_max);

// max | |alpha| - q^{w/2} | over reciprocal roots, by Durand-Kerner;
// advisory numerical check.
double root_magnitude_deviation(const LPolynomial& L);

}  // namespace ellsurf
