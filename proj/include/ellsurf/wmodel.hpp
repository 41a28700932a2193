#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ellsurf/funcfield.hpp"
#include "ellsurf/gf.hpp"

namespace ellsurf {

// E: y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with a_i in F_q[t].
struct WeierstrassCurve {
  FieldPtr base;
  Poly a1, a2, a3, a4, a6;

  static WeierstrassCurve make(const FieldPtr& base, Poly a1, Poly a2,
                               Poly a3, Poly a4, Poly a6);
  bool operator==(const WeierstrassCurve& o) const;
};

struct CurveInvariants {
  Poly b2, b4, b6, b8, c4, c6, delta;
  RationalFunction j;
};

// Standard formulaire; errors on delta = 0.
CurveInvariants invariants(const WeierstrassCurve& E);

// Substitution x = u^2 x' + r, y = u^3 y' + u^2 s x' + w.  The scale u
// may be any nonzero rational function; the result must again have
// polynomial coefficients (InexactTransform otherwise).
WeierstrassCurve transform(const WeierstrassCurve& E,
                           const RationalFunction& u, const Poly& r,
                           const Poly& s, const Poly& w);

// Integral transform to a1 = a2 = a3 = 0 (valid for p >= 5).
WeierstrassCurve short_form(const WeierstrassCurve& E);

// Chart at infinity: substitute t = 1/s and rescale by u = s^d with
// d = max_i ceil(deg a_i / i), the smallest uniform twist clearing
// denominators.  Coefficients of the result are polynomials in s.
WeierstrassCurve model_at_infinity(const WeierstrassCurve& E);
int64_t infinity_twist_degree(const WeierstrassCurve& E);

// Model minimal and integral at v (short form), with v(Delta_min).
// At the infinite place, the returned model lives in the s-chart.
std::pair<WeierstrassCurve, int64_t> minimal_model_at(
    const WeierstrassCurve& E, const Place& v);

// Places where the minimal model has positive discriminant valuation.
// Deterministic order (finite by coefficients, infinity last).
// IsotrivialOrSmooth when empty.
std::vector<Place> bad_places(const WeierstrassCurve& E);

bool is_isotrivial(const WeierstrassCurve& E);

}  // namespace ellsurf
