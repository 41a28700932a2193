#include "ellsurf/wmodel.hpp"

#include <algorithm>

namespace ellsurf {

namespace {

Poly ipoly(const FieldPtr& f, int64_t k) {
  return Poly::constant(f, f->from_int(k));
}

Poly iscale(const Poly& a, int64_t k) {
  return a.scaled(a.field()->from_int(k));
}

}  // namespace

WeierstrassCurve WeierstrassCurve::make(const FieldPtr& base, Poly a1,
                                        Poly a2, Poly a3, Poly a4, Poly a6) {
  WeierstrassCurve E{base, std::move(a1), std::move(a2), std::move(a3),
                     std::move(a4), std::move(a6)};
  invariants(E);  // validates delta != 0
  return E;
}

bool WeierstrassCurve::operator==(const WeierstrassCurve& o) const {
  return a1 == o.a1 && a2 == o.a2 && a3 == o.a3 && a4 == o.a4 && a6 == o.a6;
}

CurveInvariants invariants(const WeierstrassCurve& E) {
  const auto& f = E.base;
  CurveInvariants I;
  I.b2 = E.a1 * E.a1 + iscale(E.a2, 4);
  I.b4 = iscale(E.a4, 2) + E.a1 * E.a3;
  I.b6 = E.a3 * E.a3 + iscale(E.a6, 4);
  I.b8 = E.a1 * E.a1 * E.a6 + iscale(E.a2 * E.a6, 4) - E.a1 * E.a3 * E.a4 +
         E.a2 * E.a3 * E.a3 - E.a4 * E.a4;
  I.c4 = I.b2 * I.b2 - iscale(I.b4, 24);
  I.c6 = -(I.b2 * I.b2 * I.b2) + iscale(I.b2 * I.b4, 36) - iscale(I.b6, 216);
  I.delta = -(I.b2 * I.b2 * I.b8) - iscale(I.b4 * I.b4 * I.b4, 8) -
            iscale(I.b6 * I.b6, 27) + iscale(I.b2 * I.b4 * I.b6, 9);
  if (I.delta.is_zero())
    fail(Err::SingularCurve, "discriminant vanishes identically");
  if ((I.c4 * I.c4 * I.c4 - I.c6 * I.c6) != iscale(I.delta, 1728))
    fail(Err::InternalError, "c4^3 - c6^2 != 1728 delta");
  I.j = RationalFunction(I.c4 * I.c4 * I.c4, I.delta);
  (void)f;
  return I;
}

WeierstrassCurve transform(const WeierstrassCurve& E,
                           const RationalFunction& u, const Poly& r,
                           const Poly& s, const Poly& w) {
  if (u.is_zero()) fail(Err::ZeroScaling, "u must be nonzero");
  const auto& f = E.base;
  auto R = [&](const Poly& p) { return RationalFunction(p); };
  RationalFunction u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;

  RationalFunction na1 = (R(E.a1) + R(iscale(s, 2))) / u;
  RationalFunction na2 =
      (R(E.a2) - R(s * E.a1) + R(iscale(r, 3)) - R(s * s)) / u2;
  RationalFunction na3 = (R(E.a3) + R(r * E.a1) + R(iscale(w, 2))) / u3;
  RationalFunction na4 =
      (R(E.a4) - R(s * E.a3) + R(iscale(r * E.a2, 2)) - R((w + r * s) * E.a1) +
       R(iscale(r * r, 3)) - R(iscale(s * w, 2))) /
      u4;
  RationalFunction na6 =
      (R(E.a6) + R(r * E.a4) + R(r * r * E.a2) + R(r * r * r) - R(w * E.a3) -
       R(w * w) - R(r * w * E.a1)) /
      u6;
  for (const auto* x : {&na1, &na2, &na3, &na4, &na6})
    if (!x->is_poly())
      fail(Err::InexactTransform, "transform leaves the polynomial ring");
  return WeierstrassCurve{f, na1.num(), na2.num(), na3.num(), na4.num(),
                          na6.num()};
}

WeierstrassCurve short_form(const WeierstrassCurve& E) {
  const auto& f = E.base;
  if (f->p() < 5)
    fail(Err::UnsupportedCharacteristic, "short form needs p >= 5");
  Elt inv2 = f->inv(f->from_int(2));
  // kill a1, a3: s = -a1/2, w = -a3/2
  Poly s = E.a1.scaled(f->neg(inv2));
  Poly w = E.a3.scaled(f->neg(inv2));
  auto E1 = transform(E, RationalFunction(ipoly(f, 1)), Poly(f), s, w);
  // kill a2: r = -a2/3
  Poly r = E1.a2.scaled(f->neg(f->inv(f->from_int(3))));
  auto E2 = transform(E1, RationalFunction(ipoly(f, 1)), r, Poly(f), Poly(f));
  return E2;
}

int64_t infinity_twist_degree(const WeierstrassCurve& E) {
  int64_t d = 0;
  const Poly* as[5] = {&E.a1, &E.a2, &E.a3, &E.a4, &E.a6};
  const int wt[5] = {1, 2, 3, 4, 6};
  for (int i = 0; i < 5; ++i) {
    if (as[i]->is_zero()) continue;
    int64_t need = (as[i]->deg() + wt[i] - 1) / wt[i];
    d = std::max(d, need);
  }
  return d;
}

WeierstrassCurve model_at_infinity(const WeierstrassCurve& E) {
  int64_t d = infinity_twist_degree(E);
  auto flip = [&](const Poly& a, int weight) {
    // s^{d * weight} * a(1/s)
    if (a.is_zero()) return a;
    return a.reversed().shifted(static_cast<size_t>(d * weight - a.deg()));
  };
  return WeierstrassCurve{E.base, flip(E.a1, 1), flip(E.a2, 2), flip(E.a3, 3),
                          flip(E.a4, 4), flip(E.a6, 6)};
}

std::pair<WeierstrassCurve, int64_t> minimal_model_at(
    const WeierstrassCurve& E, const Place& v) {
  const auto& f = E.base;
  if (f->p() < 5)
    fail(Err::UnsupportedCharacteristic, "minimality loop needs p >= 5");
  if (v.infinite) {
    auto inf_model = model_at_infinity(E);
    Place vs = Place::finite(Poly::from_ints(f, {0, 1}));
    return minimal_model_at(inf_model, vs);
  }
  WeierstrassCurve cur = short_form(E);
  while (true) {
    auto I = invariants(cur);
    int64_t vd = valuation(I.delta, v);
    int64_t vc4 = I.c4.is_zero() ? kValInfinity : valuation(I.c4, v);
    if (vd < 12 || vc4 < 4) return {cur, vd};
    // short form: v(a4) >= 4 and v(a6) >= 6 here, so u = pi is exact
    cur = transform(cur, RationalFunction(v.pi), Poly(f), Poly(f), Poly(f));
  }
}

bool is_isotrivial(const WeierstrassCurve& E) {
  auto I = invariants(E);
  return I.j.is_poly() && I.j.num().deg() <= 0;
}

std::vector<Place> bad_places(const WeierstrassCurve& E) {
  const auto& f = E.base;
  if (f->p() < 5) fail(Err::UnsupportedCharacteristic, "bad_places needs p >= 5");
  auto I = invariants(E);
  std::vector<Place> out;
  for (const auto& pf : poly_factor(I.delta)) {
    Place v = Place::finite(pf.factor);
    auto [model, vd] = minimal_model_at(E, v);
    if (vd > 0) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  Place inf = Place::infinity(f);
  auto [model, vd] = minimal_model_at(E, inf);
  if (vd > 0) out.push_back(inf);
  if (out.empty())
    fail(Err::IsotrivialOrSmooth, "no bad places: structure morphism smooth");
  return out;
}

}  // namespace ellsurf
