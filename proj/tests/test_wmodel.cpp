#include <random>

#include "doctest.h"
#include "ellsurf/wmodel.hpp"

using namespace ellsurf;

namespace {

WeierstrassCurve legendre(const FieldPtr& f5) {
  // y^2 = x (x-1) (x-t) = x^3 - (1+t) x^2 + t x
  return WeierstrassCurve::make(f5, Poly(f5), Poly::from_ints(f5, {-1, -1}),
                                Poly(f5), Poly::from_ints(f5, {0, 1}),
                                Poly(f5));
}

WeierstrassCurve short_curve(const FieldPtr& f, std::vector<int64_t> a4,
                             std::vector<int64_t> a6) {
  return WeierstrassCurve::make(f, Poly(f), Poly(f), Poly(f),
                                Poly::from_ints(f, a4),
                                Poly::from_ints(f, a6));
}

}  // namespace

TEST_CASE("invariants of a constant curve y^2 = x^3 + x") {
  auto f5 = Field::make(5, 1);
  auto E = short_curve(f5, {1}, {0});
  auto I = invariants(E);
  CHECK(I.c6.is_zero());
  CHECK(I.j == RationalFunction(Poly::from_ints(f5, {1728})));
}

TEST_CASE("Legendre invariants over F_5") {
  auto f5 = Field::make(5, 1);
  auto E = legendre(f5);
  auto I = invariants(E);
  // delta = 16 t^2 (t-1)^2
  Poly expect = Poly::from_ints(f5, {0, 0, 16}) *
                Poly::from_ints(f5, {-1, 1}) * Poly::from_ints(f5, {-1, 1});
  CHECK(I.delta == expect);
  // j = 256 (t^2 - t + 1)^3 / (t^2 (t-1)^2)
  Poly num = Poly::from_ints(f5, {1, -1, 1});
  num = num * num * num;
  num = num.scaled(f5->from_int(256));
  Poly den = Poly::from_ints(f5, {0, 0, 1}) * Poly::from_ints(f5, {1, -2, 1});
  CHECK(I.j == RationalFunction(num, den));
  CHECK((I.c4 * I.c4 * I.c4 - I.c6 * I.c6) == I.delta.scaled(f5->from_int(1728)));
}

TEST_CASE("j = 0 for y^2 = x^3 + t, delta = -432 t^2") {
  auto f5 = Field::make(5, 1);
  auto E = short_curve(f5, {}, {0, 1});
  auto I = invariants(E);
  CHECK(I.c4.is_zero());
  CHECK(I.delta == Poly::from_ints(f5, {0, 0, -432}));
  CHECK(I.j.is_zero());
}

TEST_CASE("singular curve rejected") {
  auto f5 = Field::make(5, 1);
  CHECK_THROWS_AS(short_curve(f5, {}, {}), Error);
}

TEST_CASE("identity transform") {
  auto f5 = Field::make(5, 1);
  auto E = legendre(f5);
  auto E2 = transform(E, RationalFunction(Poly::from_ints(f5, {1})), Poly(f5),
                      Poly(f5), Poly(f5));
  CHECK(E2 == E);
}

TEST_CASE("scaling law: delta scales by u^-12, c4 by u^-4, j fixed") {
  auto f5 = Field::make(5, 1);
  auto E = legendre(f5);
  // blow the model up by u = 1/t (coefficients pick up t^i), then undo
  RationalFunction t(Poly::from_ints(f5, {0, 1}));
  RationalFunction tinv = RationalFunction(Poly::from_ints(f5, {1})) / t;
  auto Eup = transform(E, tinv, Poly(f5), Poly(f5), Poly(f5));
  auto Iup = invariants(Eup);
  auto I = invariants(E);
  Poly t12 = Poly::monomial(f5, 1, 12);
  CHECK(Iup.delta == I.delta * t12);
  CHECK(Iup.c4 == I.c4 * Poly::monomial(f5, 1, 4));
  CHECK(Iup.j == I.j);
  // and dividing back by u = t recovers E exactly
  auto Edown = transform(Eup, t, Poly(f5), Poly(f5), Poly(f5));
  CHECK(Edown == E);
}

TEST_CASE("random transform then inverse returns the original curve") {
  auto f5 = Field::make(5, 1);
  auto E = legendre(f5);
  std::mt19937_64 rng(2718);
  for (int iter = 0; iter < 500; ++iter) {
    Elt uc = 1 + rng() % 4;
    std::vector<Elt> rc(1 + rng() % 3), sc(1 + rng() % 3), wc(1 + rng() % 3);
    for (auto& c : rc) c = rng() % 5;
    for (auto& c : sc) c = rng() % 5;
    for (auto& c : wc) c = rng() % 5;
    Poly r(f5, rc), s(f5, sc), w(f5, wc);
    RationalFunction u(Poly::constant(f5, uc));
    auto E2 = transform(E, u, r, s, w);
    CHECK(invariants(E2).j == invariants(E).j);
    // inverse: (1/u, -r/u^2, -s/u, (rs - w)/u^3)
    Elt ui = f5->inv(uc);
    Elt ui2 = f5->mul(ui, ui);
    Elt ui3 = f5->mul(ui2, ui);
    auto E3 = transform(E2, RationalFunction(Poly::constant(f5, ui)),
                        (-r).scaled(ui2), (-s).scaled(ui),
                        (r * s - w).scaled(ui3));
    CHECK(E3 == E);
  }
}

TEST_CASE("model at infinity") {
  auto f5 = Field::make(5, 1);
  // Legendre: bad at s = 0 with v(delta) = 8
  auto E = legendre(f5);
  CHECK(infinity_twist_degree(E) == 1);
  auto [Emin, vd] = minimal_model_at(E, Place::infinity(f5));
  CHECK(vd == 8);

  // constant curve: good at infinity, d = 0
  auto C = short_curve(f5, {1}, {0});
  CHECK(infinity_twist_degree(C) == 0);

  // y^2 = x^3 + t^6: d = ceil(6/6) = 1
  auto D = short_curve(f5, {}, {0, 0, 0, 0, 0, 0, 1});
  CHECK(infinity_twist_degree(D) == 1);
}

TEST_CASE("minimal model at a finite place") {
  auto f5 = Field::make(5, 1);
  Place vt = Place::finite(Poly::from_ints(f5, {0, 1}));

  // Legendre is already minimal at (t) with v(delta) = 2
  auto E = legendre(f5);
  auto [E1, v1] = minimal_model_at(E, vt);
  CHECK(v1 == 2);

  // y^2 = x^3 + t^4 x + t^6: delta = -16 t^12 (4 + 27), one rescale
  auto F = short_curve(f5, {0, 0, 0, 0, 1}, {0, 0, 0, 0, 0, 0, 1});
  auto I = invariants(F);
  CHECK(valuation(I.delta, vt) == 12);
  auto [F1, v2] = minimal_model_at(F, vt);
  CHECK(v2 == 0);

  // v(delta) = 3 < 12 stays put: delta = -16(4t^3 + 27t^4)
  auto G = short_curve(f5, {0, 1}, {0, 0, 1});
  auto [G1, v3] = minimal_model_at(G, vt);
  CHECK(v3 == 3);
}

TEST_CASE("minimal discriminant valuation is transform invariant") {
  auto f5 = Field::make(5, 1);
  auto E = legendre(f5);
  Place vt = Place::finite(Poly::from_ints(f5, {0, 1}));
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 20; ++iter) {
    Elt uc = 1 + rng() % 4;
    Poly r = Poly::from_ints(f5, {(int64_t)(rng() % 5), (int64_t)(rng() % 5)});
    auto E2 = transform(E, RationalFunction(Poly::constant(f5, uc)), r,
                        Poly(f5), Poly(f5));
    auto [m1, v1] = minimal_model_at(E, vt);
    auto [m2, v2] = minimal_model_at(E2, vt);
    CHECK(v1 == v2);
    // idempotence
    auto [m3, v3] = minimal_model_at(m2, vt);
    CHECK(v3 == v2);
  }
}

TEST_CASE("bad places") {
  auto f5 = Field::make(5, 1);
  auto E = legendre(f5);
  auto bad = bad_places(E);
  REQUIRE(bad.size() == 3);
  CHECK(bad[0].pi == Poly::from_ints(f5, {0, 1}));   // t
  CHECK(bad[1].pi == Poly::from_ints(f5, {-1, 1}));  // t - 1
  CHECK(bad[2].infinite);

  // constant curve: smooth everywhere
  CHECK_THROWS_AS(bad_places(short_curve(f5, {1}, {0})), Error);

  // y^2 = x^3 + t: bad at (t) and infinity
  auto D = short_curve(f5, {}, {0, 1});
  auto bd = bad_places(D);
  REQUIRE(bd.size() == 2);
  CHECK(bd[0].pi == Poly::from_ints(f5, {0, 1}));
  CHECK(bd[1].infinite);
}

TEST_CASE("bad places invariant under constant rescale") {
  auto f5 = Field::make(5, 1);
  auto E = legendre(f5);
  auto b1 = bad_places(E);
  auto E2 = transform(E, RationalFunction(Poly::constant(f5, 3)), Poly(f5),
                      Poly(f5), Poly(f5));
  auto b2 = bad_places(E2);
  CHECK(b1 == b2);
}
