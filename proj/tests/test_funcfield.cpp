#include <random>

#include "doctest.h"
#include "ellsurf/funcfield.hpp"

using namespace ellsurf;

namespace {
RationalFunction rf(const FieldPtr& f, std::vector<int64_t> num,
                    std::vector<int64_t> den = {1}) {
  return RationalFunction(Poly::from_ints(f, num), Poly::from_ints(f, den));
}
}  // namespace

TEST_CASE("places of degree 1 over F_5") {
  auto f5 = Field::make(5, 1);
  auto places = places_of_degree(f5, 1);
  REQUIRE(places.size() == 6);
  CHECK(places[0].pi == Poly::from_ints(f5, {0, 1}));  // t
  CHECK(places[1].pi == Poly::from_ints(f5, {1, 1}));  // t+1
  CHECK(places[4].pi == Poly::from_ints(f5, {4, 1}));  // t+4
  CHECK(places[5].infinite);
}

TEST_CASE("10 finite places of degree 2 over F_5") {
  auto f5 = Field::make(5, 1);
  auto places = places_of_degree(f5, 2);
  CHECK(places.size() == 10);
  for (const auto& v : places) {
    CHECK(v.degree == 2);
    CHECK(is_irreducible(v.pi));
    // stored root actually solves pi in the canonical F_25
    const Extension& E = extension_of(f5, 2);
    CHECK(E.eval_poly(v.pi, v.theta) == 0);
  }
}

TEST_CASE("26 places of degree 1 over F_25") {
  auto f25 = Field::make(5, 2);
  CHECK(places_of_degree(f25, 1).size() == 26);
}

TEST_CASE("|places of degree 1| = q + 1") {
  for (auto [p, n] : {std::pair{5u, 1u}, {7u, 1u}, {3u, 2u}, {5u, 2u}}) {
    auto f = Field::make(p, n);
    CHECK(places_of_degree(f, 1).size() == f->q() + 1);
  }
}

TEST_CASE("valuations") {
  auto f5 = Field::make(5, 1);
  // x = t^2 (t - 1) = t^3 - t^2
  auto x = rf(f5, {0, 0, -1, 1});
  auto vt = Place::finite(Poly::from_ints(f5, {0, 1}));
  CHECK(valuation(x, vt) == 2);
  CHECK(valuation(x, Place::infinity(f5)) == -3);
  auto v2 = Place::finite(Poly::from_ints(f5, {2, 1}));
  CHECK(valuation(rf(f5, {1}, {2, 1}), v2) == -1);
  CHECK(valuation(rf(f5, {0}), vt) == kValInfinity);
}

TEST_CASE("residues") {
  auto f5 = Field::make(5, 1);
  auto vt = Place::finite(Poly::from_ints(f5, {0, 1}));
  auto r = residue(rf(f5, {3, 1}), vt);  // t+3 at t=0
  CHECK(r.value == 3);
  CHECK(r.field->q() == 5);

  // t^2 mod t^2+1 is the class of -1 inside F_25
  auto v = Place::finite(Poly::from_ints(f5, {1, 0, 1}));
  auto r2 = residue(rf(f5, {0, 0, 1}), v);
  CHECK(r2.field->q() == 25);
  CHECK(r2.value == r2.field->from_int(-1));

  // (t+1)/t at infinity -> 1
  auto r3 = residue(rf(f5, {1, 1}, {0, 1}), Place::infinity(f5));
  CHECK(r3.value == 1);

  CHECK_THROWS_AS(residue(rf(f5, {1}, {0, 1}), vt), Error);  // pole
}

TEST_CASE("product formula for 100 random rational functions") {
  auto f5 = Field::make(5, 1);
  std::mt19937_64 rng(31337);
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<Elt> nc(1 + rng() % 6), dc(1 + rng() % 6);
    for (auto& c : nc) c = rng() % 5;
    for (auto& c : dc) c = rng() % 5;
    Poly num(f5, nc), den(f5, dc);
    if (num.is_zero() || den.is_zero()) continue;
    RationalFunction x(num, den);
    if (x.is_zero()) continue;
    int64_t total = -(int64_t)x.num().deg() + (int64_t)x.den().deg();
    for (const auto& pf : poly_factor(x.num()))
      total += (int64_t)pf.multiplicity * pf.factor.deg();
    for (const auto& pf : poly_factor(x.den()))
      total -= (int64_t)pf.multiplicity * pf.factor.deg();
    CHECK(total == 0);
  }
}

TEST_CASE("embedding commutes with Frobenius") {
  auto f25 = Field::make(5, 2);
  const Extension& E = extension_of(f25, 3);  // F_25 inside F_{5^6}
  std::mt19937_64 rng(404);
  for (int i = 0; i < 40; ++i) {
    Elt a = rng() % f25->q();
    CHECK(E.embed(f25->pow(a, 25)) == E.frob_q(E.embed(a)));
  }
}

TEST_CASE("residue ring chi matches canonical field chi") {
  auto f5 = Field::make(5, 1);
  auto places = places_of_degree(f5, 3);
  const auto& v = places[2];
  ResidueRing R(v.pi);
  const Extension& E = extension_of(f5, 3);
  std::mt19937_64 rng(55);
  for (int i = 0; i < 25; ++i) {
    std::vector<Elt> c(3);
    for (auto& x : c) x = rng() % 5;
    Poly a(f5, c);
    Elt image = E.eval_poly(a, v.theta);
    CHECK(R.chi(a) == E.ext->chi(image));
  }
}
