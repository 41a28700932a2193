#include <random>

#include "doctest.h"
#include "ellsurf/gf.hpp"

using namespace ellsurf;

TEST_CASE("prime field construction") {
  auto f5 = Field::make(5, 1);
  CHECK(f5->q() == 5);
  CHECK(f5->modulus() == std::vector<uint32_t>{0, 1});
  CHECK_THROWS_WITH_AS(Field::make(4, 1), "p = 4", Error);
}

TEST_CASE("canonical modulus for F_25 is u^2+u+1") {
  // u^2+u+1 has no root mod 5, and (0,*) and (1,0) tuples all fail first
  auto f25 = Field::make(5, 2);
  CHECK(f25->modulus() == std::vector<uint32_t>{1, 1, 1});
  CHECK(f25->q() == 25);
}

TEST_CASE("basic arithmetic in small prime fields") {
  auto f5 = Field::make(5, 1);
  CHECK(f5->add(2, 4) == 1);
  CHECK(f5->pow(2, 4) == 1);  // Fermat
  auto f7 = Field::make(7, 1);
  CHECK(f7->inv(3) == 5);
  CHECK_THROWS_AS(f5->inv(0), Error);
}

TEST_CASE("field axioms hold on random triples") {
  std::mt19937_64 rng(12345);
  for (uint32_t n : {1u, 2u, 3u}) {
    auto f = Field::make(5, n);
    std::uniform_int_distribution<Elt> pick(0, f->q() - 1);
    for (int iter = 0; iter < 2000; ++iter) {
      Elt a = pick(rng), b = pick(rng), c = pick(rng);
      CHECK(f->add(f->add(a, b), c) == f->add(a, f->add(b, c)));
      CHECK(f->mul(a, f->add(b, c)) == f->add(f->mul(a, b), f->mul(a, c)));
      CHECK(f->mul(f->mul(a, b), c) == f->mul(a, f->mul(b, c)));
      if (a) CHECK(f->mul(a, f->inv(a)) == 1);
      CHECK(f->pow(a, f->q()) == a);  // x^{p^n} = x
    }
  }
}

TEST_CASE("frobenius fixes prime field and has order n") {
  auto f = Field::make(5, 4);
  for (Elt c = 0; c < 5; ++c) CHECK(f->frobenius(c) == c);
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<Elt> pick(0, f->q() - 1);
  for (int i = 0; i < 50; ++i) {
    Elt a = pick(rng);
    Elt x = a;
    for (uint32_t k = 0; k < 4; ++k) x = f->frobenius(x);
    CHECK(x == a);
  }
}

TEST_CASE("quadratic character and square roots") {
  auto f5 = Field::make(5, 1);
  CHECK(f5->chi(4) == 1);   // 4 = 2^2
  CHECK(f5->chi(2) == -1);  // 2 is a non-residue mod 5
  CHECK(f5->chi(0) == 0);
  auto f49 = Field::make(7, 2);
  int squares = 0;
  for (Elt a = 0; a < f49->q(); ++a) {
    Elt r;
    if (f49->sqrt(a, r)) {
      CHECK(f49->mul(r, r) == a);
      ++squares;
    }
  }
  CHECK(squares == 1 + (49 - 1) / 2);
}

TEST_CASE("polynomial division and gcd") {
  auto f5 = Field::make(5, 1);
  Poly a = Poly::from_ints(f5, {1, 0, 1});   // t^2+1
  Poly b = Poly::from_ints(f5, {2, 1});      // t+2
  Poly q, r;
  Poly::divrem(a, b, q, r);
  CHECK(q * b + r == a);
  CHECK(r.deg() < b.deg());
  Poly g = gcd(a * b, b);
  CHECK(g == b.monic());
}

TEST_CASE("factor t^2+1 over F_5") {
  auto f5 = Field::make(5, 1);
  Poly f = Poly::from_ints(f5, {1, 0, 1});
  auto factors = poly_factor(f);
  REQUIRE(factors.size() == 2);
  CHECK(factors[0].factor == Poly::from_ints(f5, {2, 1}));
  CHECK(factors[0].multiplicity == 1);
  CHECK(factors[1].factor == Poly::from_ints(f5, {3, 1}));
  CHECK(factors[1].multiplicity == 1);
}

TEST_CASE("factor t^2 over F_5") {
  auto f5 = Field::make(5, 1);
  Poly f = Poly::from_ints(f5, {0, 0, 1});
  auto factors = poly_factor(f);
  REQUIRE(factors.size() == 1);
  CHECK(factors[0].factor == Poly::from_ints(f5, {0, 1}));
  CHECK(factors[0].multiplicity == 2);
}

TEST_CASE("factorization round trip on random polynomials") {
  std::mt19937_64 rng(2024);
  for (uint32_t base : {5u, 7u, 9u}) {
    uint32_t p = base == 9 ? 3 : base;
    uint32_t n = base == 9 ? 2 : 1;
    auto f = Field::make(p, n);
    std::uniform_int_distribution<Elt> pick(0, f->q() - 1);
    for (int iter = 0; iter < 340; ++iter) {
      int d = 1 + static_cast<int>(rng() % 8);
      std::vector<Elt> c(d + 1);
      for (auto& x : c) x = pick(rng);
      c[d] = 1 + pick(rng) % (f->q() - 1);
      Poly poly(f, c);
      auto factors = poly_factor(poly);
      Poly prod = Poly::constant(f, poly.lead());
      for (auto& pf : factors) {
        CHECK(is_irreducible(pf.factor));
        for (uint32_t m = 0; m < pf.multiplicity; ++m) prod = prod * pf.factor;
      }
      CHECK(prod == poly);
      // idempotence on irreducible outputs
      if (!factors.empty()) {
        auto again = poly_factor(factors[0].factor);
        REQUIRE(again.size() == 1);
        CHECK(again[0].factor == factors[0].factor);
        CHECK(again[0].multiplicity == 1);
      }
    }
  }
}

TEST_CASE("irreducibility agrees with exhaustive divisor search, deg <= 4") {
  for (uint32_t base : {5u, 7u, 9u}) {
    uint32_t p = base == 9 ? 3 : base;
    uint32_t n = base == 9 ? 2 : 1;
    auto f = Field::make(p, n);
    uint64_t q = f->q();
    std::mt19937_64 rng(7 + base);
    for (int iter = 0; iter < 150; ++iter) {
      int d = 2 + static_cast<int>(rng() % 3);
      std::vector<Elt> c(d + 1);
      for (auto& x : c) x = rng() % q;
      c[d] = 1;
      Poly poly(f, c);
      // brute force: irreducible iff no monic divisor of degree 1..d/2
      bool has_divisor = false;
      for (int dd = 1; dd <= d / 2 && !has_divisor; ++dd) {
        uint64_t total = 1;
        for (int i = 0; i < dd; ++i) total *= q;
        for (uint64_t enc = 0; enc < total && !has_divisor; ++enc) {
          uint64_t e = enc;
          std::vector<Elt> dc(dd + 1);
          for (int i = 0; i < dd; ++i) {
            dc[i] = e % q;
            e /= q;
          }
          dc[dd] = 1;
          if (Poly(f, dc).divides(poly)) has_divisor = true;
        }
      }
      CHECK(is_irreducible(poly) == !has_divisor);
    }
  }
}

TEST_CASE("count of monic irreducible quadratics over F_5 is 10") {
  auto f5 = Field::make(5, 1);
  int count = 0;
  for (Elt c0 = 0; c0 < 5; ++c0)
    for (Elt c1 = 0; c1 < 5; ++c1)
      if (is_irreducible(Poly(f5, {c0, c1, 1}))) ++count;
  CHECK(count == 10);  // (25 - 5) / 2
}

TEST_CASE("explicit modulus validation") {
  CHECK_THROWS_AS(Field::make(5, 2, {0, 0, 1}), Error);  // u^2 reducible
  auto f = Field::make(5, 2, {2, 0, 1});                 // u^2+2 irreducible
  CHECK(f->q() == 25);
  CHECK(f->mul(5, 5) == 3);  // u * u = -2 = 3
}

TEST_CASE("poly roots") {
  auto f5 = Field::make(5, 1);
  Poly f = Poly::from_ints(f5, {1, 0, 1});  // (t+2)(t+3), roots 2 and 3... -2=3, -3=2
  auto roots = poly_roots(f);
  CHECK(roots == std::vector<Elt>{2, 3});
}
