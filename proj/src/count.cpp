#include "ellsurf/count.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ellsurf {

Bivariate::Bivariate(FieldPtr f, size_t deg_x, size_t deg_y)
    : f_(std::move(f)),
      c_(deg_x + 1, std::vector<Elt>(deg_y + 1, 0)) {}

namespace {

// number of roots of a univariate polynomial given by coefficient span
uint64_t univariate_root_count(const FieldPtr& f, std::vector<Elt> c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
  uint64_t q = f->q();
  if (c.empty()) return q;  // identically zero
  if (c.size() == 1) return 0;
  if (c.size() == 2) return 1;
  if (c.size() == 3 && f->p() != 2) {
    // a y^2 + b y + c: root count from the discriminant character
    Elt a = c[2], b = c[1], c0 = c[0];
    Elt disc = f->sub(f->mul(b, b), f->mul(f->from_int(4), f->mul(a, c0)));
    return static_cast<uint64_t>(1 + f->chi(disc));
  }
  Poly g(f, c);
  Poly y = Poly::monomial(f, 1, 1);
  Poly r = gcd(pow_mod(y, q, g) - y, g);
  return static_cast<uint64_t>(std::max(r.deg(), 0));
}

}  // namespace

uint64_t count_affine(const Bivariate& eq, uint64_t cap) {
  const auto& f = eq.field();
  if (f->q() > cap) fail(Err::FieldTooLarge, "count_affine cap exceeded");
  uint64_t total = 0;
  size_t dy = eq.deg_y();
  std::vector<Elt> ycoeffs(dy + 1);
  for (Elt x = 0; x < f->q(); ++x) {
    for (size_t j = 0; j <= dy; ++j) {
      Elt acc = 0;
      for (size_t i = eq.deg_x() + 1; i-- > 0;)
        acc = f->add(f->mul(acc, x), eq.get(i, j));
      ycoeffs[j] = acc;
    }
    total += univariate_root_count(f, ycoeffs);
  }
  return total;
}

Elt WeierstrassFiber::b2() const {
  return f->add(f->mul(a1, a1), f->mul(f->from_int(4), a2));
}
Elt WeierstrassFiber::b4() const {
  return f->add(f->mul(f->from_int(2), a4), f->mul(a1, a3));
}
Elt WeierstrassFiber::b6() const {
  return f->add(f->mul(a3, a3), f->mul(f->from_int(4), a6));
}
Elt WeierstrassFiber::b8() const {
  // a1^2 a6 + 4 a2 a6 - a1 a3 a4 + a2 a3^2 - a4^2
  Elt t1 = f->mul(f->mul(a1, a1), a6);
  Elt t2 = f->mul(f->from_int(4), f->mul(a2, a6));
  Elt t3 = f->mul(a1, f->mul(a3, a4));
  Elt t4 = f->mul(a2, f->mul(a3, a3));
  Elt t5 = f->mul(a4, a4);
  return f->sub(f->add(f->add(t1, t2), t4), f->add(t3, t5));
}
Elt WeierstrassFiber::c4() const {
  return f->sub(f->mul(b2(), b2()), f->mul(f->from_int(24), b4()));
}
Elt WeierstrassFiber::disc() const {
  Elt B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
  // -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6
  Elt t1 = f->mul(f->mul(B2, B2), B8);
  Elt t2 = f->mul(f->from_int(8), f->mul(B4, f->mul(B4, B4)));
  Elt t3 = f->mul(f->from_int(27), f->mul(B6, B6));
  Elt t4 = f->mul(f->from_int(9), f->mul(B2, f->mul(B4, B6)));
  return f->sub(t4, f->add(t1, f->add(t2, t3)));
}
std::array<Elt, 4> WeierstrassFiber::rhs_cubic() const {
  Elt inv4 = f->inv(f->from_int(4));
  Elt inv2 = f->inv(f->from_int(2));
  return {f->mul(b6(), inv4), f->mul(b4(), inv2), f->mul(b2(), inv4), 1};
}

bool fiber_on_curve(const WeierstrassFiber& E, const FiberPoint& P) {
  if (P.inf) return true;
  const auto& f = E.f;
  Elt lhs = f->add(f->mul(P.y, P.y),
                   f->add(f->mul(E.a1, f->mul(P.x, P.y)), f->mul(E.a3, P.y)));
  Elt x2 = f->mul(P.x, P.x);
  Elt rhs = f->add(f->mul(x2, P.x),
                   f->add(f->mul(E.a2, x2),
                          f->add(f->mul(E.a4, P.x), E.a6)));
  return lhs == rhs;
}

FiberPoint fiber_neg(const WeierstrassFiber& E, const FiberPoint& P) {
  if (P.inf) return P;
  const auto& f = E.f;
  return {false, P.x,
          f->neg(f->add(P.y, f->add(f->mul(E.a1, P.x), E.a3)))};
}

FiberPoint fiber_add(const WeierstrassFiber& E, const FiberPoint& P,
                     const FiberPoint& Q) {
  const auto& f = E.f;
  if (P.inf) return Q;
  if (Q.inf) return P;
  Elt lambda, nu;
  if (P.x != Q.x) {
    lambda = f->div(f->sub(Q.y, P.y), f->sub(Q.x, P.x));
    nu = f->sub(P.y, f->mul(lambda, P.x));
  } else {
    FiberPoint negP = fiber_neg(E, P);
    if (negP.y == Q.y) return {true, 0, 0};
    // tangent line
    Elt num = f->sub(f->add(f->mul(f->from_int(3), f->mul(P.x, P.x)),
                            f->add(f->mul(f->from_int(2), f->mul(E.a2, P.x)),
                                   E.a4)),
                     f->mul(E.a1, P.y));
    Elt den = f->add(f->mul(f->from_int(2), P.y),
                     f->add(f->mul(E.a1, P.x), E.a3));
    lambda = f->div(num, den);
    nu = f->sub(P.y, f->mul(lambda, P.x));
  }
  Elt x3 = f->sub(f->add(f->mul(lambda, lambda), f->mul(E.a1, lambda)),
                  f->add(E.a2, f->add(P.x, Q.x)));
  Elt y3 = f->neg(f->add(f->mul(f->add(lambda, E.a1), x3), f->add(nu, E.a3)));
  return {false, x3, y3};
}

FiberPoint fiber_mul(const WeierstrassFiber& E, uint64_t k,
                     const FiberPoint& P) {
  FiberPoint r{true, 0, 0}, base = P;
  while (k) {
    if (k & 1) r = fiber_add(E, r, base);
    base = fiber_add(E, base, base);
    k >>= 1;
  }
  return r;
}

namespace {

uint64_t point_order(const WeierstrassFiber& E, const FiberPoint& P,
                     uint64_t group_order) {
  // order of P divides group_order; strip primes
  uint64_t ord = group_order;
  uint64_t m = group_order;
  for (uint64_t d = 2; d * d <= m; ++d) {
    while (m % d == 0) m /= d;
    while (ord % d == 0 && fiber_mul(E, ord / d, P).inf) ord /= d;
  }
  if (m > 1)
    while (ord % m == 0 && fiber_mul(E, ord / m, P).inf) ord /= m;
  return ord;
}

}  // namespace

EllipticCount count_elliptic(const WeierstrassFiber& E, uint64_t cap) {
  const auto& f = E.f;
  if (E.disc() == 0) fail(Err::SingularInput, "singular Weierstrass equation");
  if (f->q() > cap) fail(Err::FieldTooLarge, "count_elliptic cap exceeded");
  uint64_t q = f->q();

  // affine count: enumerate x, count y-roots of the quadratic in y
  uint64_t affine = 0;
  std::vector<FiberPoint> pts;
  bool collect = q <= 20000;
  for (Elt x = 0; x < q; ++x) {
    // y^2 + (a1 x + a3) y - (x^3 + a2 x^2 + a4 x + a6) = 0
    Elt b = f->add(f->mul(E.a1, x), E.a3);
    Elt x2 = f->mul(x, x);
    Elt c = f->neg(f->add(f->mul(x2, x),
                          f->add(f->mul(E.a2, x2),
                                 f->add(f->mul(E.a4, x), E.a6))));
    if (f->p() == 2) {
      for (Elt y = 0; y < q; ++y) {
        Elt v = f->add(f->mul(y, y), f->add(f->mul(b, y), c));
        if (v == 0) {
          ++affine;
          if (collect) pts.push_back({false, x, y});
        }
      }
      continue;
    }
    Elt disc = f->sub(f->mul(b, b), f->mul(f->from_int(4), c));
    int ch = f->chi(disc);
    affine += 1 + ch;
    if (collect && ch >= 0) {
      Elt s;
      f->sqrt(disc, s);
      Elt inv2 = f->inv(f->from_int(2));
      Elt y1 = f->mul(f->sub(s, b), inv2);
      pts.push_back({false, x, y1});
      if (ch == 1) pts.push_back({false, x, f->mul(f->sub(f->neg(s), b), inv2)});
    }
  }
  uint64_t order = affine + 1;

  double rt = 2.0 * std::sqrt(static_cast<double>(q));
  if (!(std::llabs(static_cast<long long>(order) -
                   static_cast<long long>(q + 1)) <=
        static_cast<long long>(rt) + 1))
    fail(Err::InternalError, "Hasse bound violated");

  GroupStructure st;
  if (collect) {
    uint64_t exponent = 1;
    for (const auto& P : pts)
      exponent = std::lcm(exponent, point_order(E, P, order));
    st.n2 = exponent;
    st.n1 = order / exponent;
    if (st.n1 * st.n2 != order || st.n2 % st.n1 != 0)
      fail(Err::InternalError, "group structure inconsistent");
  } else {
    st.n1 = 1;
    st.n2 = order;
  }
  return {order, st};
}

SingularCount count_singular_weierstrass(const WeierstrassFiber& E,
                                         uint64_t cap) {
  const auto& f = E.f;
  if (E.disc() != 0) fail(Err::NonsingularInput, "fiber is nonsingular");
  if (f->q() > cap) fail(Err::FieldTooLarge, "count cap exceeded");
  if (f->p() == 2) fail(Err::UnsupportedCharacteristic, "char 2");
  uint64_t q = f->q();

  // complete the square: y^2 = cubic(x), singular point on y = 0
  auto cubic = E.rhs_cubic();
  auto eval_cubic = [&](Elt x) {
    Elt r = 0;
    for (size_t i = 4; i-- > 0;) r = f->add(f->mul(r, x), cubic[i]);
    return r;
  };
  // derivative 3x^2 + 2 c2 x + c1
  auto eval_deriv = [&](Elt x) {
    Elt r = f->mul(f->from_int(3), f->mul(x, x));
    r = f->add(r, f->mul(f->from_int(2), f->mul(cubic[2], x)));
    return f->add(r, cubic[1]);
  };
  // find the singular x0 (double/triple root of the cubic)
  bool found = false;
  Elt x0 = 0;
  for (Elt x = 0; x < q; ++x)
    if (eval_cubic(x) == 0 && eval_deriv(x) == 0) {
      x0 = x;
      found = true;
      break;
    }
  if (!found)
    fail(Err::InternalError, "no rational singular point on reduced fiber");

  // shift: cubic(x + x0) = x^2 (x + c) with c = sum of roots shift
  // tangent cone y^2 = c * x^2 -> node iff c != 0, split iff c is a square
  Elt c = f->add(f->mul(f->from_int(3), x0), cubic[2]);
  SingularKind kind;
  if (c == 0)
    kind = SingularKind::Cusp;
  else
    kind = f->chi(c) == 1 ? SingularKind::NodeSplit : SingularKind::NodeNonsplit;

  // smooth-locus count by enumeration: affine points except (x0, 0),
  // plus the point at infinity (always smooth on a Weierstrass cubic)
  uint64_t smooth = 1;
  for (Elt x = 0; x < q; ++x) {
    Elt v = eval_cubic(x);
    int ch = f->chi(v);
    uint64_t here = static_cast<uint64_t>(1 + ch);
    if (x == x0) here -= 1;  // remove the singular point (y = 0 there)
    smooth += here;
  }
  return {smooth, kind};
}

int64_t trace_power(int64_t a, uint64_t q, uint32_t m) {
  // s_0 = 2, s_1 = a, s_k = a s_{k-1} - q s_{k-2}
  __int128 s0 = 2, s1 = a;
  if (m == 0) return 2;
  for (uint32_t k = 2; k <= m; ++k) {
    __int128 s2 = (__int128)a * s1 - (__int128)q * s0;
    s0 = s1;
    s1 = s2;
  }
  return static_cast<int64_t>(s1);
}

int64_t count_over_extension(int64_t a, uint64_t q, uint32_t m) {
  __int128 qm = 1;
  for (uint32_t i = 0; i < m; ++i) qm *= q;
  return static_cast<int64_t>(qm + 1 - trace_power(a, q, m));
}

}  // namespace ellsurf
