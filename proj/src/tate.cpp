#include "ellsurf/tate.hpp"

#include <algorithm>
#include <numeric>

#include "ellsurf/count.hpp"
#include "ellsurf/fastcount.hpp"

namespace ellsurf {

uint32_t KodairaType::components() const {
  switch (sym) {
    case KodairaSymbol::I0: return 1;
    case KodairaSymbol::In: return n;
    case KodairaSymbol::II: return 1;
    case KodairaSymbol::III: return 2;
    case KodairaSymbol::IV: return 3;
    case KodairaSymbol::I0star: return 5;
    case KodairaSymbol::Instar: return n + 5;
    case KodairaSymbol::IVstar: return 7;
    case KodairaSymbol::IIIstar: return 8;
    case KodairaSymbol::IIstar: return 9;
  }
  return 0;
}

std::string KodairaType::str() const {
  switch (sym) {
    case KodairaSymbol::I0: return "I0";
    case KodairaSymbol::In: return "I" + std::to_string(n);
    case KodairaSymbol::II: return "II";
    case KodairaSymbol::III: return "III";
    case KodairaSymbol::IV: return "IV";
    case KodairaSymbol::I0star: return "I0*";
    case KodairaSymbol::Instar: return "I" + std::to_string(n) + "*";
    case KodairaSymbol::IVstar: return "IV*";
    case KodairaSymbol::IIIstar: return "III*";
    case KodairaSymbol::IIstar: return "II*";
  }
  return "?";
}

namespace {

// ---- minimal polynomial arithmetic over kappa = F_q[t]/(pi) ----
// Only what the cubic root count needs: elements are reduced Polys.

struct KElem {
  Poly v;
};

struct KCubicCtx {
  const ResidueRing& R;

  KElem reduce(const Poly& p) const { return {R.reduce(p)}; }
  KElem add(const KElem& a, const KElem& b) const { return {R.add(a.v, b.v)}; }
  KElem mul(const KElem& a, const KElem& b) const { return {R.mul(a.v, b.v)}; }
  bool zero(const KElem& a) const { return a.v.is_zero(); }
};

using KVec = std::vector<Poly>;  // polynomial over kappa, low-to-high

KVec kv_trim(KVec a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
  return a;
}

KVec kv_mul(const ResidueRing& R, const KVec& a, const KVec& b) {
  if (a.empty() || b.empty()) return {};
  KVec out(a.size() + b.size() - 1, Poly(R.base()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      out[i + j] = R.add(out[i + j], R.mul(a[i], b[j]));
  return kv_trim(std::move(out));
}

// remainder of a by monic b (in kappa[T])
KVec kv_mod(const ResidueRing& R, KVec a, const KVec& b) {
  a = kv_trim(std::move(a));
  while (a.size() >= b.size()) {
    Poly c = a.back();
    size_t shift = a.size() - b.size();
    for (size_t j = 0; j < b.size(); ++j)
      a[shift + j] = R.reduce(a[shift + j] - R.mul(c, b[j]));
    a = kv_trim(std::move(a));
  }
  return a;
}

// number of roots of the monic separable cubic T^3 + cT + d in kappa,
// via deg gcd(T^Q - T, P) computed as T^Q mod P
uint32_t cubic_root_count(const ResidueRing& R, const Poly& c, const Poly& d) {
  const auto& base = R.base();
  KVec P = {R.reduce(d), R.reduce(c), Poly(base), Poly::constant(base, 1)};
  // T^Q mod P by square and multiply
  unsigned __int128 e = R.card();
  KVec acc = {Poly::constant(base, 1)};
  KVec t = {Poly(base), Poly::constant(base, 1)};
  t = kv_mod(R, t, P);
  while (e) {
    if (e & 1) acc = kv_mod(R, kv_mul(R, acc, t), P);
    t = kv_mod(R, kv_mul(R, t, t), P);
    e >>= 1;
  }
  // gcd(acc - T, P) over kappa[T]
  KVec diff = acc;
  if (diff.size() < 2) diff.resize(2, Poly(base));
  diff[1] = R.reduce(diff[1] - Poly::constant(base, 1));
  diff = kv_trim(std::move(diff));
  KVec x = P, y = diff;
  while (!y.empty()) {
    // make y monic
    Poly inv_lead = R.inv(y.back());
    for (auto& coeff : y) coeff = R.mul(coeff, inv_lead);
    KVec r = kv_mod(R, x, y);
    x = y;
    y = r;
  }
  return static_cast<uint32_t>(x.size() - 1);
}

// orbit sizes from an explicit permutation, orbit containing 0 first
void orbits_from_perm(LocalData& d) {
  const auto& perm = d.component_perm;
  std::vector<bool> seen(perm.size(), false);
  d.orbit_sizes.clear();
  d.orbit_sizes_nonid.clear();
  for (uint32_t start = 0; start < perm.size(); ++start) {
    if (seen[start]) continue;
    uint32_t len = 0, cur = start;
    do {
      seen[cur] = true;
      ++len;
      cur = perm[cur];
    } while (cur != start);
    d.orbit_sizes.push_back(len);
    if (start != 0) d.orbit_sizes_nonid.push_back(len);
  }
}

std::vector<uint32_t> identity_perm(uint32_t m) {
  std::vector<uint32_t> p(m);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

int64_t poly_val(const Poly& a, const Place& v) {
  return a.is_zero() ? kValInfinity : valuation(a, v);
}

// a / pi^k, exact
Poly shift_down(const Poly& a, const Place& v, int64_t k) {
  Poly cur = a;
  for (int64_t i = 0; i < k; ++i) cur = cur / v.pi;
  return cur;
}

// residue of a / pi^k at v, as a reduced polynomial
Poly digit(const Poly& a, const Place& v, int64_t k) {
  return shift_down(a, v, k) % v.pi;
}

}  // namespace

LocalData tate_local(const WeierstrassCurve& E, const Place& v) {
  const auto& base = E.base;
  if (base->p() < 5)
    fail(Err::UnsupportedCharacteristic, "Tate loop supports p >= 5 only");
  if (v.infinite) {
    auto inf_model = model_at_infinity(E);
    Place vs = Place::finite(Poly::from_ints(base, {0, 1}));
    LocalData d = tate_local(inf_model, vs);
    d.place = v;
    return d;
  }

  auto [model, vd] = minimal_model_at(E, v);  // short form, minimal at v
  const Poly& A = model.a4;
  const Poly& B = model.a6;

  LocalData d;
  d.place = v;
  d.q_base = base->q();
  d.v_delta_min = vd;

  if (vd == 0) {
    d.kodaira = {KodairaSymbol::I0, 0};
    d.reduction = ReductionClass::Good;
    d.conductor_exponent = 0;
    d.component_perm = identity_perm(1);
    orbits_from_perm(d);
    // Frobenius trace over kappa(v) through the canonical residue field
    const Extension& X = extension_of(base, v.degree);
    Elt theta = v.theta;
    if (!v.has_theta) {
      std::vector<Elt> lifted(v.pi.coeffs().size());
      for (size_t i = 0; i < lifted.size(); ++i)
        lifted[i] = X.embed(v.pi.coeff(i));
      auto roots = poly_roots(Poly(X.ext, lifted));
      if (roots.empty()) fail(Err::InternalError, "no residue root");
      theta = roots.front();
    }
    Elt Ar = X.eval_poly(A, theta), Br = X.eval_poly(B, theta);
    if (X.ext->tabled() && X.ext->p() >= 5) {
      d.trace = TraceCache::for_field(X.ext).trace(Ar, Br);
    } else {
      WeierstrassFiber fib{X.ext, 0, 0, 0, Ar, Br};
      d.trace =
          static_cast<int64_t>(X.ext->q()) + 1 -
          static_cast<int64_t>(count_elliptic(fib, max_field_cardinality()).order);
    }
    return d;
  }

  ResidueRing R(v.pi);
  int64_t vA = poly_val(A, v);
  int64_t vB = poly_val(B, v);
  uint32_t m_components = 0;  // filled per case

  if (vA == 0) {
    // multiplicative: I_n with n = v(delta)
    d.kodaira = {KodairaSymbol::In, static_cast<uint32_t>(vd)};
    d.conductor_exponent = 1;
    uint32_t n = d.kodaira.n;
    // node of x^3 + Ax + B mod pi: double root e = -3B/(2A); the fiber is
    // split iff 3e is a square in kappa
    Poly Abar = digit(A, v, 0), Bbar = digit(B, v, 0);
    Poly e = R.mul(R.mul(Bbar.scaled(base->from_int(-3)), R.inv(Abar)),
                   Poly::constant(base, base->inv(base->from_int(2))));
    Poly te = R.reduce(e.scaled(base->from_int(3)));
    int ch = R.chi(te);
    if (ch == 0) fail(Err::InternalError, "degenerate node");
    if (ch == 1) {
      d.reduction = ReductionClass::SplitMult;
      d.component_perm = identity_perm(n);
    } else {
      d.reduction = ReductionClass::NonsplitMult;
      std::vector<uint32_t> perm(n);
      for (uint32_t i = 0; i < n; ++i) perm[i] = (n - i) % n;
      d.component_perm = perm;
    }
    orbits_from_perm(d);
    return d;
  }

  // additive
  d.reduction = ReductionClass::Additive;
  d.conductor_exponent = 2;
  switch (vd) {
    case 2:
      d.kodaira = {KodairaSymbol::II, 0};
      d.component_perm = identity_perm(1);
      break;
    case 3:
      d.kodaira = {KodairaSymbol::III, 0};
      d.component_perm = identity_perm(2);
      break;
    case 4: {
      d.kodaira = {KodairaSymbol::IV, 0};
      // the two non-identity components are the roots of Y^2 = a6/pi^2
      int ch = R.chi(digit(B, v, 2));
      if (ch == 0) fail(Err::InternalError, "IV quadratic degenerate");
      d.component_perm = identity_perm(3);
      if (ch == -1) std::swap(d.component_perm[1], d.component_perm[2]);
      break;
    }
    case 6: {
      d.kodaira = {KodairaSymbol::I0star, 0};
      // arms 2..4 follow the roots of P(T) = T^3 + (A/pi^2) T + B/pi^3
      uint32_t roots = cubic_root_count(R, digit(A, v, 2), digit(B, v, 3));
      // labels: 0 identity arm, 1 central component, 2..4 the P-arms
      d.component_perm = identity_perm(5);
      if (roots == 1) {
        std::swap(d.component_perm[3], d.component_perm[4]);
      } else if (roots == 0) {
        d.component_perm[2] = 3;
        d.component_perm[3] = 4;
        d.component_perm[4] = 2;
      }
      break;
    }
    case 8:
      if (vA >= 3) {
        d.kodaira = {KodairaSymbol::IVstar, 0};
        // outer legs follow the roots of Y^2 = a6/pi^4; labels:
        // 0 id simple, 1 id-leg double, 2 center, 3/4 leg B, 5/6 leg C
        int ch = R.chi(digit(B, v, 4));
        if (ch == 0) fail(Err::InternalError, "IV* quadratic degenerate");
        d.component_perm = identity_perm(7);
        if (ch == -1) {
          std::swap(d.component_perm[3], d.component_perm[5]);
          std::swap(d.component_perm[4], d.component_perm[6]);
        }
        break;
      }
      [[fallthrough]];
    case 7:
    case 11:
    default: {
      if (vA == 2 && vd >= 7) {
        // I_n*, n = v(delta) - 6; walk the subloop to find the terminal
        // quadratic whose roots are the two far components
        uint32_t n = static_cast<uint32_t>(vd - 6);
        d.kodaira = {KodairaSymbol::Instar, n};
        // translate the double root of P to zero
        Poly Abar2 = digit(A, v, 2), Bbar3 = digit(B, v, 3);
        Poly e = R.mul(R.mul(Bbar3.scaled(base->from_int(-3)), R.inv(Abar2)),
                       Poly::constant(base, base->inv(base->from_int(2))));
        WeierstrassCurve cur = transform(model, RationalFunction(Poly::constant(base, 1)),
                                         e * v.pi, Poly(base), Poly(base));
        bool swap_far = false;
        uint32_t nu = 1;
        for (;; ++nu) {
          if (nu > n) fail(Err::InternalError, "I_n* subloop overran");
          if (nu & 1) {
            // odd stage: quadratic Y^2 = a6 / pi^{2m}, m = (nu+3)/2
            int64_t m = (nu + 3) / 2;
            if (poly_val(cur.a6, v) == 2 * m) {
              int ch = R.chi(digit(cur.a6, v, 2 * m));
              swap_far = ch == -1;
              break;
            }
          } else {
            // even stage: a_{2,1} X^2 + a_{4,m} X + a_{6,2m-1}, m = nu/2+2
            int64_t m = nu / 2 + 2;
            Poly a21 = digit(cur.a2, v, 1);
            Poly a4m = digit(cur.a4, v, m);
            Poly a6m = digit(cur.a6, v, 2 * m - 1);
            Poly D = R.reduce(R.mul(a4m, a4m) -
                              R.mul(a21, a6m).scaled(base->from_int(4)));
            if (!D.is_zero()) {
              swap_far = R.chi(D) == -1;
              break;
            }
            // translate x by pi^{m-1} * root, root = -a4m / (2 a21)
            Poly root = R.mul(a4m.scaled(base->neg(base->inv(base->from_int(2)))),
                              R.inv(a21));
            Poly shift = root;
            for (int64_t i = 0; i < m - 1; ++i) shift = shift * v.pi;
            cur = transform(cur, RationalFunction(Poly::constant(base, 1)),
                            shift, Poly(base), Poly(base));
          }
          if (nu == n)
            fail(Err::InternalError, "I_n* subloop failed to terminate");
        }
        if (nu != n) fail(Err::InternalError, "I_n* index mismatch");
        // labels: 0 id arm, 1 near mate, 2..n+2 chain, n+3/n+4 far pair
        d.component_perm = identity_perm(n + 5);
        if (swap_far) std::swap(d.component_perm[n + 3], d.component_perm[n + 4]);
        break;
      }
      if (vd == 9) {
        d.kodaira = {KodairaSymbol::IIIstar, 0};
        d.component_perm = identity_perm(8);
        break;
      }
      if (vd == 10) {
        d.kodaira = {KodairaSymbol::IIstar, 0};
        d.component_perm = identity_perm(9);
        break;
      }
      fail(Err::InternalError,
           "unclassified fiber: v(delta)=" + std::to_string(vd) +
               " v(c4)=" + std::to_string(vA));
    }
  }
  m_components = d.kodaira.components();
  if (d.component_perm.size() != m_components)
    fail(Err::InternalError, "component count mismatch");
  orbits_from_perm(d);
  // Ogg's relation, exact for p >= 5
  if (static_cast<int64_t>(d.conductor_exponent) !=
      d.v_delta_min - static_cast<int64_t>(m_components) + 1)
    fail(Err::InternalError, "Ogg relation violated");
  return d;
}

SplitKind split_or_nonsplit(const LocalData& data) {
  if (data.kodaira.sym != KodairaSymbol::In || data.kodaira.n == 0)
    fail(Err::NotMultiplicative, "fiber is not multiplicative");
  return data.reduction == ReductionClass::SplitMult ? SplitKind::Split
                                                     : SplitKind::Nonsplit;
}

const std::vector<uint32_t>& component_frobenius(const LocalData& data) {
  return data.component_perm;
}

uint32_t fixed_components(const LocalData& data, uint32_t m) {
  uint32_t total = 0;
  for (uint32_t o : data.orbit_sizes)
    if (m % o == 0) total += o;
  return total;
}

uint64_t component_group_order(const KodairaType& k) {
  switch (k.sym) {
    case KodairaSymbol::I0: return 1;
    case KodairaSymbol::In: return k.n;
    case KodairaSymbol::II: return 1;
    case KodairaSymbol::III: return 2;
    case KodairaSymbol::IV: return 3;
    case KodairaSymbol::I0star: return 4;
    case KodairaSymbol::Instar: return 4;
    case KodairaSymbol::IVstar: return 3;
    case KodairaSymbol::IIIstar: return 2;
    case KodairaSymbol::IIstar: return 1;
  }
  return 1;
}

uint64_t component_group_exponent(const KodairaType& k) {
  switch (k.sym) {
    case KodairaSymbol::In: return k.n;
    case KodairaSymbol::I0star: return 2;
    case KodairaSymbol::Instar: return k.n % 2 ? 4 : 2;
    default: return component_group_order(k);
  }
}

int64_t fiber_point_count(const LocalData& data, uint32_t m) {
  if (m < 1) fail(Err::DegreeMismatch, "extension degree must be >= 1");
  uint64_t qv = data.q_place();
  if (data.reduction == ReductionClass::Good)
    return count_over_extension(data.trace, qv, m);
  __int128 rm = 1;
  for (uint32_t i = 0; i < m; ++i) rm *= qv;
  // trace formula: 1 - tr(Frob^m | H^1) + R^m * (fixed components).
  // H^1 is rank one on I_n fibers (the cycle), zero on additive trees;
  // Frobenius acts there by +1 (split) or -1 (nonsplit).
  __int128 total = static_cast<__int128>(fixed_components(data, m)) * rm;
  switch (data.reduction) {
    case ReductionClass::SplitMult:
      break;  // 1 - 1 = 0
    case ReductionClass::NonsplitMult:
      total += (m % 2) ? 2 : 0;
      break;
    case ReductionClass::Additive:
      total += 1;
      break;
    default:
      break;
  }
  return static_cast<int64_t>(total);
}

}  // namespace ellsurf
