#include "ellsurf/mw.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "ellsurf/count.hpp"
#include "ellsurf/fastcount.hpp"

namespace ellsurf {

uint64_t FrobeniusModule::order() const {
  uint64_t o = 1;
  for (uint64_t n : cyclic_orders) o *= n;
  return o;
}

bool FrobeniusModule::frob_is_identity() const {
  for (size_t i = 0; i < cyclic_orders.size(); ++i)
    for (size_t j = 0; j < cyclic_orders.size(); ++j) {
      uint64_t want = i == j ? 1 : 0;
      if (frob_images[i][j] % cyclic_orders[j] !=
          want % cyclic_orders[j])
        return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// group law with rational-function coordinates, y^2 = x^3 + A x + B

bool ff_on_curve(const Poly& A, const Poly& B, const FFPoint& P) {
  if (P.inf) return true;
  RationalFunction rhs =
      P.x * P.x * P.x + RationalFunction(A) * P.x + RationalFunction(B);
  return P.y * P.y == rhs;
}

FFPoint ff_neg(const Poly& A, const Poly& B, const FFPoint& P) {
  (void)A;
  (void)B;
  if (P.inf) return P;
  return {false, P.x, -P.y};
}

FFPoint ff_add(const Poly& A, const Poly& B, const FFPoint& P,
               const FFPoint& Q) {
  (void)B;
  if (P.inf) return Q;
  if (Q.inf) return P;
  const auto& f = A.field();
  RationalFunction lambda;
  if (!(P.x == Q.x)) {
    lambda = (Q.y - P.y) / (Q.x - P.x);
  } else {
    if (P.y == -Q.y) return {};
    RationalFunction three(Poly::constant(f, f->from_int(3)));
    RationalFunction two(Poly::constant(f, f->from_int(2)));
    lambda = (three * P.x * P.x + RationalFunction(A)) / (two * P.y);
  }
  RationalFunction x3 = lambda * lambda - P.x - Q.x;
  RationalFunction y3 = lambda * (P.x - x3) - P.y;
  return {false, x3, y3};
}

FFPoint ff_mul(const Poly& A, const Poly& B, uint64_t k, const FFPoint& P) {
  FFPoint r{}, base = P;
  while (k) {
    if (k & 1) r = ff_add(A, B, r, base);
    base = ff_add(A, B, base, base);
    k >>= 1;
  }
  return r;
}

// ---------------------------------------------------------------------------
// division polynomials

namespace {

using XPoly = std::vector<Poly>;  // polynomial in x, coefficients in F_q[t]

XPoly xp_zero() { return {}; }

XPoly xp_trim(XPoly a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
  return a;
}

XPoly xp_add(const XPoly& a, const XPoly& b) {
  XPoly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < r.size(); ++i) {
    if (i < a.size() && i < b.size()) r[i] = a[i] + b[i];
    else if (i < a.size()) r[i] = a[i];
    else r[i] = b[i];
  }
  return xp_trim(std::move(r));
}

XPoly xp_sub(const XPoly& a, const XPoly& b) {
  XPoly nb = b;
  for (auto& c : nb) c = -c;
  return xp_add(a, nb);
}

XPoly xp_mul(const XPoly& a, const XPoly& b) {
  if (a.empty() || b.empty()) return {};
  const auto& f = a[0].field();
  XPoly r(a.size() + b.size() - 1, Poly(f));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
  return xp_trim(std::move(r));
}

XPoly xp_scale(const XPoly& a, Elt c) {
  XPoly r = a;
  for (auto& x : r) x = x.scaled(c);
  return xp_trim(std::move(r));
}

Elt xp_field_int(const FieldPtr& f, int64_t k) { return f->from_int(k); }

}  // namespace

std::vector<Poly> division_polynomial(const Poly& A, const Poly& B,
                                      uint64_t N) {
  const auto& f = A.field();
  auto C = [&](int64_t k) { return Poly::constant(f, xp_field_int(f, k)); };
  // F = x^3 + A x + B
  XPoly F = {B, A, Poly(f), C(1)};
  std::vector<XPoly> P(std::max<uint64_t>(N + 3, 6));
  P[0] = xp_zero();
  P[1] = {C(1)};
  P[2] = {C(2)};
  P[3] = xp_trim({-(A * A), B.scaled(f->from_int(12)),
                  A.scaled(f->from_int(6)), Poly(f), C(3)});
  P[4] = xp_trim({-(B * B).scaled(f->from_int(8)) - A * A * A,
                  -(A * B).scaled(f->from_int(4)),
                  -(A * A).scaled(f->from_int(5)), B.scaled(f->from_int(20)),
                  A.scaled(f->from_int(5)), Poly(f), C(1)});
  P[4] = xp_scale(P[4], f->from_int(4));
  XPoly F2 = xp_mul(F, F);
  Elt half = f->inv(f->from_int(2));
  for (uint64_t n = 5; n < P.size(); ++n) {
    uint64_t m = n / 2;
    if (n % 2 == 1) {
      XPoly t1 = xp_mul(P[m + 2], xp_mul(P[m], xp_mul(P[m], P[m])));
      XPoly t2 = xp_mul(P[m - 1], xp_mul(P[m + 1], xp_mul(P[m + 1], P[m + 1])));
      if (m % 2 == 1)
        P[n] = xp_sub(t1, xp_mul(F2, t2));
      else
        P[n] = xp_sub(xp_mul(F2, t1), t2);
    } else {
      XPoly inner = xp_sub(xp_mul(P[m + 2], xp_mul(P[m - 1], P[m - 1])),
                           xp_mul(P[m - 2], xp_mul(P[m + 1], P[m + 1])));
      P[n] = xp_scale(xp_mul(P[m], inner), half);
    }
  }
  return P[N];
}

bool poly_sqrt(const Poly& g, Poly& out) {
  const auto& f = g.field();
  if (g.is_zero()) {
    out = Poly(f);
    return true;
  }
  if (g.deg() % 2) return false;
  int d = g.deg() / 2;
  Elt lead_root;
  if (!f->sqrt(g.lead(), lead_root)) return false;
  Poly y = Poly::monomial(f, lead_root, d);
  Elt inv2lead = f->inv(f->mul(f->from_int(2), lead_root));
  while (true) {
    Poly r = g - y * y;
    if (r.is_zero()) {
      out = y;
      return true;
    }
    int k = r.deg();
    if (k < d) return false;
    y = y + Poly::monomial(f, f->mul(r.lead(), inv2lead), k - d);
  }
}

// ---------------------------------------------------------------------------
// section search

namespace {

struct ShortFormData {
  WeierstrassCurve curve;  // y^2 = x^3 + a4 x + a6
  Poly r_total, s1, w1;    // x_orig = x_s + r_total, y_orig = y_s + s1 x_orig + w1
};

ShortFormData short_form_data(const WeierstrassCurve& E) {
  const auto& f = E.base;
  Elt inv2 = f->inv(f->from_int(2));
  Poly s = E.a1.scaled(f->neg(inv2));
  Poly w = E.a3.scaled(f->neg(inv2));
  auto E1 = transform(E, RationalFunction(Poly::constant(f, 1)), Poly(f), s, w);
  Poly r = E1.a2.scaled(f->neg(f->inv(f->from_int(3))));
  auto E2 = transform(E1, RationalFunction(Poly::constant(f, 1)), r, Poly(f),
                      Poly(f));
  return {E2, r, s, w};
}

// embed a base-coefficient polynomial into the degree-m canonical extension
Poly embed_poly(const Extension& X, const Poly& a) {
  std::vector<Elt> c(a.coeffs().size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = X.embed(a.coeff(i));
  return Poly(X.ext, c);
}

// value of a base-coefficient Poly at tau in the extension
Elt eval_in_ext(const Extension& X, const Poly& a, Elt tau) {
  return X.eval_poly(a, tau);
}

struct SearchLevel {
  const Extension* X;
  Poly A, B;  // curve over ext
};

SearchLevel level_curve(const WeierstrassCurve& shortE, uint32_t m) {
  const Extension& X = extension_of(shortE.base, m);
  return {&X, embed_poly(X, shortE.a4), embed_poly(X, shortE.a6)};
}

// exact order of a torsion point with [N]P = O
uint64_t exact_order(const Poly& A, const Poly& B, const FFPoint& P,
                     uint64_t N) {
  uint64_t ord = N, rest = N;
  for (uint64_t d = 2; d * d <= rest; ++d) {
    while (rest % d == 0) rest /= d;
    while (ord % d == 0 && ff_mul(A, B, ord / d, P).inf) ord /= d;
  }
  if (rest > 1)
    while (ord % rest == 0 && ff_mul(A, B, ord / rest, P).inf) ord /= rest;
  return ord;
}

}  // namespace

std::vector<SectionWitness> torsion_sections(const WeierstrassCurve& E,
                                             uint64_t N, uint32_t m,
                                             int64_t deg_cap,
                                             uint64_t combo_cap) {
  const auto& base = E.base;
  if (N % base->p() == 0)
    fail(Err::PPartPresent, "p-torsion sections are out of scope");
  if (deg_cap < 0) fail(Err::DegreeMismatch, "deg_cap must be >= 0");
  auto sf = short_form_data(E);
  auto lvl = level_curve(sf.curve, m);
  const Extension& X = *lvl.X;
  const auto& K = X.ext;

  std::vector<SectionWitness> out;
  if (N == 1) {
    return out;  // only the point at infinity
  }

  // candidate x-polynomials over F_q[t]
  std::vector<XPoly> candidates;
  {
    XPoly psi = [&] {
      auto v = division_polynomial(sf.curve.a4, sf.curve.a6, N);
      return XPoly(v.begin(), v.end());
    }();
    if (!psi.empty()) candidates.push_back(psi);
    if (N % 2 == 0) {
      candidates.push_back(
          {sf.curve.a6, sf.curve.a4, Poly(base), Poly::constant(base, 1)});
    }
  }

  uint64_t points_avail = K->q();
  uint32_t n_samples = static_cast<uint32_t>(deg_cap) + 1;
  if (points_avail < n_samples)
    fail(Err::CapExceeded, "not enough sample points in F_{q^m}");
  bool can_prune = points_avail >= n_samples + 2;

  std::vector<Poly> found_x;  // over K, in t
  for (const auto& cand : candidates) {
    // specialize at sample points tau = 0, 1, 2, ... (packed order)
    std::vector<Elt> taus(n_samples);
    for (uint32_t i = 0; i < n_samples; ++i) taus[i] = i;
    std::vector<std::vector<Elt>> roots(n_samples);
    bool empty = false;
    for (uint32_t i = 0; i < n_samples; ++i) {
      std::vector<Elt> spec(cand.size());
      for (size_t k = 0; k < cand.size(); ++k)
        spec[k] = eval_in_ext(X, cand[k], taus[i]);
      Poly px(K, spec);
      if (px.is_zero()) {
        // every x works at this sample; treat as all field elements
        roots[i].resize(K->q());
        for (Elt v = 0; v < K->q(); ++v) roots[i][v] = v;
      } else {
        roots[i] = poly_roots(px);
      }
      if (roots[i].empty()) {
        empty = true;
        break;
      }
    }
    if (empty) continue;
    unsigned __int128 combos = 1;
    for (auto& r : roots) combos *= r.size();
    if (combos > combo_cap)
      fail(Err::CapExceeded, "interpolation combination cap exceeded");

    // Lagrange basis over the sample points
    std::vector<Poly> basis(n_samples, Poly(K));
    for (uint32_t i = 0; i < n_samples; ++i) {
      Poly b = Poly::constant(K, 1);
      Elt denom = 1;
      for (uint32_t j2 = 0; j2 < n_samples; ++j2) {
        if (j2 == i) continue;
        b = b * Poly(K, {K->neg(taus[j2]), 1});
        denom = K->mul(denom, K->sub(taus[i], taus[j2]));
      }
      basis[i] = b.scaled(K->inv(denom));
    }

    std::vector<uint32_t> pick(n_samples, 0);
    while (true) {
      // interpolate
      Poly x(K);
      for (uint32_t i = 0; i < n_samples; ++i)
        x = x + basis[i].scaled(roots[i][pick[i]]);
      bool keep = true;
      if (can_prune) {
        for (Elt fresh = n_samples; fresh < n_samples + 2 && keep; ++fresh) {
          Elt xv = x.eval(fresh);
          Elt acc = 0;
          for (size_t k = cand.size(); k-- > 0;)
            acc = K->add(K->mul(acc, xv), eval_in_ext(X, cand[k], fresh));
          if (acc != 0) keep = false;
        }
      }
      if (keep) {
        // exact verification: cand(x(t), t) == 0
        Poly acc(K);
        for (size_t k = cand.size(); k-- > 0;)
          acc = acc * x + embed_poly(X, cand[k]);
        if (acc.is_zero() &&
            std::find(found_x.begin(), found_x.end(), x) == found_x.end())
          found_x.push_back(x);
      }
      // next combination
      uint32_t i = 0;
      while (i < n_samples && ++pick[i] == roots[i].size()) pick[i++] = 0;
      if (i == n_samples) break;
    }
  }

  for (const auto& x : found_x) {
    Poly g = x * x * x + lvl.A * x + lvl.B;
    Poly y(K);
    if (!poly_sqrt(g, y)) continue;  // y lives in a quadratic extension
    FFPoint P{false, RationalFunction(x), RationalFunction(y)};
    if (!ff_on_curve(lvl.A, lvl.B, P))
      fail(Err::InternalError, "verified root not on the curve");
    if (!ff_mul(lvl.A, lvl.B, N, P).inf)
      fail(Err::InternalError, "section does not die under [N]");
    uint64_t ord = exact_order(lvl.A, lvl.B, P, N);
    for (const auto& yy : {y, -y}) {
      SectionWitness w;
      // back to the original model: x0 = x + r, y0 = y + s1 x0 + w1
      Poly x0 = x + embed_poly(X, sf.r_total);
      Poly y0 = yy + embed_poly(X, sf.s1) * x0 + embed_poly(X, sf.w1);
      w.x = RationalFunction(x0);
      w.y = RationalFunction(y0);
      w.level = m;
      w.order = ord;
      out.push_back(w);
      if (yy.is_zero()) break;  // 2-torsion: y = -y
    }
  }
  return out;
}

uint64_t torsion_upper_bound(const WeierstrassCurve& E, uint32_t m,
                             uint32_t samples) {
  const auto& base = E.base;
  auto sweep_model = short_form(E);
  uint64_t g = 0;
  uint32_t used = 0;
  for (uint32_t d = 1; d <= 3 && used < samples; ++d) {
    const Extension& X = extension_of(base, d);
    auto& tc = TraceCache::for_field(X.ext);
    for (const auto& v : places_table(base, d)) {
      if (used >= samples) break;
      if (v.infinite) continue;
      Elt A = X.eval_poly(sweep_model.a4, v.theta);
      Elt B = X.eval_poly(sweep_model.a6, v.theta);
      Elt disc = X.ext->add(
          X.ext->mul(X.ext->from_int(4), X.ext->mul(A, X.ext->mul(A, A))),
          X.ext->mul(X.ext->from_int(27), X.ext->mul(B, B)));
      if (disc == 0) continue;  // bad or non-minimal place
      int64_t tr = tc.trace(A, B);
      uint32_t level = std::lcm(d, m) / d;
      uint64_t qd = X.ext->q();
      int64_t cnt = count_over_extension(tr, qd, level);
      g = std::gcd(g, static_cast<uint64_t>(cnt));
      ++used;
    }
  }
  if (used == 0) fail(Err::NoGoodPlaces, "no good places sampled");
  while (g % base->p() == 0) g /= base->p();
  return g;
}

namespace {

// per-prime bookkeeping for the climb
struct EllState {
  uint64_t ell;
  uint32_t bound_exp;      // v_ell of the order bound
  uint32_t exp_cap;        // exponent cap: T[ell^inf] subset (Z/ell^e)^2
  uint32_t e1 = 0, e2 = 0; // found structure: Z/ell^{e1} x Z/ell^{e2}, e1<=e2
  bool decided = false;
  std::vector<SectionWitness> witnesses;  // on the original model
  uint32_t closure_level = 1;
};

uint64_t ipow(uint64_t b, uint32_t e) {
  uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

// #elements of order exactly ell^k in Z/ell^{c1} x Z/ell^{c2}
uint64_t elements_of_order(uint64_t ell, uint32_t k, uint32_t c1, uint32_t c2) {
  auto upto = [&](uint32_t kk) {
    return ipow(ell, std::min(kk, c1)) * ipow(ell, std::min(kk, c2));
  };
  if (k == 0) return 1;
  return upto(k) - upto(k - 1);
}

// x-coordinate count of the new points a minimal growth step could add:
// points of order ell^{k} in the ambient bound whose ell-multiple lies in
// the found group, excluding points already found
uint32_t new_root_budget(const EllState& s) {
  // largest ambient group allowed by the order and exponent bounds
  uint32_t a2 = std::min(s.exp_cap, s.bound_exp);
  uint32_t a1 = std::min(s.exp_cap, s.bound_exp - a2);
  uint64_t total = 0;
  for (uint32_t k = 1; k <= a2; ++k) {
    uint64_t ambient = elements_of_order(s.ell, k, a1, a2);
    uint64_t have = elements_of_order(s.ell, k, s.e1, s.e2);
    uint64_t fresh = ambient > have ? ambient - have : 0;
    if (s.ell == 2 && k == 1)
      total += fresh;  // order-2 points have one x-coordinate each
    else
      total += (fresh + 1) / 2;
  }
  return static_cast<uint32_t>(total);
}

}  // namespace

TorsionCertificate geometric_torsion(const WeierstrassCurve& E,
                                     const TorsionConfig& cfg) {
  const auto& base = E.base;
  if (base->p() < 5)
    fail(Err::UnsupportedCharacteristic, "torsion search needs p >= 5");
  if (is_isotrivial(E))
    fail(Err::IsotrivialOrSmooth, "isotrivial curve unsupported");

  // local data for the Phi-product bound and the discriminant degree
  auto I = invariants(short_form(E));
  std::vector<LocalData> locs;
  int64_t disc_degree = 0;
  for (const auto& pf : poly_factor(I.delta)) {
    Place v = Place::finite(pf.factor);
    auto d = tate_local(E, v);
    disc_degree += static_cast<int64_t>(v.degree) * d.v_delta_min;
    if (d.v_delta_min > 0) locs.push_back(d);
  }
  {
    auto dinf = tate_local(E, Place::infinity(base));
    disc_degree += dinf.v_delta_min;
    if (dinf.v_delta_min > 0) locs.push_back(dinf);
  }

  int64_t deg_cap =
      cfg.deg_cap >= 0 ? cfg.deg_cap : 2 + (disc_degree + 5) / 6;

  // per-prime bounds from the narrow-lattice embedding T -> sum Phi_v
  std::map<uint64_t, EllState> states;
  for (const auto& d : locs) {
    uint64_t phi = component_group_order(d.kodaira);
    uint64_t expo = component_group_exponent(d.kodaira);
    for (uint64_t ell = 2; ell * ell <= phi || ell <= phi; ++ell) {
      if (phi % ell) continue;
      if (ell == base->p()) {
        while (phi % ell == 0) phi /= ell;
        continue;
      }
      auto& st = states[ell];
      st.ell = ell;
      while (phi % ell == 0) {
        phi /= ell;
        ++st.bound_exp;
      }
      uint32_t e = 0;
      uint64_t ex = expo;
      while (ex % ell == 0) {
        ex /= ell;
        ++e;
      }
      st.exp_cap = std::max(st.exp_cap, e);
    }
  }
  // cap order bound by the exponent refinement: |T[ell^inf]| <= ell^{2 exp}
  for (auto& [ell, st] : states)
    st.bound_exp = std::min(st.bound_exp, 2 * st.exp_cap);

  TorsionCertificate cert;
  cert.searched_level = cfg.m_max;

  for (auto& [ell, st] : states) {
    if (st.bound_exp == 0) {
      st.decided = true;
      continue;
    }
    // climb prime powers
    std::vector<SectionWitness> best;
    uint32_t best_level = 1;
    uint32_t a = 1;
    bool search_truncated = false;
    for (; ipow(ell, a) <= cfg.max_order && a <= st.bound_exp; ++a) {
      uint64_t N = ipow(ell, a);
      std::vector<SectionWitness> found;
      std::vector<uint32_t> levels;
      for (uint32_t m = 1; m <= cfg.m_max; ++m) {
        std::vector<SectionWitness> w;
        try {
          w = torsion_sections(E, N, m, deg_cap, cfg.combo_cap);
        } catch (const Error& err) {
          if (err.code() == Err::CapExceeded) {
            search_truncated = true;
            continue;
          }
          throw;
        }
        for (auto& piece : w)
          if (piece.order == N) {
            found.push_back(piece);
            levels.push_back(m);
          }
      }
      if (found.empty()) break;
      // accumulate the compositum level of every layer found so far
      for (uint32_t lv : levels) best_level = std::lcm(best_level, lv);
    }
    // collect every section of each order ell^b, b < a, at one level
    uint32_t top_a = a - 1;
    if (top_a == 0) {
      st.e1 = st.e2 = 0;
      st.decided = new_root_budget(st) <= cfg.m_max && !search_truncated;
      continue;
    }
    {
      // one coherent sweep at the compositum level of all layers
      uint32_t M = best_level;
      if (M > 2 * cfg.m_max) {
        // compositum out of reach; keep per-level data, report interval
        M = cfg.m_max;
        search_truncated = true;
      }
      std::vector<SectionWitness> w;
      try {
        w = torsion_sections(E, ipow(ell, top_a), M, deg_cap, cfg.combo_cap);
      } catch (const Error& err) {
        if (err.code() != Err::CapExceeded) throw;
        search_truncated = true;
      }
      best = w;
      st.closure_level = M;
    }
    // structure of the found layer: count points of each order
    uint64_t pts = 1;  // infinity
    std::map<uint64_t, uint64_t> by_order;
    for (auto& w : best) {
      ++by_order[w.order];
      ++pts;
    }
    // group order = 1 + found points (sections of order dividing ell^top_a)
    uint32_t e1 = 0, e2 = 0;
    uint64_t n = pts;
    // decompose Z/ell^{e1} x Z/ell^{e2}: exponent from max order found
    uint64_t max_ord = 1;
    for (auto& [o, c] : by_order) max_ord = std::max(max_ord, o);
    uint64_t exp_e = 0, t = max_ord;
    while (t % ell == 0) {
      t /= ell;
      ++exp_e;
    }
    e2 = static_cast<uint32_t>(exp_e);
    uint64_t rest = n / ipow(ell, e2);
    while (rest > 1) {
      rest /= ell;
      ++e1;
    }
    if (ipow(ell, e1 + e2) != n)
      fail(Err::InternalError, "inconsistent torsion layer");
    st.e1 = std::min(e1, e2);
    st.e2 = std::max(e1, e2);
    st.witnesses = best;
    st.decided = !search_truncated && new_root_budget(st) <= cfg.m_max;
  }

  // assemble the module over all primes by CRT
  uint64_t n1 = 1, n2 = 1, upper = 1;
  bool all_decided = true;
  for (auto& [ell, st] : states) {
    n1 *= ipow(ell, st.e1);
    n2 *= ipow(ell, st.e2);
    upper *= st.decided ? ipow(ell, st.e1 + st.e2) : ipow(ell, st.bound_exp);
    all_decided = all_decided && st.decided;
    for (auto& w : st.witnesses) cert.witnesses.push_back(w);
  }
  cert.upper_bound = upper;
  cert.status = all_decided ? TorsionCertificate::Status::Exact
                            : TorsionCertificate::Status::Interval;

  // Frobenius action: compute per prime on the closed layer, then CRT
  FrobeniusModule M;
  if (n2 > 1) {
    if (n1 > 1)
      M.cyclic_orders = {n1, n2};
    else
      M.cyclic_orders = {n2};
    size_t g = M.cyclic_orders.size();
    M.frob_images.assign(g, std::vector<uint64_t>(g, 0));
    // build per-prime generator data
    struct PrimePart {
      uint64_t ell;
      uint64_t o1, o2;  // orders of gen1, gen2 parts (o1 may be 1)
      uint64_t a11, a12, a21, a22;  // frob images in coordinates
    };
    std::vector<PrimePart> parts;
    for (auto& [ell, st] : states) {
      if (st.e2 == 0) continue;
      PrimePart pp;
      pp.ell = ell;
      pp.o1 = ipow(ell, st.e1);
      pp.o2 = ipow(ell, st.e2);
      // reconstruct the group explicitly from witnesses at one level
      auto sf = short_form_data(E);
      auto lvl = level_curve(sf.curve, st.closure_level);
      const Extension& X = *lvl.X;
      // map witnesses back onto the short model over the closure field
      std::vector<FFPoint> pts;
      pts.push_back({});
      for (auto& w : st.witnesses) {
        Poly x0 = w.x.num();
        Poly y0 = w.y.num();
        // x_s = x0 - r, y_s = y0 - s1 x0 - w1
        Poly xs = x0 - embed_poly(X, sf.r_total);
        Poly ys = y0 - embed_poly(X, sf.s1) * x0 - embed_poly(X, sf.w1);
        pts.push_back({false, RationalFunction(xs), RationalFunction(ys)});
      }
      auto find_pt = [&](const FFPoint& P) -> int {
        for (size_t i = 0; i < pts.size(); ++i) {
          if (pts[i].inf && P.inf) return static_cast<int>(i);
          if (!pts[i].inf && !P.inf && pts[i].x == P.x && pts[i].y == P.y)
            return static_cast<int>(i);
        }
        return -1;
      };
      // generators: a point of order o2; then an independent one of order o1
      int gen2 = -1;
      for (size_t i = 1; i < pts.size(); ++i)
        if (exact_order(lvl.A, lvl.B, pts[i], pp.o2) == pp.o2) {
          gen2 = static_cast<int>(i);
          break;
        }
      if (gen2 < 0) fail(Err::InternalError, "no generator of full order");
      int gen1 = -1;
      if (pp.o1 > 1) {
        // subgroup generated by gen2
        std::vector<int> sub;
        FFPoint acc{};
        for (uint64_t k = 0; k < pp.o2; ++k) {
          sub.push_back(find_pt(acc));
          acc = ff_add(lvl.A, lvl.B, acc, pts[gen2]);
        }
        for (size_t i = 1; i < pts.size() && gen1 < 0; ++i) {
          if (exact_order(lvl.A, lvl.B, pts[i], pp.o2) != pp.o1) continue;
          bool indep = true;
          FFPoint mult{};
          for (uint64_t k = 0; k < pp.o1 && indep; ++k) {
            if (k > 0 && !mult.inf) {
              // k * pts[i] must avoid <gen2> except at O
              int idx = find_pt(mult);
              bool in_sub = false;
              for (int ssub : sub) in_sub |= (ssub == idx && idx != 0);
              if (in_sub) indep = false;
            }
            mult = ff_add(lvl.A, lvl.B, mult, pts[i]);
          }
          if (indep) gen1 = static_cast<int>(i);
        }
        if (gen1 < 0) fail(Err::InternalError, "no independent generator");
      }
      // coordinates of an arbitrary group element
      auto coords = [&](const FFPoint& P) -> std::pair<uint64_t, uint64_t> {
        FFPoint acc1{};
        for (uint64_t i = 0; i < std::max<uint64_t>(pp.o1, 1); ++i) {
          FFPoint acc = acc1;
          for (uint64_t j = 0; j < pp.o2; ++j) {
            if ((acc.inf && P.inf) ||
                (!acc.inf && !P.inf && acc.x == P.x && acc.y == P.y))
              return {i, j};
            acc = ff_add(lvl.A, lvl.B, acc, pts[gen2]);
          }
          if (gen1 >= 0) acc1 = ff_add(lvl.A, lvl.B, acc1, pts[gen1]);
        }
        fail(Err::InternalError, "point not in generated group");
      };
      // frobenius on coordinates: raise coefficients to q
      auto frob_pt = [&](const FFPoint& P) -> FFPoint {
        if (P.inf) return P;
        auto fr = [&](const RationalFunction& r) {
          return RationalFunction(r.num().coeff_frobenius(base->n()),
                                  r.den().coeff_frobenius(base->n()));
        };
        return {false, fr(P.x), fr(P.y)};
      };
      if (gen1 >= 0) {
        auto [a, b] = coords(frob_pt(pts[gen1]));
        pp.a11 = a;
        pp.a12 = b;
      } else {
        pp.a11 = 1;
        pp.a12 = 0;
      }
      {
        auto [a, b] = coords(frob_pt(pts[gen2]));
        pp.a21 = a;
        pp.a22 = b;
      }
      parts.push_back(pp);
    }
    // CRT-combine the per-prime actions into images mod (n1, n2)
    auto crt = [&](uint64_t mod,
                   auto&& pick) -> uint64_t {
      // value v mod `mod` with v = pick(part) mod part-order
      uint64_t v = 0;
      for (uint64_t cand = 0; cand < mod; ++cand) {
        bool ok = true;
        for (auto& pp : parts) {
          uint64_t m1 = pick(pp).second;
          if (m1 == 0) continue;
          if (cand % m1 != pick(pp).first % m1) ok = false;
        }
        if (ok) {
          v = cand;
          break;
        }
      }
      return v;
    };
    if (M.cyclic_orders.size() == 2) {
      M.frob_images[0][0] =
          crt(n1, [](const PrimePart& pp) { return std::make_pair(pp.a11, pp.o1); });
      M.frob_images[0][1] =
          crt(n2, [](const PrimePart& pp) { return std::make_pair(pp.a12, pp.o2); });
      M.frob_images[1][0] =
          crt(n1, [](const PrimePart& pp) { return std::make_pair(pp.a21, pp.o1); });
      M.frob_images[1][1] =
          crt(n2, [](const PrimePart& pp) { return std::make_pair(pp.a22, pp.o2); });
    } else {
      M.frob_images[0][0] =
          crt(n2, [](const PrimePart& pp) { return std::make_pair(pp.a22, pp.o2); });
    }
  }
  cert.lower = M;
  return cert;
}

uint64_t twisted_invariants(const FrobeniusModule& M, int64_t j, uint64_t q,
                            uint32_t p) {
  for (uint64_t n : M.cyclic_orders)
    if (n % p == 0) fail(Err::PPartPresent, "module has nontrivial p-part");
  if (M.cyclic_orders.empty()) return 1;
  // count x with q^j * frob(x) = x, elementwise
  uint64_t n2 = M.cyclic_orders.back();
  // q^j mod n2 (j >= 0 in all uses; handle j < 0 via inverse power)
  auto powmod = [](uint64_t b, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    b %= m;
    while (e) {
      if (e & 1) r = (unsigned __int128)r * b % m;
      b = (unsigned __int128)b * b % m;
      e >>= 1;
    }
    return r;
  };
  uint64_t qj;
  if (j >= 0) {
    qj = powmod(q, static_cast<uint64_t>(j), n2);
  } else {
    // q is invertible mod n2 (orders are prime to p, q a p-power)
    // find inverse by exponentiation with Euler phi
    uint64_t phi = 1, m = n2;
    for (uint64_t d = 2; d * d <= m; ++d) {
      if (m % d) continue;
      uint64_t pk = 1;
      while (m % d == 0) {
        m /= d;
        pk *= d;
      }
      phi *= pk - pk / d;
    }
    if (m > 1) phi *= m - 1;
    uint64_t qinv = powmod(q % n2, phi - 1, n2);
    qj = powmod(qinv, static_cast<uint64_t>(-j), n2);
  }
  size_t g = M.cyclic_orders.size();
  uint64_t count = 0;
  std::vector<uint64_t> idx(g, 0);
  while (true) {
    // image = q^j * sum_i idx[i] * frob(gen_i)
    bool fixed = true;
    for (size_t c = 0; c < g; ++c) {
      uint64_t mod = M.cyclic_orders[c];
      unsigned __int128 img = 0;
      for (size_t i = 0; i < g; ++i)
        img += (unsigned __int128)idx[i] * (M.frob_images[i][c] % mod);
      img = img % mod * (qj % mod) % mod;
      if (img != idx[c] % mod) fixed = false;
    }
    if (fixed) ++count;
    size_t i = 0;
    while (i < g && ++idx[i] == M.cyclic_orders[i]) idx[i++] = 0;
    if (i == g) break;
  }
  return count;
}

FrobeniusModule torsion_restricted(const WeierstrassCurve& E,
                                   const std::vector<Place>& removed,
                                   const TorsionCertificate& cert) {
  auto bad = bad_places(E);
  for (const auto& b : bad) {
    bool covered = false;
    for (const auto& r : removed) covered |= (r == b);
    if (!covered)
      fail(Err::UnsupportedU, "U meets the bad fiber at " + b.str());
  }
  return cert.lower;
}

}  // namespace ellsurf
