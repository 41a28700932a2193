#include "ellsurf/lfun.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "ellsurf/count.hpp"
#include "ellsurf/fastcount.hpp"

namespace ellsurf {

int LPolynomial::deg() const {
  int d = static_cast<int>(coeffs.size()) - 1;
  while (d > 0 && coeffs[d] == 0) --d;
  return d;
}

BigRat LPolynomial::eval(const BigRat& T) const {
  BigRat r = 0;
  for (size_t i = coeffs.size(); i-- > 0;) r = r * T + BigRat(coeffs[i]);
  return r;
}

LPolynomial LPolynomial::operator*(const LPolynomial& o) const {
  LPolynomial r;
  r.q = q ? q : o.q;
  r.weight = weight + o.weight;
  r.label = label;
  r.coeffs.assign(deg() + o.deg() + 1, 0);
  for (int i = 0; i <= deg(); ++i) {
    if (coeffs[i] == 0) continue;
    for (int j = 0; j <= o.deg(); ++j)
      r.coeffs[i + j] += coeffs[i] * o.coeff(j);
  }
  return r;
}

LPolynomial LPolynomial::div_exact(const LPolynomial& o) const {
  if (o.deg() < 0 || (o.deg() == 0 && o.coeff(0) == 0))
    fail(Err::DivisionByZero, "division by zero polynomial");
  std::vector<BigRat> rem(coeffs.begin(), coeffs.begin() + (deg() + 1));
  int dq = deg() - o.deg();
  if (dq < 0) fail(Err::InternalError, "inexact polynomial division");
  std::vector<BigRat> quo(dq + 1);
  BigRat lead = BigRat(o.coeff(o.deg()));
  for (int i = deg(); i >= o.deg(); --i) {
    BigRat c = rem[i] / lead;
    quo[i - o.deg()] = c;
    if (c == 0) continue;
    for (int j = 0; j <= o.deg(); ++j)
      rem[i - o.deg() + j] -= c * BigRat(o.coeff(j));
  }
  for (const auto& r : rem)
    if (r != 0) fail(Err::InternalError, "inexact polynomial division");
  LPolynomial out;
  out.q = q;
  out.weight = weight - o.weight;
  out.label = label;
  out.coeffs.resize(quo.size());
  for (size_t i = 0; i < quo.size(); ++i) {
    if (boost::multiprecision::denominator(quo[i]) != 1)
      fail(Err::InternalError, "non-integer quotient");
    out.coeffs[i] = boost::multiprecision::numerator(quo[i]);
  }
  if (out.coeffs.empty()) out.coeffs = {0};
  return out;
}

std::string LPolynomial::str() const {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i <= deg(); ++i) {
    if (coeffs[i] == 0 && deg() > 0) continue;
    if (!first) os << (coeffs[i] >= 0 ? " + " : " - ");
    BigInt a = coeffs[i] >= 0 || first ? coeffs[i] : -coeffs[i];
    if (i == 0)
      os << a.str();
    else {
      if (a != 1) os << a.str() << "*";
      os << "T";
      if (i > 1) os << "^" << i;
    }
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

LPolynomial lpoly_one(uint64_t q, int weight, std::string label) {
  LPolynomial r;
  r.q = q;
  r.weight = weight;
  r.label = std::move(label);
  return r;
}

LPolynomial lpoly_linear(uint64_t q, const BigInt& c, uint32_t k, int weight,
                         std::string label) {
  LPolynomial r = lpoly_one(q, weight, std::move(label));
  r.coeffs.assign(k + 1, 0);
  r.coeffs[0] = 1;
  r.coeffs[k] = -c;
  return r;
}

LPolynomial local_factor(const LocalData& d) {
  uint32_t dv = d.place.degree;
  uint64_t qv = d.q_place();
  LPolynomial r = lpoly_one(d.q_base, 1, "P_" + d.place.str());
  switch (d.reduction) {
    case ReductionClass::Good:
      r.coeffs.assign(2 * dv + 1, 0);
      r.coeffs[0] = 1;
      r.coeffs[dv] = -d.trace;
      r.coeffs[2 * dv] = qv;
      break;
    case ReductionClass::SplitMult:
      r.coeffs.assign(dv + 1, 0);
      r.coeffs[0] = 1;
      r.coeffs[dv] = -1;
      break;
    case ReductionClass::NonsplitMult:
      r.coeffs.assign(dv + 1, 0);
      r.coeffs[0] = 1;
      r.coeffs[dv] = 1;
      break;
    case ReductionClass::Additive:
      break;  // factor 1
  }
  return r;
}

BigRat special_value(const LPolynomial& L, int64_t s0) {
  BigRat T0;
  BigInt qs = 1;
  for (int64_t i = 0; i < (s0 < 0 ? -s0 : s0); ++i) qs *= L.q;
  T0 = s0 <= 0 ? BigRat(qs) : BigRat(1) / BigRat(qs);
  BigRat v = L.eval(T0);
  if (v == 0) fail(Err::VanishesAtPoint, "L vanishes at s0");
  return v;
}

LeadingValue leading_coefficient(const LPolynomial& L, int64_t s0) {
  // factor out (1 - q^{s0} T); T0 = q^{-s0}
  BigInt qs = 1;
  for (int64_t i = 0; i < (s0 < 0 ? -s0 : s0); ++i) qs *= L.q;
  BigRat qpow = s0 >= 0 ? BigRat(qs) : BigRat(1) / BigRat(qs);  // q^{s0}
  BigRat T0 = BigRat(1) / qpow;
  std::vector<BigRat> cur(L.coeffs.begin(), L.coeffs.begin() + (L.deg() + 1));
  auto eval = [&](const std::vector<BigRat>& c) {
    BigRat r = 0;
    for (size_t i = c.size(); i-- > 0;) r = r * T0 + c[i];
    return r;
  };
  LeadingValue out;
  while (true) {
    BigRat v = eval(cur);
    if (v != 0 || cur.size() == 1) {
      out.value = v;
      return out;
    }
    // divide by (1 - q^{s0} T): forward series division is exact here
    std::vector<BigRat> next(cur.size() - 1);
    // cur = (1 - qpow T) * next  =>  next_k = cur_{k+1} ... do synthetic
    // division by the root T0 then rescale: cur(T) = (T - T0) * h(T) * (-qpow)
    std::vector<BigRat> h(cur.size() - 1);
    BigRat carry = 0;
    for (size_t i = cur.size(); i-- > 1;) {
      carry = cur[i] + carry * T0;
      h[i - 1] = carry;
    }
    for (size_t i = 0; i < h.size(); ++i) next[i] = -h[i] / qpow;
    cur = next;
    ++out.r;
  }
}

LPolynomial perm_l(const std::vector<OrbitEntry>& orbits, uint32_t shift,
                   uint64_t q) {
  LPolynomial r = lpoly_one(q, 2 * static_cast<int>(shift), "perm");
  for (const auto& o : orbits) {
    uint32_t k = o.orbit_size * o.place_degree;
    BigInt c = 1;
    for (uint32_t i = 0; i < shift * k; ++i) c *= q;
    r = r * lpoly_linear(q, c, k, 2 * static_cast<int>(shift));
    r.weight = 2 * static_cast<int>(shift);
  }
  return r;
}

const LocalData* CurveLocalSweep::special_at(const Place& v) const {
  for (const auto& d : special)
    if (d.place == v) return &d;
  return nullptr;
}

CurveLocalSweep local_sweep(const WeierstrassCurve& E) {
  CurveLocalSweep out;
  out.model = short_form(E);
  auto I = invariants(out.model);
  for (const auto& pf : poly_factor(I.delta)) {
    Place v = Place::finite(pf.factor);
    out.special.push_back(tate_local(out.model, v));
  }
  out.special.push_back(tate_local(E, Place::infinity(E.base)));
  std::sort(out.special.begin(), out.special.end(),
            [](const LocalData& a, const LocalData& b) {
              return a.place < b.place;
            });
  for (const auto& d : out.special) {
    if (d.conductor_exponent > 0) {
      out.bad.push_back(d);
      out.conductor_degree +=
          static_cast<int64_t>(d.conductor_exponent) * d.place.degree;
    }
  }
  return out;
}

namespace {

constexpr __int128 kSeriesBound = static_cast<__int128>(1) << 100;

// in-place division of the truncated series by 1 + sum_j f[j] T^{j}
void series_divide(std::vector<__int128>& acc,
                   const std::vector<std::pair<uint32_t, int64_t>>& f) {
  size_t M = acc.size();
  for (size_t k = 0; k < M; ++k) {
    for (auto& [j, c] : f)
      if (j <= k && c != 0) acc[k] -= static_cast<__int128>(c) * acc[k - j];
    if (acc[k] > kSeriesBound || acc[k] < -kSeriesBound)
      fail(Err::InternalError, "series coefficient overflow");
  }
}

std::vector<std::pair<uint32_t, int64_t>> factor_terms(const LocalData& d) {
  uint32_t dv = d.place.degree;
  switch (d.reduction) {
    case ReductionClass::Good:
      return {{dv, -d.trace}, {2 * dv, static_cast<int64_t>(d.q_place())}};
    case ReductionClass::SplitMult:
      return {{dv, -1}};
    case ReductionClass::NonsplitMult:
      return {{dv, 1}};
    case ReductionClass::Additive:
      return {};
  }
  return {};
}

// traces of good finite places of one degree, aligned with places_table;
// special (discriminant-dividing) places get no entry (skip flag)
struct GoodDegreeSlice {
  std::vector<int64_t> trace;   // parallel to places_table(base, d)
  std::vector<bool> is_special; // true -> excluded from the good sweep
};

GoodDegreeSlice good_slice(const WeierstrassCurve& shortE,
                           const CurveLocalSweep& sweep, uint32_t d) {
  const auto& base = shortE.base;
  const auto& places = places_table(base, d);
  const Extension& X = extension_of(base, d);
  auto& tc = TraceCache::for_field(X.ext);
  // embedded coefficients of a4, a6
  std::vector<Elt> ea(shortE.a4.coeffs().size()), eb(shortE.a6.coeffs().size());
  for (size_t i = 0; i < ea.size(); ++i) ea[i] = X.embed(shortE.a4.coeff(i));
  for (size_t i = 0; i < eb.size(); ++i) eb[i] = X.embed(shortE.a6.coeff(i));
  const Field& F = *X.ext;
  GoodDegreeSlice out;
  out.trace.resize(places.size(), 0);
  out.is_special.resize(places.size(), false);
  for (size_t i = 0; i < places.size(); ++i) {
    const Place& v = places[i];
    if (v.infinite || sweep.special_at(v)) {
      out.is_special[i] = true;
      continue;
    }
    Elt A = 0, B = 0;
    for (size_t k = ea.size(); k-- > 0;) A = F.add(F.mul(A, v.theta), ea[k]);
    for (size_t k = eb.size(); k-- > 0;) B = F.add(F.mul(B, v.theta), eb[k]);
    out.trace[i] = tc.trace(A, B);
  }
  return out;
}

}  // namespace

GlobalLResult global_l(const WeierstrassCurve& E, uint32_t guard) {
  GlobalLResult out;
  out.sweep = local_sweep(E);
  if (out.sweep.bad.empty())
    fail(Err::IsotrivialOrSmooth, "everywhere good reduction");
  out.conductor_degree = out.sweep.conductor_degree;
  out.N = out.conductor_degree - 4;
  if (out.N < 0)
    fail(Err::NegativeDegree,
         "conductor degree below 4 is impossible for non-isotrivial E");
  uint32_t M = static_cast<uint32_t>(out.N) + guard;

  std::vector<__int128> acc(M + 1, 0);
  acc[0] = 1;
  // special places first (deterministic), then good places by degree
  for (const auto& d : out.sweep.special)
    if (d.place.degree <= M) series_divide(acc, factor_terms(d));
  for (uint32_t d = 1; d <= M; ++d) {
    auto slice = good_slice(out.sweep.model, out.sweep, d);
    const auto& places = places_table(E.base, d);
    uint64_t qd = 1;
    for (uint32_t i = 0; i < d; ++i) qd *= E.base->q();
    for (size_t i = 0; i < places.size(); ++i) {
      if (slice.is_special[i]) continue;
      series_divide(acc, {{d, -slice.trace[i]},
                          {2 * d, static_cast<int64_t>(qd)}});
    }
  }

  for (uint32_t k = static_cast<uint32_t>(out.N) + 1; k <= M; ++k)
    if (acc[k] != 0)
      fail(Err::PrecisionGuardFailed,
           "guard coefficient T^" + std::to_string(k) + " nonzero");
  if (out.N > 0 && acc[out.N] == 0)
    fail(Err::PrecisionGuardFailed, "degree of L below conductor prediction");

  out.L = lpoly_one(E.base->q(), 2, "L(E)");
  out.L.coeffs.resize(out.N + 1);
  for (int64_t k = 0; k <= out.N; ++k)
    out.L.coeffs[k] = static_cast<int64_t>(acc[k]);
  auto eps = functional_equation_sign(out.L);
  out.epsilon = eps ? *eps : 0;
  return out;
}

namespace {

// power sums p_n of the reciprocal roots from the coefficients
std::vector<BigInt> power_sums_from_poly(const LPolynomial& L, uint32_t n_max) {
  int N = L.deg();
  std::vector<BigInt> e(N + 1);  // elementary symmetric with sign absorbed
  for (int k = 0; k <= N; ++k) e[k] = (k % 2 ? -L.coeff(k) : L.coeff(k));
  std::vector<BigInt> p(n_max + 1, 0);
  for (uint32_t n = 1; n <= n_max; ++n) {
    BigInt s = 0;
    for (uint32_t i = 1; i < n && static_cast<int>(i) <= N; ++i)
      s += (i % 2 ? BigInt(1) : BigInt(-1)) * e[i] * p[n - i];
    if (static_cast<int>(n) <= N)
      s += (n % 2 ? BigInt(n) : BigInt(-static_cast<int64_t>(n))) * e[n];
    p[n] = s;
  }
  return p;
}

// fiberwise point sums S_n = sum over x in P^1(F_{q^n}) of #fiber_x
std::vector<BigInt> fiberwise_sums(const WeierstrassCurve& E,
                                   const GlobalLResult& euler,
                                   uint32_t n_max) {
  const auto& base = E.base;
  std::vector<BigInt> S(n_max + 1, 0);
  for (uint32_t d = 1; d <= n_max; ++d) {
    bool divides_some = false;
    for (uint32_t n = d; n <= n_max; ++n)
      if (n % d == 0) divides_some = true;
    if (!divides_some) continue;
    auto slice = good_slice(euler.sweep.model, euler.sweep, d);
    const auto& places = places_table(base, d);
    uint64_t qd = 1;
    for (uint32_t i = 0; i < d; ++i) qd *= base->q();
    for (uint32_t n = d; n <= n_max; ++n) {
      if (n % d != 0) continue;
      uint32_t m = n / d;
      BigInt good_total = 0;
      for (size_t i = 0; i < places.size(); ++i) {
        if (slice.is_special[i]) continue;
        good_total += count_over_extension(slice.trace[i], qd, m);
      }
      S[n] += BigInt(d) * good_total;
    }
  }
  for (const auto& dat : euler.sweep.special) {
    uint32_t d = dat.place.degree;
    for (uint32_t n = d; n <= n_max; ++n)
      if (n % d == 0)
        S[n] += BigInt(d) * fiber_point_count(dat, n / d);
  }
  return S;
}

std::vector<OrbitEntry> irr0_orbit_entries(const CurveLocalSweep& sweep) {
  std::vector<OrbitEntry> out;
  for (const auto& d : sweep.bad)
    for (uint32_t o : d.orbit_sizes_nonid)
      out.push_back({o, d.place.degree});
  return out;
}

BigInt qpow(uint64_t q, uint32_t n) {
  BigInt r = 1;
  for (uint32_t i = 0; i < n; ++i) r *= q;
  return r;
}

// alternating zeta trace at level n, using L-root power sums p
BigInt surface_trace(const std::vector<BigInt>& p,
                     const std::vector<OrbitEntry>& irr0, uint64_t q,
                     uint32_t n) {
  BigInt qn = qpow(q, n);
  BigInt total = 1 + qpow(q, 2 * n) + 2 * qn + p[n];
  for (const auto& o : irr0) {
    uint32_t k = o.orbit_size * o.place_degree;
    if (n % k == 0) total += BigInt(k) * qn;
  }
  return total;
}

}  // namespace

LPolynomial l_from_lefschetz(const WeierstrassCurve& E,
                             const GlobalLResult& euler) {
  uint32_t N = static_cast<uint32_t>(euler.N);
  LPolynomial out = lpoly_one(E.base->q(), 2, "L(E) via Lefschetz");
  if (N == 0) return out;
  auto S = fiberwise_sums(E, euler, N);
  auto irr0 = irr0_orbit_entries(euler.sweep);
  uint64_t q = E.base->q();
  // recover the power sums of the reciprocal roots of L
  std::vector<BigInt> p(N + 1, 0);
  for (uint32_t n = 1; n <= N; ++n) {
    BigInt qn = qpow(q, n);
    p[n] = S[n] - 1 - qpow(q, 2 * n) - 2 * qn;
    for (const auto& o : irr0) {
      uint32_t k = o.orbit_size * o.place_degree;
      if (n % k == 0) p[n] -= BigInt(k) * qn;
    }
  }
  // Newton's identities: k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i
  std::vector<BigInt> e(N + 1, 0);
  e[0] = 1;
  for (uint32_t k = 1; k <= N; ++k) {
    BigInt s = 0;
    for (uint32_t i = 1; i <= k; ++i)
      s += (i % 2 ? BigInt(1) : BigInt(-1)) * e[k - i] * p[i];
    if (s % k != 0) fail(Err::InternalError, "Newton identity non-integral");
    e[k] = s / k;
  }
  out.coeffs.assign(N + 1, 0);
  for (uint32_t k = 0; k <= N; ++k)
    out.coeffs[k] = (k % 2 ? -e[k] : e[k]);
  return out;
}

bool lefschetz_check(const WeierstrassCurve& E, const GlobalLResult& euler,
                     uint32_t n_max) {
  auto S = fiberwise_sums(E, euler, n_max);
  auto p = power_sums_from_poly(euler.L, n_max);
  auto irr0 = irr0_orbit_entries(euler.sweep);
  for (uint32_t n = 1; n <= n_max; ++n)
    if (S[n] != surface_trace(p, irr0, E.base->q(), n)) return false;
  return true;
}

SurfaceZeta assemble_surface_zeta(const WeierstrassCurve& E,
                                  const GlobalLResult& euler) {
  uint64_t q = E.base->q();
  SurfaceZeta z;
  z.h0 = lpoly_linear(q, 1, 1, 0, "h0");
  z.h1 = lpoly_one(q, 1, "h1");
  z.h3 = lpoly_one(q, 3, "h3");
  z.h4 = lpoly_linear(q, BigInt(q) * q, 1, 4, "h4");
  z.irr0_orbits = irr0_orbit_entries(euler.sweep);
  LPolynomial qT2 = lpoly_linear(q, q, 1, 2) * lpoly_linear(q, q, 1, 2);
  z.h2 = qT2 * euler.L * perm_l(z.irr0_orbits, 1, q);
  z.h2.weight = 2;
  z.h2.label = "h2";
  return z;
}

SurfaceZeta open_surface_l(const WeierstrassCurve& E,
                           const GlobalLResult& euler,
                           const std::vector<Place>& removed) {
  if (removed.empty()) fail(Err::UIsAllOfC, "U must omit at least one place");
  uint64_t q = E.base->q();
  SurfaceZeta z = assemble_surface_zeta(E, euler);
  z.has_compact = true;
  z.hc0 = lpoly_one(q, 0, "hc0");
  z.hc4 = lpoly_linear(q, BigInt(q) * q, 1, 4, "hc4");

  std::vector<OrbitEntry> removed_pts;
  std::vector<OrbitEntry> removed_all_comps;
  LPolynomial h1EU = lpoly_one(q, 1, "h1(E^U)");
  for (const auto& v : removed) {
    removed_pts.push_back({1, v.degree});
    const LocalData* known = euler.sweep.special_at(v);
    LocalData local = known ? *known : tate_local(E, v);
    h1EU = h1EU * local_factor(local);
    removed_all_comps.push_back({1, v.degree});  // identity component
    for (uint32_t o : local.orbit_sizes_nonid)
      removed_all_comps.push_back({o, v.degree});
  }
  z.hc1 = perm_l(removed_pts, 0, q).div_exact(lpoly_linear(q, 1, 1, 0));
  z.hc1.label = "hc1";
  z.hc1.weight = 0;
  LPolynomial perm1 = perm_l(removed_pts, 1, q);
  z.hc3 = perm1.div_exact(lpoly_linear(q, q, 1, 2));
  z.hc3.label = "hc3";
  z.hc3.weight = 2;
  LPolynomial num = z.h2 * h1EU * perm1;
  LPolynomial den =
      lpoly_linear(q, q, 1, 2) * perm_l(removed_all_comps, 1, q);
  z.hc2 = num.div_exact(den);
  z.hc2.label = "hc2";
  z.hc2.weight = 2;
  return z;
}

std::vector<BigInt> reciprocal_root_power_sums(const LPolynomial& L,
                                               uint32_t n_max) {
  return power_sums_from_poly(L, n_max);
}

std::optional<int> functional_equation_sign(const LPolynomial& L) {
  int N = L.deg();
  // M_m = c_{N-m} q^{2m-N}; require M = eps * L
  int eps = 0;
  for (int m = 0; m <= N; ++m) {
    BigRat lhs = BigRat(L.coeff(N - m));
    // times q^{2m-N}
    int e = 2 * m - N;
    BigInt qa = 1;
    for (int i = 0; i < (e < 0 ? -e : e); ++i) qa *= L.q;
    lhs = e >= 0 ? lhs * BigRat(qa) : lhs / BigRat(qa);
    BigRat rhs = BigRat(L.coeff(m));
    if (lhs == 0 && rhs == 0) continue;
    if (lhs == rhs) {
      if (eps == -1) return std::nullopt;
      eps = 1;
    } else if (lhs == -rhs) {
      if (eps == 1) return std::nullopt;
      eps = -1;
    } else {
      return std::nullopt;
    }
  }
  return eps == 0 ? 1 : eps;
}

double root_magnitude_deviation(const LPolynomial& L) {
  int N = L.deg();
  if (N == 0) return 0.0;
  // Durand-Kerner on the monic reversal; roots of L are alpha^{-1}
  std::vector<std::complex<double>> c(N + 1);
  double lead = static_cast<double>(L.coeff(N));
  for (int i = 0; i <= N; ++i)
    c[i] = static_cast<double>(L.coeff(i)) / lead;
  std::vector<std::complex<double>> z(N);
  for (int i = 0; i < N; ++i)
    z[i] = std::polar(0.4 + 0.9 / (1 + i), 0.9 * i + 0.3);
  for (int iter = 0; iter < 400; ++iter) {
    double moved = 0;
    for (int i = 0; i < N; ++i) {
      std::complex<double> num = 0;
      {
        std::complex<double> acc = 1;
        for (int k = N; k >= 0; --k) acc = (k == N) ? c[N] : acc * z[i] + c[k];
        num = acc;
      }
      std::complex<double> den = 1;
      for (int j = 0; j < N; ++j)
        if (j != i) den *= (z[i] - z[j]);
      std::complex<double> step = num / den;
      z[i] -= step;
      moved += std::abs(step);
    }
    if (moved < 1e-14) break;
  }
  double target = std::pow(static_cast<double>(L.q), L.weight / 2.0);
  double worst = 0;
  for (int i = 0; i < N; ++i) {
    double alpha = 1.0 / std::abs(z[i]);  // reciprocal root magnitude
    worst = std::max(worst, std::abs(alpha - target));
  }
  return worst;
}

}  // namespace ellsurf
