#include "ellsurf/funcfield.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

namespace ellsurf {

Place Place::infinity(const FieldPtr& base) {
  Place v;
  v.pi = Poly(base);
  v.infinite = true;
  v.degree = 1;
  v.theta = 0;
  v.has_theta = true;
  return v;
}

Place Place::finite(const Poly& pi) {
  Place v;
  v.pi = pi.monic();
  v.infinite = false;
  v.degree = static_cast<uint32_t>(pi.deg());
  if (pi.deg() == 1) {
    v.theta = pi.field()->neg(pi.monic().coeff(0));
    v.has_theta = true;
  }
  return v;
}

bool Place::operator==(const Place& o) const {
  if (infinite != o.infinite) return false;
  return infinite || pi == o.pi;
}

bool Place::operator<(const Place& o) const {
  if (infinite != o.infinite) return infinite < o.infinite;  // infinity last
  if (degree != o.degree) return degree < o.degree;
  return pi.coeffs() < o.pi.coeffs();
}

std::string Place::str() const {
  return infinite ? "infty" : pi.str("t");
}

Elt Extension::embed(Elt a) const {
  if (!embed_table.empty()) return embed_table[a];
  // fallback: evaluate the coefficient vector at base_root
  auto digits = base->repr(a);
  Elt r = 0;
  for (size_t i = digits.size(); i-- > 0;)
    r = ext->add(ext->mul(r, base_root), digits[i]);
  return r;
}

Elt Extension::frob_q(Elt a) const { return ext->pow(a, base->q()); }

Elt Extension::eval_poly(const Poly& f, Elt x) const {
  Elt r = 0;
  for (size_t i = f.coeffs().size(); i-- > 0;)
    r = ext->add(ext->mul(r, x), embed(f.coeff(i)));
  return r;
}

namespace {

std::mutex g_ext_mutex;
std::map<std::pair<const Field*, uint32_t>, std::unique_ptr<Extension>>&
ext_registry() {
  static std::map<std::pair<const Field*, uint32_t>,
                  std::unique_ptr<Extension>> reg;
  return reg;
}

std::unique_ptr<Extension> build_extension(const FieldPtr& base, uint32_t d) {
  auto e = std::make_unique<Extension>();
  e->base = base;
  e->d = d;
  e->ext = d == 1 ? base : Field::make(base->p(), base->n() * d);
  if (d == 1) {
    e->base_root = base->n() == 1 ? 0 : base->p();  // the class of u
    // identity embedding
    e->embed_table.resize(base->q());
    for (Elt a = 0; a < base->q(); ++a) e->embed_table[a] = a;
    return e;
  }
  const auto& ext = e->ext;
  // locate the subfield of order q inside ext and the lex-smallest root
  // of the base modulus in it
  std::vector<uint32_t> m = base->modulus();
  Elt best = 0;
  bool found = false;
  auto try_root = [&](Elt x) {
    // evaluate modulus (prime-field coefficients) at x
    Elt r = 0;
    for (size_t i = m.size(); i-- > 0;) r = ext->add(ext->mul(r, x), m[i]);
    if (r == 0 && (!found || x < best)) {
      best = x;
      found = true;
    }
  };
  if (base->n() == 1) {
    // base is F_p; embedding is the prime-subfield inclusion
    e->base_root = 0;
    e->embed_table.resize(base->q());
    for (Elt a = 0; a < base->q(); ++a) e->embed_table[a] = a;
    return e;
  }
  if (!ext->tabled())
    fail(Err::FieldTooLarge, "extension field exceeds table limit");
  uint64_t big = ext->q() - 1, small = base->q() - 1;
  Elt h = ext->elt_exp(big / small);  // generates the subfield of order q
  Elt cur = 1;
  try_root(0);
  for (uint64_t k = 0; k < small; ++k) {
    try_root(cur);
    cur = ext->mul(cur, h);
  }
  if (!found) fail(Err::InternalError, "no root of base modulus in extension");
  e->base_root = best;
  e->embed_table.resize(base->q());
  for (Elt a = 0; a < base->q(); ++a) {
    auto digits = base->repr(a);
    Elt r = 0;
    for (size_t i = digits.size(); i-- > 0;)
      r = ext->add(ext->mul(r, best), digits[i]);
    e->embed_table[a] = r;
  }
  return e;
}

}  // namespace

const Extension& extension_of(const FieldPtr& base, uint32_t d) {
  std::lock_guard<std::mutex> lk(g_ext_mutex);
  auto key = std::make_pair(base.get(), d);
  auto it = ext_registry().find(key);
  if (it != ext_registry().end()) return *it->second;
  auto e = build_extension(base, d);
  auto* raw = e.get();
  ext_registry().emplace(key, std::move(e));
  return *raw;
}

std::vector<Place> places_of_degree(const FieldPtr& base, uint32_t d) {
  if (d < 1) fail(Err::DegreeMismatch, "place degree must be >= 1");
  std::vector<Place> out;
  uint64_t q = base->q();
  if (d == 1) {
    for (Elt c = 0; c < q; ++c) {
      Poly pi(base, {base->neg(c), 1});  // t - c
      out.push_back(Place::finite(pi));
    }
    std::sort(out.begin(), out.end());
    out.push_back(Place::infinity(base));
    return out;
  }
  const Extension& E = extension_of(base, d);
  const auto& ext = E.ext;
  if (!ext->tabled())
    fail(Err::FieldTooLarge, "place enumeration requires tabled extension");
  // walk Frobenius orbits of elements of exact degree d over F_q
  std::vector<bool> seen(ext->q(), false);
  seen[0] = true;
  std::vector<Elt> orbit;
  for (Elt x = 1; x < ext->q(); ++x) {
    if (seen[x]) continue;
    orbit.clear();
    Elt y = x;
    do {
      orbit.push_back(y);
      seen[y] = true;
      y = E.frob_q(y);
    } while (y != x);
    if (orbit.size() != d) continue;  // lies in a proper subfield
    // minimal polynomial: prod (X - theta^{q^i}); coefficients must
    // land in the embedded copy of F_q
    std::vector<Elt> mp{1};
    for (Elt root : orbit) {
      std::vector<Elt> next(mp.size() + 1, 0);
      Elt neg_r = ext->neg(root);
      for (size_t i = 0; i < mp.size(); ++i) {
        next[i + 1] = ext->add(next[i + 1], mp[i]);
        next[i] = ext->add(next[i], ext->mul(mp[i], neg_r));
      }
      mp.swap(next);
    }
    std::vector<Elt> base_coeffs(mp.size());
    for (size_t i = 0; i < mp.size(); ++i) {
      // invert the embedding (linear search over q would be slow; use
      // the fact that embed is injective and q is small enough to map)
      base_coeffs[i] = 0;
      bool ok = false;
      for (Elt a = 0; a < q; ++a)
        if (E.embed_table[a] == mp[i]) {
          base_coeffs[i] = a;
          ok = true;
          break;
        }
      if (!ok) fail(Err::InternalError, "minpoly coefficient outside F_q");
    }
    Place v = Place::finite(Poly(base, base_coeffs));
    v.theta = *std::min_element(orbit.begin(), orbit.end());
    v.has_theta = true;
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

const std::vector<Place>& places_table(const FieldPtr& base, uint32_t d) {
  static std::mutex mu;
  static std::map<std::pair<const Field*, uint32_t>,
                  std::unique_ptr<std::vector<Place>>> reg;
  std::lock_guard<std::mutex> lk(mu);
  auto key = std::make_pair(base.get(), d);
  auto it = reg.find(key);
  if (it != reg.end()) return *it->second;
  auto v = std::make_unique<std::vector<Place>>(places_of_degree(base, d));
  auto* raw = v.get();
  reg.emplace(key, std::move(v));
  return *raw;
}

// ---------------------------------------------------------------------------
// RationalFunction

RationalFunction::RationalFunction(Poly num)
    : num_(std::move(num)), den_(Poly::constant(num_.field(), 1)) {}

RationalFunction::RationalFunction(Poly num, Poly den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) fail(Err::DivisionByZero, "zero denominator");
  reduce();
}

void RationalFunction::reduce() {
  if (num_.is_zero()) {
    den_ = Poly::constant(den_.field(), 1);
    return;
  }
  Poly g = gcd(num_, den_);
  if (g.deg() > 0) {
    num_ = num_ / g;
    den_ = den_ / g;
  }
  Elt lead_inv = num_.field()->inv(den_.lead());
  num_ = num_.scaled(lead_inv);
  den_ = den_.scaled(lead_inv);
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
  return RationalFunction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}
RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
  return RationalFunction(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}
RationalFunction RationalFunction::operator-() const {
  RationalFunction r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}
RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
  return RationalFunction(num_ * o.num_, den_ * o.den_);
}
RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
  if (o.is_zero()) fail(Err::DivisionByZero, "division by zero function");
  return RationalFunction(num_ * o.den_, den_ * o.num_);
}
bool RationalFunction::operator==(const RationalFunction& o) const {
  return num_ == o.num_ && den_ == o.den_;
}

std::string RationalFunction::str() const {
  if (is_poly()) return num_.str();
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

int64_t valuation(const Poly& x, const Place& v) {
  if (x.is_zero()) return kValInfinity;
  if (v.infinite) return -static_cast<int64_t>(x.deg());
  int64_t count = 0;
  Poly cur = x;
  while (true) {
    Poly q, r;
    Poly::divrem(cur, v.pi, q, r);
    if (!r.is_zero()) break;
    ++count;
    cur = q;
  }
  return count;
}

int64_t valuation(const RationalFunction& x, const Place& v) {
  if (x.is_zero()) return kValInfinity;
  return valuation(x.num(), v) - valuation(x.den(), v);
}

ResidueValue residue(const RationalFunction& x, const Place& v) {
  auto base = x.field() ? x.field() : v.pi.field();
  if (x.is_zero()) {
    const Extension& E = extension_of(base, v.infinite ? 1 : v.degree);
    return {E.ext, 0};
  }
  int64_t val = valuation(x, v);
  if (val < 0) fail(Err::PoleAtPlace, "pole at " + v.str());
  if (v.infinite) {
    if (val > 0) return {base, 0};
    Elt r = base->div(x.num().lead(), x.den().lead());
    return {base, r};
  }
  const Extension& E = extension_of(base, v.degree);
  Elt theta = v.theta;
  if (!v.has_theta) {
    // lift pi to the canonical extension and take its smallest root
    std::vector<Elt> lifted(v.pi.coeffs().size());
    for (size_t i = 0; i < lifted.size(); ++i)
      lifted[i] = E.embed(v.pi.coeff(i));
    auto roots = poly_roots(Poly(E.ext, lifted));
    if (roots.empty()) fail(Err::InternalError, "place has no root in model");
    theta = roots.front();
  }
  Elt num = E.eval_poly(x.num(), theta);
  Elt den = E.eval_poly(x.den(), theta);
  if (den == 0) {
    // valuation >= 0 but both num and den vanish to equal order; strip
    // pi-powers explicitly
    Poly n = x.num(), d = x.den();
    while (true) {
      Poly qn, rn, qd, rd;
      Poly::divrem(n, v.pi, qn, rn);
      Poly::divrem(d, v.pi, qd, rd);
      if (rn.is_zero() && rd.is_zero()) {
        n = qn;
        d = qd;
        continue;
      }
      break;
    }
    num = E.eval_poly(n, theta);
    den = E.eval_poly(d, theta);
  }
  return {E.ext, E.ext->div(num, den)};
}

// ---------------------------------------------------------------------------
// ResidueRing

ResidueRing::ResidueRing(Poly pi) : pi_(pi.monic()) {
  if (pi_.deg() < 1) fail(Err::DegreeMismatch, "modulus must be nonconstant");
}

Poly ResidueRing::inv(const Poly& a0) const {
  Poly a = a0 % pi_;
  if (a.is_zero()) fail(Err::DivisionByZero, "inverse of zero residue");
  // extended Euclid
  Poly r0 = pi_, r1 = a;
  Poly t0(pi_.field()), t1 = Poly::constant(pi_.field(), 1);
  while (!r1.is_zero()) {
    Poly q, r;
    Poly::divrem(r0, r1, q, r);
    Poly t = t0 - q * t1;
    r0 = r1;
    r1 = r;
    t0 = t1;
    t1 = t;
  }
  if (r0.deg() != 0) fail(Err::InternalError, "residue not invertible");
  return (t0.scaled(pi_.field()->inv(r0.coeff(0)))) % pi_;
}

Poly ResidueRing::pow(const Poly& a, unsigned __int128 e) const {
  Poly r = Poly::constant(pi_.field(), 1);
  Poly b = a % pi_;
  while (e) {
    if (e & 1) r = (r * b) % pi_;
    b = (b * b) % pi_;
    e >>= 1;
  }
  return r;
}

unsigned __int128 ResidueRing::card() const {
  unsigned __int128 c = 1;
  for (int i = 0; i < pi_.deg(); ++i) c *= pi_.field()->q();
  return c;
}

int ResidueRing::chi(const Poly& a) const {
  Poly r = a % pi_;
  if (r.is_zero()) return 0;
  Poly s = pow(r, (card() - 1) / 2);
  if (s.is_one()) return 1;
  return -1;
}

}  // namespace ellsurf
