#include "ellsurf/gf.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <mutex>
#include <sstream>

namespace ellsurf {

const char* err_name(Err code) {
  switch (code) {
    case Err::NotPrime: return "NotPrime";
    case Err::ReducibleModulus: return "ReducibleModulus";
    case Err::DegreeMismatch: return "DegreeMismatch";
    case Err::MixedFields: return "MixedFields";
    case Err::DivisionByZero: return "DivisionByZero";
    case Err::ZeroPolynomial: return "ZeroPolynomial";
    case Err::SingularCurve: return "SingularCurve";
    case Err::ZeroScaling: return "ZeroScaling";
    case Err::InexactTransform: return "InexactTransform";
    case Err::UnsupportedCharacteristic: return "UnsupportedCharacteristic";
    case Err::IsotrivialOrSmooth: return "IsotrivialOrSmooth";
    case Err::PoleAtPlace: return "PoleAtPlace";
    case Err::FieldTooLarge: return "FieldTooLarge";
    case Err::NoGoodPlaces: return "NoGoodPlaces";
    case Err::CapExceeded: return "CapExceeded";
    case Err::PPartPresent: return "PPartPresent";
    case Err::UnsupportedU: return "UnsupportedU";
    case Err::UIsAllOfC: return "UIsAllOfC";
    case Err::NotMultiplicative: return "NotMultiplicative";
    case Err::AmbiguousAction: return "AmbiguousAction";
    case Err::PrecisionGuardFailed: return "PrecisionGuardFailed";
    case Err::NegativeDegree: return "NegativeDegree";
    case Err::VanishesAtPoint: return "VanishesAtPoint";
    case Err::ParseError: return "ParseError";
    case Err::SingularInput: return "SingularInput";
    case Err::NonsingularInput: return "NonsingularInput";
    case Err::InternalError: return "InternalError";
  }
  return "Unknown";
}

uint64_t max_field_cardinality() {
  static uint64_t cap = [] {
    if (const char* env = std::getenv("ELLSURF_MAX_Q")) {
      uint64_t v = std::strtoull(env, nullptr, 10);
      if (v >= 2) return v;
    }
    return uint64_t(1) << 23;
  }();
  return cap;
}

namespace {

// Zech tables are only built below this size; larger fields use
// digit-vector arithmetic.
constexpr uint64_t kTableLimit = uint64_t(1) << 23;

std::vector<uint32_t> prime_factors_u64(uint64_t m) {
  std::vector<uint32_t> out;
  for (uint64_t d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      out.push_back(static_cast<uint32_t>(d));
      while (m % d == 0) m /= d;
    }
  }
  if (m > 1) out.push_back(static_cast<uint32_t>(m));
  return out;
}

}  // namespace

bool is_prime_u32(uint32_t m) {
  if (m < 2) return false;
  for (uint32_t d = 2; uint64_t(d) * d <= m; ++d)
    if (m % d == 0) return false;
  return true;
}

std::vector<uint32_t> Field::unpack(Elt a) const {
  std::vector<uint32_t> d(n_);
  for (uint32_t i = 0; i < n_; ++i) {
    d[i] = static_cast<uint32_t>(a % p_);
    a /= p_;
  }
  return d;
}

Elt Field::pack(const std::vector<uint32_t>& d) const {
  Elt a = 0;
  for (size_t i = d.size(); i-- > 0;) a = a * p_ + d[i] % p_;
  return a;
}

Elt Field::add(Elt a, Elt b) const {
  Elt out = 0, mul = 1;
  for (uint32_t i = 0; i < n_; ++i) {
    uint64_t s = a % p_ + b % p_;
    if (s >= p_) s -= p_;
    out += s * mul;
    mul *= p_;
    a /= p_;
    b /= p_;
  }
  return out;
}

Elt Field::neg(Elt a) const {
  Elt out = 0, mul = 1;
  for (uint32_t i = 0; i < n_; ++i) {
    uint64_t c = a % p_;
    out += (c ? p_ - c : 0) * mul;
    mul *= p_;
    a /= p_;
  }
  return out;
}

Elt Field::sub(Elt a, Elt b) const { return add(a, neg(b)); }

Elt Field::mul_generic(Elt a, Elt b) const {
  if (a == 0 || b == 0) return 0;
  constexpr uint32_t kMaxDigits = 64;
  if (2 * n_ > kMaxDigits) fail(Err::FieldTooLarge, "extension degree cap");
  uint32_t da[kMaxDigits], db[kMaxDigits];
  uint64_t prod[kMaxDigits] = {0};
  for (uint32_t i = 0; i < n_; ++i) {
    da[i] = static_cast<uint32_t>(a % p_);
    db[i] = static_cast<uint32_t>(b % p_);
    a /= p_;
    b /= p_;
  }
  for (uint32_t i = 0; i < n_; ++i) {
    if (!da[i]) continue;
    for (uint32_t j = 0; j < n_; ++j)
      prod[i + j] += uint64_t(da[i]) * db[j];
  }
  // reduce mod modulus (monic)
  for (uint32_t i = 2 * n_ - 2; i >= n_ && i < kMaxDigits; --i) {
    uint64_t c = prod[i] % p_;
    if (!c) continue;
    uint64_t cc = p_ - c;
    prod[i] = 0;
    for (uint32_t j = 0; j < n_; ++j) prod[i - n_ + j] += cc * modulus_[j];
  }
  Elt out = 0;
  for (uint32_t i = n_; i-- > 0;) out = out * p_ + prod[i] % p_;
  return out;
}

Elt Field::mul(Elt a, Elt b) const {
  if (a == 0 || b == 0) return 0;
  if (tabled_) {
    int64_t k = log_[a] + log_[b];
    uint64_t m = q_ - 1;
    if (k >= static_cast<int64_t>(m)) k -= m;
    return exp_[k];
  }
  return mul_generic(a, b);
}

Elt Field::pow(Elt a, uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  if (tabled_) {
    uint64_t m = q_ - 1;
    uint64_t k = (unsigned __int128)(uint64_t)log_[a] * (e % m) % m;
    return exp_[k];
  }
  Elt r = 1, base = a;
  while (e) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

Elt Field::inv(Elt a) const {
  if (a == 0) fail(Err::DivisionByZero, "inverse of zero");
  if (tabled_) {
    uint64_t m = q_ - 1;
    int64_t k = log_[a] == 0 ? 0 : static_cast<int64_t>(m) - log_[a];
    return exp_[k];
  }
  return pow(a, q_ - 2);
}

Elt Field::from_int(int64_t c) const {
  int64_t r = c % static_cast<int64_t>(p_);
  if (r < 0) r += p_;
  return static_cast<Elt>(r);
}

std::vector<uint32_t> Field::repr(Elt a) const { return unpack(a); }

Elt Field::from_repr(const std::vector<uint32_t>& coeffs) const {
  if (coeffs.size() > n_) fail(Err::DegreeMismatch, "element repr too long");
  Elt a = 0;
  for (size_t i = coeffs.size(); i-- > 0;) a = a * p_ + coeffs[i] % p_;
  return a;
}

int Field::chi(Elt a) const {
  if (a == 0) return 0;
  if (p_ == 2) return 1;  // every element is a square in char 2
  if (tabled_) return (log_[a] & 1) ? -1 : 1;
  return pow(a, (q_ - 1) / 2) == 1 ? 1 : -1;
}

bool Field::sqrt(Elt a, Elt& root) const {
  if (a == 0) {
    root = 0;
    return true;
  }
  if (p_ == 2) {
    root = pow(a, q_ / 2);  // squaring is bijective
    return true;
  }
  if (chi(a) < 0) return false;
  if (tabled_) {
    root = exp_[log_[a] / 2];
    if (mul(root, root) != a) root = exp_[(log_[a] + q_ - 1) / 2];
    return true;
  }
  // Tonelli-Shanks
  uint64_t s = q_ - 1;
  uint32_t e = 0;
  while (!(s & 1)) {
    s >>= 1;
    ++e;
  }
  Elt nonres = 2;
  while (nonres < q_ && chi(nonres) != -1) ++nonres;
  Elt x = pow(a, (s + 1) / 2), b = pow(a, s), g = pow(nonres, s);
  uint32_t r = e;
  while (true) {
    Elt t = b;
    uint32_t m = 0;
    while (t != 1 && m < r) {
      t = mul(t, t);
      ++m;
    }
    if (m == 0) {
      root = x;
      return true;
    }
    Elt gs = pow(g, uint64_t(1) << (r - m - 1));
    g = mul(gs, gs);
    x = mul(x, gs);
    b = mul(b, g);
    r = m;
  }
}

Elt Field::generator() const {
  if (!tabled_) fail(Err::InternalError, "generator requires tabled field");
  return gen_;
}

int64_t Field::log_add(int64_t la, int64_t lb) const {
  if (la == LOG_ZERO) return lb;
  if (lb == LOG_ZERO) return la;
  int64_t m = static_cast<int64_t>(q_ - 1);
  int64_t d = lb - la;
  if (d < 0) d += m;
  int64_t z = zech_[d];
  if (z == LOG_ZERO) return LOG_ZERO;
  int64_t r = la + z;
  if (r >= m) r -= m;
  return r;
}

void Field::build_tables() {
  uint64_t m = q_ - 1;
  auto factors = prime_factors_u64(m);
  // find a multiplicative generator; try u, then u+c, then everything
  Elt g = 0;
  for (Elt cand = (n_ > 1 ? p_ : 2); cand < q_; ++cand) {
    if (cand == 0) continue;
    bool ok = true;
    for (uint32_t ell : factors) {
      Elt t = 1, base = cand;
      uint64_t e = m / ell;
      while (e) {  // generic powmod (tables not built yet)
        if (e & 1) t = mul_generic(t, base);
        base = mul_generic(base, base);
        e >>= 1;
      }
      if (t == 1) {
        ok = false;
        break;
      }
    }
    if (ok) {
      g = cand;
      break;
    }
  }
  if (g == 0) fail(Err::InternalError, "no generator found");
  gen_ = g;
  exp_.resize(m);
  log_.assign(q_, LOG_ZERO);
  Elt cur = 1;
  for (uint64_t k = 0; k < m; ++k) {
    exp_[k] = cur;
    log_[cur] = static_cast<int64_t>(k);
    cur = mul_generic(cur, g);
  }
  if (cur != 1) fail(Err::InternalError, "generator order wrong");
  zech_.resize(m);
  for (uint64_t k = 0; k < m; ++k) {
    Elt v = add(exp_[k], 1);
    zech_[k] = v == 0 ? LOG_ZERO : log_[v];
  }
}

namespace {

// registry so repeated make(p, n) share tables
std::mutex g_field_mutex;
std::map<std::pair<uint32_t, uint32_t>, FieldPtr>& field_registry() {
  static std::map<std::pair<uint32_t, uint32_t>, FieldPtr> reg;
  return reg;
}

}  // namespace

FieldPtr Field::make(uint32_t p, uint32_t n,
                     const std::vector<uint32_t>& modulus) {
  if (!is_prime_u32(p)) fail(Err::NotPrime, "p = " + std::to_string(p));
  if (n < 1) fail(Err::DegreeMismatch, "extension degree must be >= 1");
  long double qf = 1;
  for (uint32_t i = 0; i < n; ++i) qf *= p;
  if (qf > static_cast<long double>(max_field_cardinality()))
    fail(Err::FieldTooLarge,
         "p^n exceeds cap " + std::to_string(max_field_cardinality()));
  uint64_t q = 1;
  for (uint32_t i = 0; i < n; ++i) q *= p;

  auto f = FieldPtr(new Field());
  auto* raw = const_cast<Field*>(f.get());
  raw->p_ = p;
  raw->n_ = n;
  raw->q_ = q;
  if (modulus.size() != n + 1 || modulus[n] % p != 1)
    fail(Err::DegreeMismatch, "modulus must be monic of degree n");
  raw->modulus_.resize(n + 1);
  for (size_t i = 0; i <= n; ++i) raw->modulus_[i] = modulus[i] % p;
  if (n > 1) {
    // verify irreducibility over F_p
    auto fp = Field::make(p, 1);
    std::vector<Elt> mc(raw->modulus_.begin(), raw->modulus_.end());
    Poly mod_poly(fp, mc);
    if (!is_irreducible(mod_poly))
      fail(Err::ReducibleModulus, "modulus is reducible");
  }
  if (q <= kTableLimit && q > 2) raw->build_tables();
  raw->tabled_ = !raw->exp_.empty();
  return f;
}

FieldPtr Field::make(uint32_t p, uint32_t n) {
  {
    std::lock_guard<std::mutex> lk(g_field_mutex);
    auto it = field_registry().find({p, n});
    if (it != field_registry().end()) return it->second;
  }
  if (!is_prime_u32(p)) fail(Err::NotPrime, "p = " + std::to_string(p));
  std::vector<uint32_t> modulus;
  if (n == 1) {
    modulus = {0, 1};  // the polynomial u
  } else {
    // lexicographically smallest monic irreducible, coefficients
    // (c_0, c_1, ..., c_{n-1}) compared left to right
    auto fp = Field::make(p, 1);
    std::vector<uint32_t> c(n, 0);
    bool found = false;
    while (!found) {
      std::vector<Elt> cc(c.begin(), c.end());
      cc.push_back(1);
      Poly cand(fp, cc);
      if (is_irreducible(cand)) {
        modulus.assign(c.begin(), c.end());
        modulus.push_back(1);
        found = true;
        break;
      }
      // increment the tuple in lex order: last coordinate fastest
      int i = static_cast<int>(n) - 1;
      while (i >= 0 && c[i] == p - 1) c[i--] = 0;
      if (i < 0) break;
      ++c[i];
    }
    if (!found) fail(Err::InternalError, "no irreducible of given degree");
  }
  auto f = Field::make(p, n, modulus);
  std::lock_guard<std::mutex> lk(g_field_mutex);
  field_registry().emplace(std::make_pair(p, n), f);
  return f;
}

// ---------------------------------------------------------------------------
// Poly

Poly::Poly(FieldPtr f, std::vector<Elt> coeffs)
    : f_(std::move(f)), c_(std::move(coeffs)) {
  normalize();
}

Poly Poly::constant(FieldPtr f, Elt c) {
  Poly r(std::move(f));
  if (c) r.c_ = {c};
  return r;
}

Poly Poly::from_ints(FieldPtr f, const std::vector<int64_t>& coeffs) {
  std::vector<Elt> c(coeffs.size());
  for (size_t i = 0; i < coeffs.size(); ++i) c[i] = f->from_int(coeffs[i]);
  return Poly(std::move(f), std::move(c));
}

Poly Poly::monomial(FieldPtr f, Elt c, size_t k) {
  Poly r(std::move(f));
  if (c) {
    r.c_.assign(k + 1, 0);
    r.c_[k] = c;
  }
  return r;
}

void Poly::normalize() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

bool Poly::operator==(const Poly& o) const { return c_ == o.c_; }

Poly Poly::operator+(const Poly& o) const {
  Poly r(f_);
  r.c_.resize(std::max(c_.size(), o.c_.size()), 0);
  for (size_t i = 0; i < r.c_.size(); ++i)
    r.c_[i] = f_->add(coeff(i), o.coeff(i));
  r.normalize();
  return r;
}

Poly Poly::operator-() const {
  Poly r(f_);
  r.c_.resize(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = f_->neg(c_[i]);
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  if (is_zero() || o.is_zero()) return Poly(f_);
  Poly r(f_);
  r.c_.assign(c_.size() + o.c_.size() - 1, 0);
  for (size_t i = 0; i < c_.size(); ++i) {
    if (!c_[i]) continue;
    for (size_t j = 0; j < o.c_.size(); ++j)
      r.c_[i + j] = f_->add(r.c_[i + j], f_->mul(c_[i], o.c_[j]));
  }
  r.normalize();
  return r;
}

Poly Poly::scaled(Elt c) const {
  Poly r(f_);
  if (!c) return r;
  r.c_.resize(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = f_->mul(c_[i], c);
  return r;
}

Poly Poly::shifted(size_t k) const {
  if (is_zero()) return *this;
  Poly r(f_);
  r.c_.assign(c_.size() + k, 0);
  std::copy(c_.begin(), c_.end(), r.c_.begin() + k);
  return r;
}

void Poly::divrem(const Poly& a, const Poly& b, Poly& quo, Poly& rem) {
  if (b.is_zero()) fail(Err::DivisionByZero, "polynomial division by zero");
  const auto& f = a.f_;
  rem = a;
  quo = Poly(f);
  if (a.deg() < b.deg()) return;
  quo.c_.assign(a.deg() - b.deg() + 1, 0);
  Elt lead_inv = f->inv(b.lead());
  for (int i = a.deg(); i >= b.deg(); --i) {
    Elt c = rem.coeff(i);
    if (!c) continue;
    Elt s = f->mul(c, lead_inv);
    quo.c_[i - b.deg()] = s;
    for (int j = 0; j <= b.deg(); ++j) {
      size_t k = i - b.deg() + j;
      rem.c_[k] = f->sub(rem.coeff(k), f->mul(s, b.coeff(j)));
    }
  }
  quo.normalize();
  rem.normalize();
}

Poly Poly::operator/(const Poly& o) const {
  Poly q, r;
  divrem(*this, o, q, r);
  return q;
}

Poly Poly::operator%(const Poly& o) const {
  Poly q, r;
  divrem(*this, o, q, r);
  return r;
}

bool Poly::divides(const Poly& a) const {
  if (is_zero()) return a.is_zero();
  return (a % *this).is_zero();
}

Poly Poly::monic() const {
  if (is_zero() || lead() == 1) return *this;
  return scaled(f_->inv(lead()));
}

Poly Poly::derivative() const {
  Poly r(f_);
  if (deg() < 1) return r;
  r.c_.resize(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) {
    Elt m = f_->from_int(static_cast<int64_t>(i % f_->p()));
    r.c_[i - 1] = f_->mul(c_[i], m);
  }
  r.normalize();
  return r;
}

Elt Poly::eval(Elt x) const {
  Elt r = 0;
  for (size_t i = c_.size(); i-- > 0;) r = f_->add(f_->mul(r, x), c_[i]);
  return r;
}

Poly Poly::coeff_frobenius(uint32_t k) const {
  Poly r(f_);
  r.c_.resize(c_.size());
  uint64_t e = 1;
  for (uint32_t i = 0; i < k; ++i) e *= f_->p();
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = f_->pow(c_[i], e);
  r.normalize();
  return r;
}

Poly Poly::reversed(int deg_hint) const {
  int d = deg_hint >= 0 ? deg_hint : deg();
  Poly r(f_);
  if (is_zero()) return r;
  r.c_.assign(d + 1, 0);
  for (int i = 0; i <= deg() && i <= d; ++i) r.c_[d - i] = c_[i];
  r.normalize();
  return r;
}

Poly Poly::compose(const Poly& g) const {
  Poly r(f_);
  for (size_t i = c_.size(); i-- > 0;) {
    r = r * g;
    r = r + Poly::constant(f_, c_[i]);
  }
  return r;
}

std::string Poly::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = c_.size(); i-- > 0;) {
    if (!c_[i]) continue;
    if (!first) os << " + ";
    first = false;
    auto digits = f_->repr(c_[i]);
    bool scalar = true;
    for (size_t j = 1; j < digits.size(); ++j)
      if (digits[j]) scalar = false;
    std::string cs;
    if (scalar) {
      cs = std::to_string(digits.empty() ? 0 : digits[0]);
    } else {
      cs = "(";
      for (size_t j = 0; j < digits.size(); ++j) {
        if (j) cs += ",";
        cs += std::to_string(digits[j]);
      }
      cs += ")";
    }
    if (i == 0) {
      os << cs;
    } else {
      if (cs != "1") os << cs << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = x % y;
    x = y;
    y = r;
  }
  return x.monic();
}

Poly pow_mod(const Poly& base, uint64_t e, const Poly& mod) {
  Poly r = Poly::constant(base.field(), 1) % mod;
  Poly b = base % mod;
  while (e) {
    if (e & 1) r = (r * b) % mod;
    b = (b * b) % mod;
    e >>= 1;
  }
  return r;
}

namespace {

// x^{q^k} mod f via repeated q-power
Poly frobenius_power(const Poly& f, const Poly& xq, uint32_t k) {
  // xq = x^q mod f; compute x^{q^k} mod f by composing
  Poly r = Poly::monomial(f.field(), 1, 1) % f;
  Poly cur = xq;
  for (uint32_t i = 0; i < k; ++i) {
    // r -> r(x^q) mod f  == r evaluated at xq
    Poly acc(f.field());
    for (size_t j = r.coeffs().size(); j-- > 0;) {
      acc = (acc * xq) % f;
      acc = acc + Poly::constant(f.field(), r.coeff(j));
    }
    r = acc;
  }
  return r;
}

}  // namespace

bool is_irreducible(const Poly& f0) {
  Poly f = f0.monic();
  int n = f.deg();
  if (n <= 0) return false;
  if (n == 1) return true;
  uint64_t q = f.field()->q();
  Poly x = Poly::monomial(f.field(), 1, 1);
  Poly xq = pow_mod(x, q, f);
  // x^{q^n} == x mod f
  Poly xqn = frobenius_power(f, xq, n);
  if (xqn != x % f) return false;
  // gcd(x^{q^{n/ell}} - x, f) == 1 for prime divisors ell of n
  for (uint32_t ell : prime_factors_u64(n)) {
    Poly xqk = frobenius_power(f, xq, n / ell);
    if (gcd(xqk - x, f).deg() != 0) return false;
  }
  return true;
}

bool is_squarefree(const Poly& f) {
  if (f.is_zero()) return false;
  Poly d = f.derivative();
  if (d.is_zero()) return f.deg() == 0;
  return gcd(f, d).deg() == 0;
}

namespace {

// p-th root of a polynomial with zero derivative: f(x) = g(x^p)
Poly pth_root(const Poly& f) {
  auto field = f.field();
  uint32_t p = field->p();
  uint64_t e = 1;
  for (uint32_t i = 0; i + 1 < field->n(); ++i) e *= p;  // a^{p^{n-1}} = a^{1/p}
  std::vector<Elt> c;
  for (int i = 0; i <= f.deg(); i += p) c.push_back(field->pow(f.coeff(i), e));
  return Poly(field, c);
}

// deterministic splitter sequence for equal-degree factorization
struct SplitSeq {
  uint64_t state;
  explicit SplitSeq(uint64_t seed) : state(seed * 6364136223846793005ULL + 1) {}
  uint64_t next() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return state >> 16;
  }
};

void equal_degree_split(const Poly& f, int d, std::vector<Poly>& out,
                        SplitSeq& seq) {
  if (f.deg() == d) {
    out.push_back(f.monic());
    return;
  }
  auto field = f.field();
  uint64_t q = field->q();
  // q^d can overflow for large residue fields; use successive squaring on
  // the exponent (q^d - 1)/2 via pow chain instead of a single uint64.
  Poly split(field);
  while (true) {
    // deterministic "random" polynomial of degree < deg f
    std::vector<Elt> c(f.deg());
    for (auto& x : c) x = static_cast<Elt>(seq.next() % q);
    Poly a(field, c);
    if (a.deg() < 1) continue;
    Poly g = gcd(a, f);
    if (g.deg() > 0 && g.deg() < f.deg()) {
      split = g;
      break;
    }
    if (field->p() == 2) {
      // trace map: a + a^2 + a^4 + ... (q^d/2 terms structure)
      Poly t(field), cur = a % f;
      uint32_t bits = field->n() * static_cast<uint32_t>(d);
      for (uint32_t i = 0; i < bits; ++i) {
        t = t + cur;
        cur = (cur * cur) % f;
      }
      g = gcd(t, f);
    } else {
      // a^{(q^d-1)/2} mod f, exponent computed in two stages to avoid
      // overflow: b = a^{(q-1)/2} * ... use ladder over d limbs of q.
      Poly b = a % f;
      // compute a^{q^d} step by step while accumulating a^{(q^d-1)/2}:
      // simpler: exponent (q^d-1)/2 = (q-1)/2 * (q^{d-1}+...+1) + ...
      // do it directly with big exponent via repeated squaring over
      // a chain: e = (q^d - 1) / 2 as __int128 when it fits, else split.
      unsigned __int128 e = 1;
      for (int i = 0; i < d; ++i) e *= q;
      e = (e - 1) / 2;
      Poly r = Poly::constant(field, 1);
      Poly base = b;
      while (e) {
        if (e & 1) r = (r * base) % f;
        base = (base * base) % f;
        e >>= 1;
      }
      g = gcd(r - Poly::constant(field, 1), f);
    }
    if (g.deg() > 0 && g.deg() < f.deg()) {
      split = g;
      break;
    }
  }
  equal_degree_split(split, d, out, seq);
  equal_degree_split((f / split).monic(), d, out, seq);
}

void factor_squarefree(const Poly& f, uint32_t mult,
                       std::vector<PolyFactor>& out) {
  auto field = f.field();
  uint64_t q = field->q();
  Poly x = Poly::monomial(field, 1, 1);
  Poly rem = f.monic();
  Poly xq = pow_mod(x, q, rem);
  Poly xqk = x % rem;
  int d = 0;
  while (rem.deg() > 0 && rem.deg() > 2 * d) {
    ++d;
    // advance xqk = x^{q^d} mod rem
    {
      Poly acc(field);
      for (size_t j = xqk.coeffs().size(); j-- > 0;) {
        acc = (acc * xq) % rem;
        acc = acc + Poly::constant(field, xqk.coeff(j));
      }
      xqk = acc;
    }
    Poly g = gcd(xqk - x, rem);
    if (g.deg() > 0) {
      std::vector<Poly> pieces;
      SplitSeq seq(q * 1000003ULL + uint64_t(g.deg()) * 101 + d);
      equal_degree_split(g, d, pieces, seq);
      for (auto& piece : pieces) out.push_back({piece, mult});
      rem = (rem / g).monic();
      xq = pow_mod(x, q, rem);
      xqk = pow_mod(x, 1, rem);
      for (int i = 0; i < d; ++i) {
        Poly acc(field);
        for (size_t j = xqk.coeffs().size(); j-- > 0;) {
          acc = (acc * xq) % rem;
          acc = acc + Poly::constant(field, xqk.coeff(j));
        }
        xqk = acc;
      }
    }
  }
  if (rem.deg() > 0) out.push_back({rem.monic(), mult});
}

}  // namespace

std::vector<PolyFactor> poly_factor(const Poly& f0) {
  if (f0.is_zero()) fail(Err::ZeroPolynomial, "cannot factor zero");
  std::vector<PolyFactor> out;
  if (f0.deg() == 0) return out;
  auto field = f0.field();
  uint32_t p = field->p();

  // squarefree decomposition (Yun, adapted to char p)
  struct Item {
    Poly f;
    uint32_t mult;
  };
  std::vector<Item> stack{{f0.monic(), 1}};
  std::vector<Item> squarefree_parts;
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    if (it.f.deg() <= 0) continue;
    Poly d = it.f.derivative();
    if (d.is_zero()) {
      stack.push_back({pth_root(it.f), it.mult * p});
      continue;
    }
    Poly g = gcd(it.f, d);
    Poly w = (it.f / g).monic();  // product of factors with mult not div by p
    uint32_t m = 1;
    while (w.deg() > 0) {
      Poly y = gcd(w, g);
      Poly part = (w / y).monic();
      if (part.deg() > 0) squarefree_parts.push_back({part, it.mult * m});
      w = y;
      g = (g / y).monic();
      ++m;
    }
    if (g.deg() > 0) stack.push_back({g, it.mult});  // p | multiplicity part
  }

  for (auto& part : squarefree_parts)
    factor_squarefree(part.f, part.mult, out);

  // merge duplicates, then deterministic order: degree, then coeffs
  std::sort(out.begin(), out.end(), [](const PolyFactor& a, const PolyFactor& b) {
    if (a.factor.deg() != b.factor.deg()) return a.factor.deg() < b.factor.deg();
    return a.factor.coeffs() < b.factor.coeffs();
  });
  std::vector<PolyFactor> merged;
  for (auto& pf : out) {
    if (!merged.empty() && merged.back().factor == pf.factor)
      merged.back().multiplicity += pf.multiplicity;
    else
      merged.push_back(pf);
  }
  return merged;
}

std::vector<Elt> poly_roots(const Poly& f) {
  std::vector<Elt> roots;
  if (f.is_zero()) fail(Err::ZeroPolynomial, "roots of zero polynomial");
  auto field = f.field();
  if (f.deg() < 1) return roots;
  uint64_t q = field->q();
  if (q <= 4096 && uint64_t(f.deg()) * q < 200000) {
    for (Elt x = 0; x < q; ++x)
      if (f.eval(x) == 0) roots.push_back(x);
    return roots;
  }
  Poly x = Poly::monomial(field, 1, 1);
  Poly g = gcd(pow_mod(x, q, f) - x, f);
  if (g.deg() < 1) return roots;
  for (auto& pf : poly_factor(g))
    if (pf.factor.deg() == 1) roots.push_back(field->neg(pf.factor.coeff(0)));
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace ellsurf
