#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ellsurf {

// Error codes shared across the library.  Every throwing path raises
// Error with one of these tags so callers (CLI, bindings, tests) can
// dispatch on the condition rather than parse message strings.
enum class Err {
  NotPrime,
  ReducibleModulus,
  DegreeMismatch,
  MixedFields,
  DivisionByZero,
  ZeroPolynomial,
  SingularCurve,
  ZeroScaling,
  InexactTransform,
  UnsupportedCharacteristic,
  IsotrivialOrSmooth,
  PoleAtPlace,
  FieldTooLarge,
  NoGoodPlaces,
  CapExceeded,
  PPartPresent,
  UnsupportedU,
  UIsAllOfC,
  NotMultiplicative,
  AmbiguousAction,
  PrecisionGuardFailed,
  NegativeDegree,
  VanishesAtPoint,
  ParseError,
  SingularInput,
  NonsingularInput,
  InternalError,
};

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) {
  throw Error(code, what);
}

const char* err_name(Err code);

// Global cap on field cardinalities, settable via ELLSURF_MAX_Q.
uint64_t max_field_cardinality();

// An element of F_{p^n} is its coefficient vector over F_p packed in
// base p: x = sum c_i u^i  <->  packed value sum c_i p^i.  Packing is a
// bijection onto [0, q), 0 is the zero element and 1 the identity.
using Elt = uint64_t;

class Field;
using FieldPtr = std::shared_ptr<const Field>;

// F_{p^n} = F_p[u]/(modulus).  Immutable after construction.  Fields
// with q below the table threshold carry discrete-log (Zech) tables and
// do all multiplicative arithmetic through them; larger fields fall
// back to digit-vector arithmetic mod the modulus.
class Field {
 public:
  // Canonical modulus: lexicographically smallest monic irreducible of
  // degree n, coefficients compared low-to-high.
  static FieldPtr make(uint32_t p, uint32_t n);
  static FieldPtr make(uint32_t p, uint32_t n,
                       const std::vector<uint32_t>& modulus);

  uint32_t p() const { return p_; }
  uint32_t n() const { return n_; }
  uint64_t q() const { return q_; }
  const std::vector<uint32_t>& modulus() const { return modulus_; }

  bool tabled() const { return tabled_; }

  // --- element arithmetic on packed values ---
  Elt add(Elt a, Elt b) const;
  Elt sub(Elt a, Elt b) const;
  Elt neg(Elt a) const;
  Elt mul(Elt a, Elt b) const;
  Elt inv(Elt a) const;
  Elt div(Elt a, Elt b) const { return mul(a, inv(b)); }
  Elt pow(Elt a, uint64_t e) const;
  Elt from_int(int64_t c) const;  // prime-subfield embedding
  Elt frobenius(Elt a) const { return pow(a, p_); }

  std::vector<uint32_t> repr(Elt a) const;
  Elt from_repr(const std::vector<uint32_t>& coeffs) const;

  // Quadratic character: 0 at 0, +1 on squares, -1 on non-squares.
  int chi(Elt a) const;
  // Square root; returns false when a is a non-square.
  bool sqrt(Elt a, Elt& root) const;

  // Multiplicative generator (tabled fields only).
  Elt generator() const;

  // --- log-domain access for hot loops (tabled fields only) ---
  // log(0) = LOG_ZERO sentinel; exp is indexed mod q-1.
  static constexpr int64_t LOG_ZERO = -1;
  int64_t elt_log(Elt a) const { return log_[a]; }
  Elt elt_exp(int64_t k) const { return exp_[k]; }
  // zech[k] = log(1 + g^k), LOG_ZERO when 1 + g^k = 0.
  int64_t zech(int64_t k) const { return zech_[k]; }
  // log(g^a + g^b) without leaving the log domain.
  int64_t log_add(int64_t la, int64_t lb) const;

  ~Field() = default;
  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

 private:
  Field() = default;
  void build_tables();
  Elt mul_generic(Elt a, Elt b) const;
  std::vector<uint32_t> unpack(Elt a) const;
  Elt pack(const std::vector<uint32_t>& d) const;

  uint32_t p_ = 0;
  uint32_t n_ = 0;
  uint64_t q_ = 0;
  std::vector<uint32_t> modulus_;
  bool tabled_ = false;
  Elt gen_ = 0;
  std::vector<Elt> exp_;      // size q-1
  std::vector<int64_t> log_;  // size q
  std::vector<int64_t> zech_; // size q-1
};

// Dense univariate polynomial over a Field; coefficients low-to-high
// with no trailing zeros.  deg(0) = -1.
class Poly {
 public:
  Poly() = default;
  explicit Poly(FieldPtr f) : f_(std::move(f)) {}
  Poly(FieldPtr f, std::vector<Elt> coeffs);
  static Poly zero(FieldPtr f) { return Poly(std::move(f)); }
  static Poly constant(FieldPtr f, Elt c);
  static Poly from_ints(FieldPtr f, const std::vector<int64_t>& coeffs);
  // t, or t shifted: monomial c * t^k
  static Poly monomial(FieldPtr f, Elt c, size_t k);

  const FieldPtr& field() const { return f_; }
  int deg() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  Elt coeff(size_t i) const { return i < c_.size() ? c_[i] : 0; }
  Elt lead() const { return c_.empty() ? 0 : c_.back(); }
  const std::vector<Elt>& coeffs() const { return c_; }

  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly scaled(Elt c) const;
  Poly shifted(size_t k) const;  // * t^k

  // division with remainder; divisor must be nonzero
  static void divrem(const Poly& a, const Poly& b, Poly& quo, Poly& rem);
  Poly operator/(const Poly& o) const;
  Poly operator%(const Poly& o) const;
  bool divides(const Poly& a) const;  // this | a

  Poly monic() const;
  Poly derivative() const;
  Elt eval(Elt x) const;
  // coefficient-wise Frobenius a_i -> a_i^{p^k}
  Poly coeff_frobenius(uint32_t k = 1) const;
  Poly reversed(int deg_hint = -1) const;  // t^d * f(1/t)
  Poly compose(const Poly& g) const;       // f(g(t))

  std::string str(const std::string& var = "t") const;

 private:
  void normalize();
  FieldPtr f_;
  std::vector<Elt> c_;
};

Poly gcd(const Poly& a, const Poly& b);
Poly pow_mod(const Poly& base, uint64_t e, const Poly& mod);

bool is_irreducible(const Poly& f);
bool is_squarefree(const Poly& f);

// Factorization into monic irreducibles, deterministic output order
// (by degree, then lexicographic coefficient order low-to-high).
struct PolyFactor {
  Poly factor;
  uint32_t multiplicity;
};
std::vector<PolyFactor> poly_factor(const Poly& f);

// All roots in the coefficient field, sorted by packed value.
std::vector<Elt> poly_roots(const Poly& f);

bool is_prime_u32(uint32_t m);

}  // namespace ellsurf
