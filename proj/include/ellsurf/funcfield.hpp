#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ellsurf/gf.hpp"

namespace ellsurf {

inline constexpr int64_t kValInfinity = std::numeric_limits<int64_t>::max();

// A closed point of P^1 over F_q: a monic irreducible polynomial, or
// the point at infinity (the place s = 0 in the chart t = 1/s).
struct Place {
  Poly pi;                // monic irreducible; unused when infinite
  bool infinite = false;
  uint32_t degree = 1;
  // lex-smallest root of pi in the canonical model of F_{q^degree};
  // only present when that field carries tables.
  Elt theta = 0;
  bool has_theta = false;

  static Place infinity(const FieldPtr& base);
  static Place finite(const Poly& pi);

  bool operator==(const Place& o) const;
  bool operator<(const Place& o) const;
  std::string str() const;
};

// Embedding data for F_q inside F_{q^d} (canonical models both).
struct Extension {
  FieldPtr base;
  FieldPtr ext;
  uint32_t d = 1;
  Elt base_root = 0;        // image of the base field's generator u
  std::vector<Elt> embed_table;

  Elt embed(Elt a) const;
  Elt frob_q(Elt a) const;  // x -> x^q in ext
  // evaluate a base-coefficient polynomial at a point of ext
  Elt eval_poly(const Poly& f, Elt x) const;
};

// Cached per (base field, d).  Requires the extension to fit the table
// limit when d > 1 (all pipeline uses do).
const Extension& extension_of(const FieldPtr& base, uint32_t d);

// All places of P^1_{F_q} with the given degree: the monic irreducibles
// of degree d, plus infinity exactly when d = 1.  Deterministic order:
// finite places sorted by coefficient tuple, infinity last.
std::vector<Place> places_of_degree(const FieldPtr& base, uint32_t d);

// Cached variant shared across curves of one sweep.
const std::vector<Place>& places_table(const FieldPtr& base, uint32_t d);

// Elements of F_q(t), kept in lowest terms with monic denominator.
class RationalFunction {
 public:
  RationalFunction() = default;
  explicit RationalFunction(Poly num);
  RationalFunction(Poly num, Poly den);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_poly() const { return den_.is_one(); }
  const FieldPtr& field() const { return num_.field(); }

  RationalFunction operator+(const RationalFunction& o) const;
  RationalFunction operator-(const RationalFunction& o) const;
  RationalFunction operator-() const;
  RationalFunction operator*(const RationalFunction& o) const;
  RationalFunction operator/(const RationalFunction& o) const;
  bool operator==(const RationalFunction& o) const;

  std::string str() const;

 private:
  void reduce();
  Poly num_, den_;
};

int64_t valuation(const RationalFunction& x, const Place& v);
int64_t valuation(const Poly& x, const Place& v);

struct ResidueValue {
  FieldPtr field;  // canonical model of the residue field
  Elt value = 0;
};

// Image of x in the residue field at v; requires valuation >= 0.
ResidueValue residue(const RationalFunction& x, const Place& v);

// Arithmetic in F_q[t]/(pi) without building the canonical model;
// used where the residue field exceeds the table limit.
class ResidueRing {
 public:
  explicit ResidueRing(Poly pi);
  const Poly& pi() const { return pi_; }
  const FieldPtr& base() const { return pi_.field(); }
  // residue cardinality q^deg(pi) as long double (may be large)
  Poly reduce(const Poly& a) const { return a % pi_; }
  Poly add(const Poly& a, const Poly& b) const { return (a + b) % pi_; }
  Poly mul(const Poly& a, const Poly& b) const { return (a * b) % pi_; }
  Poly inv(const Poly& a) const;
  Poly pow(const Poly& a, unsigned __int128 e) const;
  bool is_zero(const Poly& a) const { return (a % pi_).is_zero(); }
  // quadratic character of a nonzero residue (0 for zero)
  int chi(const Poly& a) const;
  unsigned __int128 card() const;

 private:
  Poly pi_;
};

}  // namespace ellsurf
