#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ellsurf/funcfield.hpp"
#include "ellsurf/wmodel.hpp"

namespace ellsurf {

enum class KodairaSymbol {
  I0,
  In,
  II,
  III,
  IV,
  I0star,
  Instar,
  IVstar,
  IIIstar,
  IIstar,
};

struct KodairaType {
  KodairaSymbol sym = KodairaSymbol::I0;
  uint32_t n = 0;  // the index for In / In*

  // geometric component count of the regular fiber
  uint32_t components() const;
  std::string str() const;
  bool operator==(const KodairaType& o) const {
    return sym == o.sym && n == o.n;
  }
};

enum class ReductionClass { Good, SplitMult, NonsplitMult, Additive };

// Everything Tate's algorithm knows about one place.
struct LocalData {
  Place place;
  uint64_t q_base = 0;  // cardinality of the constant field
  KodairaType kodaira;
  int64_t v_delta_min = 0;
  uint32_t conductor_exponent = 0;
  ReductionClass reduction = ReductionClass::Good;
  // action of the q^deg-power Frobenius on geometric components;
  // component 0 is the one meeting the zero section
  std::vector<uint32_t> component_perm;
  // orbit sizes of that action, identity-component orbit first
  std::vector<uint32_t> orbit_sizes;
  // orbit sizes excluding the identity component
  std::vector<uint32_t> orbit_sizes_nonid;
  int64_t trace = 0;  // Frobenius trace over kappa(v), good fibers only

  uint64_t q_place() const {
    uint64_t r = 1;
    for (uint32_t i = 0; i < place.degree; ++i) r *= q_base;
    return r;
  }
};

// Run Tate's algorithm at one place (p >= 5); minimizes internally.
LocalData tate_local(const WeierstrassCurve& E, const Place& v);

enum class SplitKind { Split, Nonsplit };

// The S_0 / S_1 distinction; NotMultiplicative unless kodaira = In.
SplitKind split_or_nonsplit(const LocalData& data);

// The permutation on the geometric components (identity-first labels).
const std::vector<uint32_t>& component_frobenius(const LocalData& data);

// #E_v(F_{q^{m deg v}}) of the regular-model fiber: each component is a
// rational curve (bad case) or the elliptic fiber (good case), counted
// through the Frobenius action and the intersection pattern.
int64_t fiber_point_count(const LocalData& data, uint32_t m);

// Sum of orbit sizes dividing m (number of components fixed by sigma^m).
uint32_t fixed_components(const LocalData& data, uint32_t m);

// Order and exponent of the geometric component group Phi(F̄_q).
uint64_t component_group_order(const KodairaType& k);
uint64_t component_group_exponent(const KodairaType& k);

}  // namespace ellsurf
