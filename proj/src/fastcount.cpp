#include "ellsurf/fastcount.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numeric>
#include <vector>

#include "ellsurf/count.hpp"

namespace ellsurf {

namespace {
constexpr int32_t kEmpty = INT32_MIN;
constexpr int64_t LZ = Field::LOG_ZERO;
}

TraceCache::TraceCache(FieldPtr F) : F_(std::move(F)), q_(F_->q()) {
  if (!F_->tabled())
    fail(Err::FieldTooLarge, "TraceCache requires a tabled field");
  if (F_->p() < 5)
    fail(Err::UnsupportedCharacteristic, "TraceCache requires p >= 5");
  cells_ = std::vector<std::atomic<int32_t>>(6 * (q_ + 2));
  for (auto& c : cells_) c.store(kEmpty, std::memory_order_relaxed);
}

size_t TraceCache::cell_index(Elt A, Elt B) const {
  const Field& F = *F_;
  uint64_t m = q_ - 1;
  if (A == 0) {
    uint64_t g6 = std::gcd<uint64_t>(6, m);
    return 0 * 6 + static_cast<size_t>(F.elt_log(B) % g6);
  }
  if (B == 0) {
    uint64_t g4 = std::gcd<uint64_t>(4, m);
    return 1 * 6 + static_cast<size_t>(F.elt_log(A) % g4);
  }
  int64_t la = F.elt_log(A), lb = F.elt_log(B);
  Elt A3 = F.elt_exp((3 * la) % static_cast<int64_t>(m));
  Elt d = F.add(F.mul(F.from_int(4), A3),
                F.mul(F.from_int(27), F.mul(B, B)));
  Elt j = F.div(F.mul(F.from_int(6912), A3), d);
  size_t bucket = static_cast<size_t>((la + lb) & 1);
  return (static_cast<size_t>(j) + 2) * 6 + bucket;
}

namespace {

// quadratic-twist mate of a cell (same j row, twisted class)
size_t twist_index(const Field& F, size_t idx) {
  uint64_t m = F.q() - 1;
  size_t row = idx / 6, b = idx % 6;
  if (row == 0) {
    uint64_t g6 = std::gcd<uint64_t>(6, m);
    return 0 * 6 + (b + 3 % g6) % g6;
  }
  if (row == 1) {
    uint64_t g4 = std::gcd<uint64_t>(4, m);
    return 1 * 6 + (b + 2 % g4) % g4;
  }
  return row * 6 + (b ^ 1);
}

// ---- short-curve group law entirely in the discrete-log domain ----
// elements are logs with LOG_ZERO denoting the field zero

struct LogEC {
  const Field& F;
  int64_t m;     // q - 1
  int64_t lneg;  // log(-1)
  int64_t lA, lB;
  int64_t l2inv, l3;  // log(1/2), log(3)
  uint64_t rng;

  LogEC(const Field& f, Elt A, Elt B)
      : F(f),
        m(static_cast<int64_t>(f.q() - 1)),
        lneg(m / 2),
        lA(f.elt_log(A)),
        lB(f.elt_log(B)),
        l2inv(f.elt_log(f.inv(f.from_int(2)))),
        l3(f.elt_log(f.from_int(3))),
        rng(A * 2654435761ULL + B * 40503ULL + 99991ULL) {}

  int64_t red(int64_t a) const { return a >= m ? a - m : a; }
  int64_t lmul(int64_t a, int64_t b) const {
    return (a == LZ || b == LZ) ? LZ : red(a + b);
  }
  int64_t lsq(int64_t a) const { return a == LZ ? LZ : red(a + a); }
  int64_t linv(int64_t a) const { return a == 0 ? 0 : m - a; }
  int64_t lnegate(int64_t a) const { return a == LZ ? LZ : red(a + lneg); }
  int64_t ladd(int64_t a, int64_t b) const { return F.log_add(a, b); }
  int64_t lsub(int64_t a, int64_t b) const { return ladd(a, lnegate(b)); }

  struct Pt {
    bool inf = true;
    int64_t lx = LZ, ly = LZ;
  };

  bool eq(const Pt& P, const Pt& Q) const {
    if (P.inf || Q.inf) return P.inf == Q.inf;
    return P.lx == Q.lx && P.ly == Q.ly;
  }

  Pt neg(const Pt& P) const {
    return P.inf ? P : Pt{false, P.lx, lnegate(P.ly)};
  }

  Pt add(const Pt& P, const Pt& Q) const {
    if (P.inf) return Q;
    if (Q.inf) return P;
    int64_t lam;
    if (P.lx != Q.lx) {
      int64_t num = lsub(Q.ly, P.ly);
      int64_t den = lsub(Q.lx, P.lx);
      lam = num == LZ ? LZ : red(num + linv(den));
    } else {
      if (P.ly == LZ || P.ly != Q.ly) return {};  // Q = -P
      // lambda = (3 x^2 + A) / (2 y)
      int64_t num = ladd(lmul(l3, lsq(P.lx)), lA);
      if (num == LZ) lam = LZ;
      else lam = red(red(num + l2inv) + linv(P.ly));
    }
    int64_t lx3 = lsub(lsub(lsq(lam), P.lx), Q.lx);
    int64_t ly3 = lsub(lmul(lam, lsub(P.lx, lx3)), P.ly);
    return {false, lx3, ly3};
  }

  Pt dbl(const Pt& P) const { return add(P, P); }

  Pt mul(uint64_t k, Pt P) const {
    Pt r{};
    while (k) {
      if (k & 1) r = add(r, P);
      P = dbl(P);
      k >>= 1;
    }
    return r;
  }

  uint64_t next() {
    rng = rng * 6364136223846793005ULL + 1442695040888963407ULL;
    return rng >> 11;
  }

  Pt random_point() {
    while (true) {
      int64_t lx = static_cast<int64_t>(next() % static_cast<uint64_t>(m + 1));
      if (lx == m) lx = LZ;  // x = 0
      int64_t lx3 = lx == LZ ? LZ : red(3 * lx % m);
      int64_t rhs = ladd(ladd(lx3, lmul(lA, lx)), lB);
      if (rhs == LZ) return {false, lx, LZ};  // y = 0
      if (!(rhs & 1)) return {false, lx, rhs / 2};
    }
  }
};

// smallest verified k in [lo, hi] with kP = O, or 0
uint64_t log_multiple_in_window(const LogEC& E, const LogEC::Pt& P,
                                uint64_t lo, uint64_t hi) {
  uint64_t len = hi - lo + 1;
  uint64_t s = static_cast<uint64_t>(std::ceil(std::sqrt((double)len)));
  std::vector<std::pair<int64_t, std::pair<uint64_t, int64_t>>> baby;
  baby.reserve(s);
  LogEC::Pt cur{};
  for (uint64_t i = 0; i < s; ++i) {
    if (!cur.inf) {
      baby.push_back({cur.lx, {i, cur.ly}});
    } else if (i > 0) {
      uint64_t k = (lo + i - 1) / i * i;
      return k <= hi ? k : 0;
    }
    cur = E.add(cur, P);
  }
  std::sort(baby.begin(), baby.end());
  LogEC::Pt G = E.mul(s, P);
  LogEC::Pt T = E.mul(lo, P);
  uint64_t best = 0;
  for (uint64_t j = 0; lo + j * s <= hi + s; ++j) {
    uint64_t base = lo + j * s;
    if (T.inf) {
      if (base >= lo && base <= hi && E.mul(base, P).inf &&
          (best == 0 || base < best))
        best = base;
    } else {
      auto it = std::lower_bound(
          baby.begin(), baby.end(), T.lx,
          [](const auto& a, int64_t key) { return a.first < key; });
      for (; it != baby.end() && it->first == T.lx; ++it) {
        uint64_t i = it->second.first;
        for (uint64_t k : {base - std::min(base, i), base + i}) {
          if (k >= lo && k <= hi && E.mul(k, P).inf)
            if (best == 0 || k < best) best = k;
        }
      }
      if (best) return best;
    }
    T = E.add(T, G);
  }
  return best;
}

uint64_t log_order_from_multiple(const LogEC& E, const LogEC::Pt& P,
                                 uint64_t k) {
  uint64_t ord = k, rest = k;
  for (uint64_t d = 2; d * d <= rest; ++d) {
    while (rest % d == 0) rest /= d;
    while (ord % d == 0 && E.mul(ord / d, P).inf) ord /= d;
  }
  if (rest > 1)
    while (ord % rest == 0 && E.mul(ord / rest, P).inf) ord /= rest;
  return ord;
}

}  // namespace

int32_t TraceCache::trace(Elt A, Elt B) {
  lookups_.fetch_add(1, std::memory_order_relaxed);
  size_t idx = cell_index(A, B);
  int32_t cached = cells_[idx].load(std::memory_order_relaxed);
  if (cached != kEmpty) return cached;
  misses_.fetch_add(1, std::memory_order_relaxed);
  int64_t a = q_ <= enum_threshold_ ? trace_by_enumeration(A, B)
                                    : trace_by_bsgs(A, B);
  cells_[idx].store(static_cast<int32_t>(a), std::memory_order_relaxed);
  size_t twin = twist_index(*F_, idx);
  if (twin != idx)
    cells_[twin].store(static_cast<int32_t>(-a), std::memory_order_relaxed);
  return static_cast<int32_t>(a);
}

int64_t TraceCache::trace_by_enumeration(Elt A, Elt B) const {
  const Field& F = *F_;
  int64_t m = static_cast<int64_t>(q_ - 1);
  int64_t sum = F.chi(B);  // x = 0 term
  int64_t la = F.elt_log(A), lb = (B == 0) ? LZ : F.elt_log(B);
  for (int64_t k = 0; k < m; ++k) {
    int64_t l3 = 3 * k % m;
    int64_t lax = (A == 0) ? LZ : (la + k) % m;
    int64_t l = F.log_add(l3, lax);
    l = F.log_add(l, lb);
    if (l != LZ) sum += (l & 1) ? -1 : 1;
  }
  return -sum;
}

int64_t TraceCache::trace_by_bsgs(Elt A, Elt B) const {
  const Field& F = *F_;
  uint64_t q = q_;
  uint64_t w = static_cast<uint64_t>(std::floor(2.0 * std::sqrt((double)q)));
  uint64_t lo = q + 1 - w, hi = q + 1 + w;

  // quadratic twist by the generator (a non-square)
  Elt g = F.elt_exp(1);
  Elt g2 = F.mul(g, g), g3 = F.mul(g2, g);
  LogEC curve(F, A, B), twist(F, F.mul(A, g2), F.mul(B, g3));

  uint64_t L_curve = 1, L_twist = 1;
  for (int round = 0; round < 60; ++round) {
    bool use_twist = round & 1;
    LogEC& C = use_twist ? twist : curve;
    uint64_t& L = use_twist ? L_twist : L_curve;
    LogEC::Pt P = C.random_point();
    uint64_t k = log_multiple_in_window(C, P, lo, hi);
    if (k == 0) fail(Err::InternalError, "BSGS found no annihilator");
    uint64_t ord = log_order_from_multiple(C, P, k);
    L = std::lcm(L, ord);
    uint64_t viable = 0;
    int viable_count = 0;
    for (uint64_t first = (lo + L_curve - 1) / L_curve * L_curve;
         first <= hi; first += L_curve) {
      uint64_t Nt = 2 * q + 2 - first;
      if (Nt % L_twist == 0) {
        viable = first;
        if (++viable_count > 1) break;
      }
    }
    if (viable_count == 1)
      return static_cast<int64_t>(q + 1) - static_cast<int64_t>(viable);
  }
  fail(Err::InternalError, "BSGS order ambiguous");
}

namespace {
std::mutex g_tc_mutex;
std::map<const Field*, std::unique_ptr<TraceCache>>& tc_registry() {
  static std::map<const Field*, std::unique_ptr<TraceCache>> reg;
  return reg;
}
}  // namespace

TraceCache& TraceCache::for_field(const FieldPtr& F) {
  std::lock_guard<std::mutex> lk(g_tc_mutex);
  auto it = tc_registry().find(F.get());
  if (it != tc_registry().end()) return *it->second;
  auto tc = std::make_unique<TraceCache>(F);
  auto* raw = tc.get();
  tc_registry().emplace(F.get(), std::move(tc));
  return *raw;
}

}  // namespace ellsurf
