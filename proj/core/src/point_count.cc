#include "twistvan/point_count.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "twistvan/curve.h"
#include "twistvan/error.h"

namespace twistvan {
namespace modp {

uint64_t Pow(uint64_t base, uint64_t exp, uint64_t p) {
  uint64_t result = 1 % p;
  base %= p;
  while (exp) {
    if (exp & 1) result = Mul(result, base, p);
    base = Mul(base, base, p);
    exp >>= 1;
  }
  return result;
}

uint64_t Inverse(uint64_t a, uint64_t p) {
  int64_t t = 0, new_t = 1;
  int64_t r = static_cast<int64_t>(p), new_r = static_cast<int64_t>(a % p);
  if (new_r == 0) Fail(ErrorKind::kDomain, "modular inverse of 0");
  while (new_r != 0) {
    int64_t q = r / new_r;
    int64_t tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  return static_cast<uint64_t>(t < 0 ? t + static_cast<int64_t>(p) : t);
}

int Legendre(uint64_t a, uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  return Pow(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

uint64_t Sqrt(uint64_t a, uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  if (p % 4 == 3) return Pow(a, (p + 1) / 4, p);
  uint64_t q = p - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  uint64_t z = 2;
  while (Legendre(z, p) != -1) ++z;
  uint64_t m = static_cast<uint64_t>(s);
  uint64_t c = Pow(z, q, p);
  uint64_t t = Pow(a, q, p);
  uint64_t r = Pow(a, (q + 1) / 2, p);
  while (t != 1) {
    uint64_t i = 0, t2 = t;
    while (t2 != 1) {
      t2 = Mul(t2, t2, p);
      ++i;
    }
    uint64_t b = c;
    for (uint64_t j = 0; j + 1 < m - i; ++j) b = Mul(b, b, p);
    m = i;
    c = Mul(b, b, p);
    t = Mul(t, c, p);
    r = Mul(r, b, p);
  }
  return r;
}

}  // namespace modp

int64_t TraceByEnumeration(const WeierstrassCoeffs& a, uint64_t p) {
  uint64_t r[5];
  for (int i = 0; i < 5; ++i) r[i] = modp::Reduce(a[i], p);
  uint64_t count = 1;  // point at infinity
  for (uint64_t x = 0; x < p; ++x) {
    uint64_t rhs = (modp::Mul(modp::Mul(x, x, p), x, p) + modp::Mul(r[1], modp::Mul(x, x, p), p) +
                    modp::Mul(r[3], x, p) + r[4]) % p;
    for (uint64_t y = 0; y < p; ++y) {
      uint64_t lhs = (modp::Mul(y, y, p) + modp::Mul(modp::Mul(r[0], x, p), y, p) +
                      modp::Mul(r[2], y, p)) % p;
      if (lhs == rhs) ++count;
    }
  }
  return static_cast<int64_t>(p + 1) - static_cast<int64_t>(count);
}

int64_t TraceByCharacterSum(const WeierstrassCoeffs& a, uint64_t p) {
  if (p % 2 == 0) Fail(ErrorKind::kDomain, "character-sum count needs odd p");
  Invariants inv = ComputeInvariants(a);
  std::vector<int8_t> chi(p, -1);
  chi[0] = 0;
  for (uint64_t y = 1; y <= p / 2; ++y) chi[y * y % p] = 1;
  uint64_t c3 = 4 % p, c2 = modp::Reduce(inv.b2, p), c1 = modp::Reduce(2 * inv.b4, p),
           c0 = modp::Reduce(inv.b6, p);
  int64_t sum = 0;
  for (uint64_t x = 0; x < p; ++x) {
    uint64_t f = ((((c3 * x + c2) % p) * x + c1) % p * x + c0) % p;
    sum += chi[f];
  }
  return -sum;
}

namespace {

// Short Weierstrass y^2 = x^3 + A x + B over F_p, p >= 5.
class ShortCurve {
 public:
  struct Point {
    uint64_t x = 0, y = 0;
    bool inf = true;
    friend bool operator==(const Point&, const Point&) = default;
  };

  ShortCurve(uint64_t A, uint64_t B, uint64_t p) : A_(A), B_(B), p_(p) {}

  Point Add(const Point& P, const Point& Q) const {
    if (P.inf) return Q;
    if (Q.inf) return P;
    uint64_t lambda;
    if (P.x == Q.x) {
      if ((P.y + Q.y) % p_ == 0) return Point{};
      uint64_t num = (3 * modp::Mul(P.x, P.x, p_) + A_) % p_;
      lambda = modp::Mul(num, modp::Inverse(2 * P.y % p_, p_), p_);
    } else {
      uint64_t num = (Q.y + p_ - P.y) % p_;
      uint64_t den = (Q.x + p_ - P.x) % p_;
      lambda = modp::Mul(num, modp::Inverse(den, p_), p_);
    }
    uint64_t x3 = (modp::Mul(lambda, lambda, p_) + 2 * p_ - P.x - Q.x) % p_;
    uint64_t y3 = (modp::Mul(lambda, (P.x + p_ - x3) % p_, p_) + p_ - P.y) % p_;
    return Point{x3, y3, false};
  }

  Point Multiply(uint64_t n, Point P) const {
    Point R;
    while (n) {
      if (n & 1) R = Add(R, P);
      P = Add(P, P);
      n >>= 1;
    }
    return R;
  }

  Point Random(std::mt19937_64& rng) const {
    while (true) {
      uint64_t x = rng() % p_;
      uint64_t rhs = (modp::Mul(modp::Mul(x, x, p_), x, p_) + modp::Mul(A_, x, p_) + B_) % p_;
      if (rhs == 0) return Point{x, 0, false};
      if (modp::Legendre(rhs, p_) == 1) return Point{x, modp::Sqrt(rhs, p_), false};
    }
  }

  // All N in [lo, hi] with N * P = O, by baby-step giant-step.
  std::vector<uint64_t> AnnihilatorsInInterval(const Point& P, uint64_t lo, uint64_t hi) const {
    uint64_t width = hi - lo;
    uint64_t step = static_cast<uint64_t>(std::ceil(std::sqrt(static_cast<double>(width + 1))));
    struct Baby {
      uint64_t x, y, j;
    };
    std::vector<Baby> baby;
    std::vector<uint64_t> zero_steps{0};  // j with jP = O
    baby.reserve(step);
    Point jP = P;
    for (uint64_t j = 1; j < step; ++j) {
      if (jP.inf)
        zero_steps.push_back(j);
      else
        baby.push_back({jP.x, jP.y, j});
      jP = Add(jP, P);
    }
    std::sort(baby.begin(), baby.end(),
              [](const Baby& a, const Baby& b) { return a.x < b.x; });
    Point giant = Multiply(step, P);
    Point T = Multiply(lo, P);
    std::vector<uint64_t> found;
    for (uint64_t i = 0; i * step <= width; ++i) {
      // (lo + i*step + j) P = O  <=>  j P = -T
      if (T.inf) {
        for (uint64_t j : zero_steps)
          if (i * step + j <= width) found.push_back(lo + i * step + j);
      } else {
        auto it = std::lower_bound(baby.begin(), baby.end(), T.x,
                                   [](const Baby& b, uint64_t x) { return b.x < x; });
        for (; it != baby.end() && it->x == T.x; ++it) {
          if ((it->y + T.y) % p_ == 0) {
            uint64_t m = i * step + it->j;
            if (m <= width) found.push_back(lo + m);
          }
        }
      }
      T = Add(T, giant);
    }
    std::sort(found.begin(), found.end());
    return found;
  }

 private:
  uint64_t A_, B_, p_;
};

std::vector<uint64_t> Intersect(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
  std::vector<uint64_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Candidate group orders of `curve` narrowed by up to `tries` random points.
std::vector<uint64_t> CandidateOrders(const ShortCurve& curve, uint64_t lo, uint64_t hi,
                                      std::mt19937_64& rng, int tries) {
  std::optional<std::vector<uint64_t>> cand;
  for (int t = 0; t < tries; ++t) {
    auto found = curve.AnnihilatorsInInterval(curve.Random(rng), lo, hi);
    cand = cand ? Intersect(*cand, found) : found;
    if (cand->size() <= 1) break;
  }
  return *cand;
}

}  // namespace

int64_t TraceByGroupOrder(const WeierstrassCoeffs& a, uint64_t p) {
  if (p < 5) Fail(ErrorKind::kDomain, "group-order count needs p >= 5");
  Invariants inv = ComputeInvariants(a);
  // E ~ y^2 = x^3 - 27 c4 x - 54 c6 over F_p for p >= 5.
  uint64_t A = modp::Reduce(-27 * inv.c4, p);
  uint64_t B = modp::Reduce(-54 * inv.c6, p);
  uint64_t disc = (4 * modp::Mul(modp::Mul(A, A, p), A, p) + 27 * modp::Mul(B, B, p)) % p;
  if (disc == 0) Fail(ErrorKind::kDomain, "singular reduction at p = " + std::to_string(p));

  uint64_t s = 0;
  while ((s + 1) * (s + 1) <= 4 * p) ++s;  // floor(2 sqrt p)
  uint64_t lo = p + 1 - s, hi = p + 1 + s;
  std::mt19937_64 rng(p * 0x9E3779B97F4A7C15ull + 1);

  ShortCurve curve(A, B, p);
  auto cand = CandidateOrders(curve, lo, hi, rng, 6);
  if (cand.size() == 1) return static_cast<int64_t>(p + 1) - static_cast<int64_t>(cand[0]);

  // Quadratic twist by a non-residue g has order 2p + 2 - #E.
  uint64_t g = 2;
  while (modp::Legendre(g, p) != -1) ++g;
  uint64_t g2 = modp::Mul(g, g, p);
  ShortCurve twist(modp::Mul(A, g2, p), modp::Mul(B, modp::Mul(g2, g, p), p), p);
  auto twist_cand = CandidateOrders(twist, lo, hi, rng, 6);
  std::vector<uint64_t> mapped;
  for (auto it = twist_cand.rbegin(); it != twist_cand.rend(); ++it) mapped.push_back(2 * p + 2 - *it);
  cand = Intersect(cand, mapped);
  if (cand.size() == 1) return static_cast<int64_t>(p + 1) - static_cast<int64_t>(cand[0]);
  if (cand.empty())
    Fail(ErrorKind::kInternal, "no group order consistent with Hasse at p = " + std::to_string(p));
  return TraceByCharacterSum(a, p);
}

}  // namespace twistvan
