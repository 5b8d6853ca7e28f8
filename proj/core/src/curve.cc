#include "twistvan/curve.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "twistvan/config.h"
#include "twistvan/error.h"
#include "twistvan/primes.h"

namespace twistvan {
namespace {

// Below this bound the O(p) character sum beats baby-step giant-step setup.
constexpr uint64_t kCharacterSumLimit = 1000;

int64_t Narrow(__int128 v, const char* what) {
  if (v > std::numeric_limits<int64_t>::max() || v < std::numeric_limits<int64_t>::min())
    Fail(ErrorKind::kConfig, std::string(what) + " overflows 64 bits");
  return static_cast<int64_t>(v);
}

}  // namespace

Invariants ComputeInvariants(const WeierstrassCoeffs& a) {
  using I = __int128;
  I a1 = a[0], a2 = a[1], a3 = a[2], a4 = a[3], a6 = a[4];
  I b2 = a1 * a1 + 4 * a2;
  I b4 = 2 * a4 + a1 * a3;
  I b6 = a3 * a3 + 4 * a6;
  I b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  I c4 = b2 * b2 - 24 * b4;
  I c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6;
  I disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
  return Invariants{Narrow(b2, "b2"), Narrow(b4, "b4"), Narrow(b6, "b6"), Narrow(b8, "b8"),
                    Narrow(c4, "c4"), Narrow(c6, "c6"), Narrow(disc, "discriminant")};
}

std::vector<int64_t> CurveSpec::bad_primes() const {
  std::vector<int64_t> out;
  for (uint64_t p : PrimeDivisors(conductor)) out.push_back(static_cast<int64_t>(p));
  return out;
}

uint64_t CurveSpec::Fingerprint() const {
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, size_t n) {
    auto* bytes = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ull;
    }
  };
  mix(label.data(), label.size());
  for (int64_t c : weierstrass) mix(&c, sizeof c);
  mix(&conductor, sizeof conductor);
  return h;
}

CurveSpec MakeCurve(std::string label, const WeierstrassCoeffs& a, int64_t conductor,
                    int root_number, std::map<int64_t, int> pinned_bad_ap) {
  CurveSpec c;
  c.label = std::move(label);
  c.weierstrass = a;
  c.conductor = conductor;
  c.root_number = root_number;
  c.pinned_bad_ap = std::move(pinned_bad_ap);
  const std::string who = "curve " + c.label;

  if (conductor <= 0) Fail(ErrorKind::kConfig, who + ": conductor must be positive");
  if (!IsSquarefree(static_cast<uint64_t>(conductor)))
    Fail(ErrorKind::kConfig, who + ": conductor " + std::to_string(conductor) +
                                 " is not squarefree");
  if (root_number != 1 && root_number != -1)
    Fail(ErrorKind::kConfig, who + ": root_number must be +1 or -1");

  Invariants inv = ComputeInvariants(a);
  if (inv.discriminant == 0) Fail(ErrorKind::kConfig, who + ": singular model (discriminant 0)");
  c.discriminant = inv.discriminant;

  if (PrimeDivisors(inv.discriminant) != PrimeDivisors(conductor))
    Fail(ErrorKind::kConfig, who + ": primes of discriminant " +
                                 std::to_string(inv.discriminant) +
                                 " differ from primes of conductor " +
                                 std::to_string(conductor) + " (non-minimal model?)");
  for (int64_t p : c.bad_primes()) {
    if (inv.c4 % p == 0)
      Fail(ErrorKind::kConfig, who + ": additive reduction at p = " + std::to_string(p));
  }
  for (const auto& [p, ap] : c.pinned_bad_ap) {
    if (p <= 1 || conductor % p != 0 || !IsPrime(static_cast<uint64_t>(p)))
      Fail(ErrorKind::kConfig, who + ": pinned a_p for p = " + std::to_string(p) +
                                   " which does not divide the conductor");
    int computed = BadPrimeAp(c, static_cast<uint64_t>(p));
    if (computed != ap)
      Fail(ErrorKind::kConfig, who + ": pinned a_" + std::to_string(p) + " = " +
                                   std::to_string(ap) + " but reduction gives " +
                                   std::to_string(computed));
  }
  // Semistable curve: w = -prod_{p | Q} (-a_p).
  int expected_w = -1;
  for (int64_t p : c.bad_primes()) expected_w *= -BadPrimeAp(c, static_cast<uint64_t>(p));
  if (expected_w != root_number)
    Fail(ErrorKind::kConfig, who + ": root_number " + std::to_string(root_number) +
                                 " contradicts the bad-prime a_p (expected " +
                                 std::to_string(expected_w) + ")");
  return c;
}

CurveSpec ParseCurve(const std::string& text, const std::string& origin) {
  KeyValueFile kv = KeyValueFile::Parse(text, origin);
  auto coeffs = kv.GetIntList("weierstrass");
  if (coeffs.size() != 5)
    Fail(ErrorKind::kConfig, origin + ": weierstrass needs five integers a1,a2,a3,a4,a6");
  WeierstrassCoeffs a{coeffs[0], coeffs[1], coeffs[2], coeffs[3], coeffs[4]};
  std::map<int64_t, int> pinned;
  if (kv.Has("bad_ap")) {
    for (const auto& item : kv.GetList("bad_ap")) {
      auto parts = Split(item, ':');
      if (parts.size() != 2) Fail(ErrorKind::kConfig, origin + ": bad_ap entries are p:ap");
      pinned[ParseInt(parts[0], origin + ": bad_ap")] =
          static_cast<int>(ParseInt(parts[1], origin + ": bad_ap"));
    }
  }
  return MakeCurve(kv.Get("label"), a, kv.GetInt("conductor"),
                   static_cast<int>(kv.GetInt("root_number")), std::move(pinned));
}

CurveSpec LoadCurve(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot open curve file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return ParseCurve(text.str(), path);
}

int BadPrimeAp(const CurveSpec& curve, uint64_t p) {
  if (!curve.is_bad(p)) Fail(ErrorKind::kDomain, "BadPrimeAp at good prime " + std::to_string(p));
  const auto& a = curve.weierstrass;
  if (p == 2) {
    // Locate the singular point, then ask whether t^2 + a1 t - (3x0 + a2)
    // (the tangent cone at the node, t = Y/X) has a root in F_2.
    for (int64_t x = 0; x < 2; ++x) {
      for (int64_t y = 0; y < 2; ++y) {
        int64_t F = y * y + a[0] * x * y + a[2] * y - x * x * x - a[1] * x * x - a[3] * x - a[4];
        int64_t Fx = a[0] * y - 3 * x * x - 2 * a[1] * x - a[3];
        int64_t Fy = 2 * y + a[0] * x + a[2];
        if (modp::Reduce(F, 2) || modp::Reduce(Fx, 2) || modp::Reduce(Fy, 2)) continue;
        for (int64_t t = 0; t < 2; ++t) {
          if (modp::Reduce(t * t + a[0] * t - (3 * x + a[1]), 2) == 0) return 1;
        }
        return -1;
      }
    }
    Fail(ErrorKind::kInternal, "no singular point mod 2 for " + curve.label);
  }
  // Odd p: (2y + a1 x + a3)^2 = f(x) = 4x^3 + b2 x^2 + 2 b4 x + b6 has a
  // double root x0 and f(x) ~ (12 x0 + b2)(x - x0)^2 near it.
  Invariants inv = ComputeInvariants(a);
  uint64_t c2 = modp::Reduce(inv.b2, p), c1 = modp::Reduce(2 * inv.b4, p),
           c0 = modp::Reduce(inv.b6, p);
  for (uint64_t x = 0; x < p; ++x) {
    uint64_t f = ((((4 * x + c2) % p) * x + c1) % p * x + c0) % p;
    uint64_t df = ((12 * modp::Mul(x, x, p)) % p + 2 * modp::Mul(c2, x, p) + c1) % p;
    if (f != 0 || df != 0) continue;
    int chi = modp::Legendre((12 * x + c2) % p, p);
    if (chi == 0) Fail(ErrorKind::kConfig, curve.label + ": cusp at p = " + std::to_string(p));
    return chi;
  }
  Fail(ErrorKind::kInternal, "no double root mod " + std::to_string(p) + " for " + curve.label);
}

int64_t Ap(const CurveSpec& curve, uint64_t p) {
  if (curve.is_bad(p)) return BadPrimeAp(curve, p);
  if (p == 2) return TraceByEnumeration(curve.weierstrass, p);
  if (p < kCharacterSumLimit) return TraceByCharacterSum(curve.weierstrass, p);
  return TraceByGroupOrder(curve.weierstrass, p);
}

std::vector<int32_t> ApList(const CurveSpec& curve, std::span<const uint32_t> primes) {
  std::vector<int32_t> out;
  out.reserve(primes.size());
  for (uint32_t p : primes) out.push_back(static_cast<int32_t>(Ap(curve, p)));
  return out;
}

PrimeApTable PrimeApTable::Compute(const CurveSpec& curve, uint32_t limit) {
  PrimeApTable t;
  t.primes = PrimesUpTo(limit);
  t.ap = ApList(curve, t.primes);
  return t;
}

int32_t PrimeApTable::ApOf(uint64_t p) const {
  auto it = std::lower_bound(primes.begin(), primes.end(), p);
  if (it == primes.end() || *it != p)
    Fail(ErrorKind::kDomain, std::to_string(p) + " is not a prime in the a_p table");
  return ap[static_cast<size_t>(it - primes.begin())];
}

double LocalFactor(const CurveSpec& curve, uint64_t p, int64_t ap, double x) {
  double pd = static_cast<double>(p);
  double denom = curve.discriminant % static_cast<int64_t>(p) == 0
                     ? 1.0 - static_cast<double>(ap) * x
                     : 1.0 - static_cast<double>(ap) * x + pd * x * x;
  if (denom == 0.0) Fail(ErrorKind::kDomain, "pole of the local factor at p = " + std::to_string(p));
  return 1.0 / denom;
}

CoefficientTable CoefficientTable::Build(const CurveSpec& curve, uint64_t limit,
                                         std::span<const uint32_t> primes,
                                         std::span<const int32_t> ap, uint64_t budget) {
  if (limit < 1) Fail(ErrorKind::kDomain, "coefficient table needs N >= 1");
  if (limit > budget)
    Fail(ErrorKind::kCapacity, "coefficient table of " + std::to_string(limit) +
                                   " entries exceeds budget " + std::to_string(budget));
  if (limit > std::numeric_limits<uint32_t>::max())
    Fail(ErrorKind::kCapacity, "coefficient table limit exceeds 32 bits");
  if (primes.size() != ap.size()) Fail(ErrorKind::kInternal, "a_p list does not match primes");

  auto spf = SmallestPrimeFactors(static_cast<uint32_t>(limit));
  CoefficientTable t;
  t.values_.assign(limit + 1, 0);
  t.values_[1] = 1;
  size_t next_prime = 0;
  for (uint64_t n = 2; n <= limit; ++n) {
    uint64_t p = spf[n];
    if (p == n) {
      if (next_prime >= primes.size() || primes[next_prime] != p)
        Fail(ErrorKind::kDomain, "a_p list does not cover prime " + std::to_string(p));
      t.values_[n] = ap[next_prime++];
      continue;
    }
    uint64_t m = n, pe = 1;
    while (m % p == 0) {
      m /= p;
      pe *= p;
    }
    if (m != 1) {
      t.values_[n] = static_cast<int32_t>(static_cast<int64_t>(t.values_[pe]) * t.values_[m]);
      continue;
    }
    // n = p^e, e >= 2
    int64_t a_p = t.values_[p];
    int64_t prev = t.values_[n / p];
    int64_t v = curve.is_bad(p) ? a_p * prev
                                : a_p * prev - static_cast<int64_t>(p) * t.values_[n / p / p];
    t.values_[n] = static_cast<int32_t>(v);
  }
  return t;
}

CoefficientTable CoefficientTable::Build(const CurveSpec& curve, uint64_t limit, uint64_t budget) {
  if (limit > budget)
    Fail(ErrorKind::kCapacity, "coefficient table of " + std::to_string(limit) +
                                   " entries exceeds budget " + std::to_string(budget));
  auto primes = PrimesUpTo(static_cast<uint32_t>(limit));
  auto ap = ApList(curve, primes);
  return Build(curve, limit, primes, ap, budget);
}

}  // namespace twistvan
