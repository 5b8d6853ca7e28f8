#ifndef TWISTVAN_CURVE_H_
#define TWISTVAN_CURVE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "twistvan/point_count.h"

namespace twistvan {

// An elliptic curve over Q with squarefree conductor, given by a globally
// minimal Weierstrass model.
struct CurveSpec {
  std::string label;
  WeierstrassCoeffs weierstrass{};
  int64_t conductor = 0;
  int64_t discriminant = 0;
  int root_number = 1;
  // Optional pinned a_p for p | conductor; checked against the computed value.
  std::map<int64_t, int> pinned_bad_ap;

  std::vector<int64_t> bad_primes() const;
  bool is_bad(uint64_t p) const { return conductor % static_cast<int64_t>(p) == 0; }
  // FNV-1a over the label and model; identifies the curve in binary files.
  uint64_t Fingerprint() const;
};

struct Invariants {
  int64_t b2, b4, b6, b8, c4, c6, discriminant;
};
Invariants ComputeInvariants(const WeierstrassCoeffs& a);

// Validates and completes a curve: computes the discriminant, checks Q
// squarefree, w in {-1,+1} and equal to -prod(-a_p) over p | Q, rad(Delta) ==
// rad(Q) (minimal model), and any
// pinned bad-prime a_p. Throws kConfig on violation.
CurveSpec MakeCurve(std::string label, const WeierstrassCoeffs& a, int64_t conductor,
                    int root_number, std::map<int64_t, int> pinned_bad_ap = {});

// Reads the key=value curve file (label, weierstrass, conductor, root_number,
// optional bad_ap = p:ap[, p:ap...]).
CurveSpec LoadCurve(const std::string& path);
CurveSpec ParseCurve(const std::string& text, const std::string& origin);

// a_p for prime p: p + 1 - #E(F_p) at good primes, +1/-1 for split/non-split
// multiplicative reduction at p | Q.
int64_t Ap(const CurveSpec& curve, uint64_t p);

// Split/non-split test on the reduced nodal cubic: +1 iff the tangent
// directions at the node are defined over F_p.
int BadPrimeAp(const CurveSpec& curve, uint64_t p);

// a_p for every prime p <= limit, in prime order.
std::vector<int32_t> ApList(const CurveSpec& curve, std::span<const uint32_t> primes);

// Primes up to a limit together with their a_p.
struct PrimeApTable {
  std::vector<uint32_t> primes;
  std::vector<int32_t> ap;

  static PrimeApTable Compute(const CurveSpec& curve, uint32_t limit);
  uint32_t limit() const { return primes.empty() ? 0 : primes.back(); }
  // a_p for a prime in the table; throws kDomain otherwise.
  int32_t ApOf(uint64_t p) const;
};

// Local Euler factor L_p(x): (1 - a_p x)^-1 at p | Delta and
// (1 - a_p x + p x^2)^-1 otherwise. Throws kDomain at a pole.
double LocalFactor(const CurveSpec& curve, uint64_t p, int64_t ap, double x);

// Dirichlet coefficients a_1..a_N of L_E(s). Immutable once built.
class CoefficientTable {
 public:
  static constexpr uint64_t kDefaultBudget = 150'000'000;

  // Builds from a prime-ordered a_p list covering every prime <= limit.
  static CoefficientTable Build(const CurveSpec& curve, uint64_t limit,
                                std::span<const uint32_t> primes,
                                std::span<const int32_t> ap,
                                uint64_t budget = kDefaultBudget);
  // Computes the a_p internally.
  static CoefficientTable Build(const CurveSpec& curve, uint64_t limit,
                                uint64_t budget = kDefaultBudget);

  uint64_t limit() const { return values_.size() - 1; }
  int32_t operator[](uint64_t n) const { return values_[n]; }
  // values()[n] = a_n, index 0 unused (0).
  std::span<const int32_t> values() const { return values_; }

 private:
  std::vector<int32_t> values_;
};

}  // namespace twistvan

#endif  // TWISTVAN_CURVE_H_
