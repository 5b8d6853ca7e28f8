#ifndef TWISTVAN_POINT_COUNT_H_
#define TWISTVAN_POINT_COUNT_H_

#include <array>
#include <cstdint>

namespace twistvan {

// Long Weierstrass coefficients (a1, a2, a3, a4, a6).
using WeierstrassCoeffs = std::array<int64_t, 5>;

namespace modp {

inline uint64_t Reduce(int64_t x, uint64_t p) {
  int64_t r = x % static_cast<int64_t>(p);
  return static_cast<uint64_t>(r < 0 ? r + static_cast<int64_t>(p) : r);
}
inline uint64_t Mul(uint64_t a, uint64_t b, uint64_t p) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}
uint64_t Pow(uint64_t base, uint64_t exp, uint64_t p);
uint64_t Inverse(uint64_t a, uint64_t p);
// Legendre symbol (a/p) for odd prime p: -1, 0 or +1.
int Legendre(uint64_t a, uint64_t p);
// Square root of a quadratic residue a mod odd prime p (Tonelli-Shanks).
uint64_t Sqrt(uint64_t a, uint64_t p);

}  // namespace modp

// p + 1 - #E(F_p) by enumerating every affine (x, y) pair. O(p^2); oracle use.
int64_t TraceByEnumeration(const WeierstrassCoeffs& a, uint64_t p);

// p + 1 - #E(F_p) via -sum_x chi_p(4x^3 + b2 x^2 + 2 b4 x + b6); odd p, O(p).
// On a singular reduction this still counts the singular point, so it also
// returns +1 / -1 for split / non-split multiplicative reduction.
int64_t TraceByCharacterSum(const WeierstrassCoeffs& a, uint64_t p);

// Frobenius trace at a good prime p >= 5 by baby-step giant-step on the group
// order inside the Hasse interval, falling back to the quadratic twist and
// finally to the character sum when random points leave it ambiguous.
int64_t TraceByGroupOrder(const WeierstrassCoeffs& a, uint64_t p);

}  // namespace twistvan

#endif  // TWISTVAN_POINT_COUNT_H_
