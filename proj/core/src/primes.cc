#include "twistvan/primes.h"

#include <cmath>

#include "twistvan/error.h"

namespace twistvan {

std::vector<uint32_t> PrimesUpTo(uint32_t limit) {
  std::vector<uint32_t> primes;
  if (limit < 2) return primes;
  primes.push_back(2);
  // composite[i] refers to 2i + 1
  std::vector<uint8_t> composite(limit / 2 + 1, 0);
  for (uint64_t i = 1; 2 * i + 1 <= limit; ++i) {
    if (composite[i]) continue;
    uint64_t p = 2 * i + 1;
    primes.push_back(static_cast<uint32_t>(p));
    for (uint64_t m = p * p; m <= limit; m += 2 * p) composite[m / 2] = 1;
  }
  return primes;
}

std::vector<uint32_t> SmallestPrimeFactors(uint32_t limit) {
  std::vector<uint32_t> spf(static_cast<size_t>(limit) + 1, 0);
  for (uint64_t i = 2; i <= limit; ++i) {
    if (spf[i]) continue;
    spf[i] = static_cast<uint32_t>(i);
    for (uint64_t m = i * i; m <= limit; m += i)
      if (!spf[m]) spf[m] = static_cast<uint32_t>(i);
  }
  return spf;
}

bool IsPrime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull}) {
    if (n % p == 0) return n == p;
  }
  for (uint64_t f = 11; f * f <= n; f += 2)
    if (n % f == 0) return false;
  return true;
}

std::vector<uint64_t> PrimeDivisors(int64_t n) {
  if (n == 0) Fail(ErrorKind::kDomain, "PrimeDivisors(0)");
  uint64_t m = n < 0 ? static_cast<uint64_t>(-(n + 1)) + 1 : static_cast<uint64_t>(n);
  std::vector<uint64_t> out;
  for (uint64_t f = 2; f * f <= m; ++f) {
    if (m % f) continue;
    out.push_back(f);
    while (m % f == 0) m /= f;
  }
  if (m > 1) out.push_back(m);
  return out;
}

bool IsSquarefree(uint64_t n) {
  if (n == 0) return false;
  for (uint64_t f = 2; f * f <= n; ++f) {
    if (n % f) continue;
    n /= f;
    if (n % f == 0) return false;
  }
  return true;
}

void SieveSquarefree(uint64_t lo, uint64_t hi, std::span<const uint32_t> primes,
                     std::vector<uint8_t>& flags) {
  if (lo == 0) Fail(ErrorKind::kDomain, "SieveSquarefree: lo must be >= 1");
  flags.assign(hi > lo ? hi - lo : 0, 1);
  for (uint32_t p : primes) {
    uint64_t sq = static_cast<uint64_t>(p) * p;
    if (sq >= hi) break;
    uint64_t first = (lo + sq - 1) / sq * sq;
    for (uint64_t m = first; m < hi; m += sq) flags[m - lo] = 0;
  }
}

}  // namespace twistvan
