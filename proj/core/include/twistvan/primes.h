#ifndef TWISTVAN_PRIMES_H_
#define TWISTVAN_PRIMES_H_

#include <cstdint>
#include <span>
#include <vector>

namespace twistvan {

// All primes p <= limit, ascending (Eratosthenes, odd-only bitmap).
std::vector<uint32_t> PrimesUpTo(uint32_t limit);

// Smallest-prime-factor table for 0..limit (entries 0 and 1 are 0).
std::vector<uint32_t> SmallestPrimeFactors(uint32_t limit);

bool IsPrime(uint64_t n);

// Distinct prime divisors of |n|, ascending. n != 0.
std::vector<uint64_t> PrimeDivisors(int64_t n);

bool IsSquarefree(uint64_t n);

// Flags for the integers lo..hi-1: flag[i] == 1 iff lo+i is squarefree.
// `primes` must contain every prime whose square is < hi. lo >= 1.
void SieveSquarefree(uint64_t lo, uint64_t hi, std::span<const uint32_t> primes,
                     std::vector<uint8_t>& flags);

}  // namespace twistvan

#endif  // TWISTVAN_PRIMES_H_
