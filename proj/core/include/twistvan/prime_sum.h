#ifndef TWISTVAN_PRIME_SUM_H_
#define TWISTVAN_PRIME_SUM_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace twistvan {

// Truncation of a conditionally convergent sum over primes p <= cutoff.
struct PrimeSumPolicy {
  uint64_t cutoff = 100'000;
  // Report the mean of the partial sums at the last 16 log-spaced checkpoints
  // cutoff * 10^(-i/16), i = 0..15, instead of the raw partial sum.
  bool smooth = true;
  // Allowed |value(cutoff) - value(cutoff/2)|; <= 0 disables the check.
  double tolerance = 0.0;
};

struct PrimeSumResult {
  std::vector<double> value;       // at cutoff
  std::vector<double> value_half;  // at cutoff / 2, same mode
  double stability_delta = 0.0;    // max over components
  uint64_t cutoff = 0;
  bool smoothed = false;
};

// `term(p, out)` writes the dim-component contribution of prime p into `out`.
// `primes` must cover every prime <= cutoff (extra primes are ignored).
// Fixed ascending summation order with Kahan compensation.
PrimeSumResult SumOverPrimes(const PrimeSumPolicy& policy, size_t dim,
                             std::span<const uint32_t> primes,
                             const std::function<void(size_t index, std::span<double> out)>& term);

// Throws kNumerical when the policy tolerance is exceeded.
void CheckStability(const PrimeSumPolicy& policy, const PrimeSumResult& result,
                    const char* what);

}  // namespace twistvan

#endif  // TWISTVAN_PRIME_SUM_H_
