#ifndef TWISTVAN_TESTS_NAIVE_ORACLE_H_
#define TWISTVAN_TESTS_NAIVE_ORACLE_H_

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "twistvan/central_values.h"
#include "twistvan/characters.h"
#include "twistvan/curve.h"

namespace twistvan::testing {

// Direct per-d summation: a_n by trial factorisation, chi by the Kronecker
// symbol per term, natural order, no tiles, caches or threads.
struct NaiveRecord {
  int64_t d;
  double value;
};

inline std::vector<NaiveRecord> NaiveValues(const CurveSpec& c, FamilySign sign, int64_t X, double eps) {
  std::vector<NaiveRecord> out;
  std::vector<int64_t> ap_cache;
  auto a_n = [&](uint64_t n) {
    int64_t result = 1;
    for (uint64_t p = 2; n > 1; ++p) {
      if (p * p > n) p = n;
      if (n % p) continue;
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      int64_t ap = Ap(c, p), prev = 1, cur = ap;
      if (c.is_bad(p)) {
        cur = 1;
        for (int i = 0; i < e; ++i) cur *= ap;
      } else {
        for (int i = 1; i < e; ++i) {
          int64_t next = ap * cur - static_cast<int64_t>(p) * prev;
          prev = cur;
          cur = next;
        }
      }
      result *= cur;
    }
    return result;
  };
  const int64_t lo = sign == FamilySign::kMinus ? -X : 2, hi = sign == FamilySign::kMinus ? -1 : X;
  uint64_t max_terms = 0;
  std::vector<int64_t> ds;
  for (int64_t d = lo; d <= hi; ++d) {
    if (!IsFundamental(d)) continue;
    bool ok = true;
    for (int64_t p : c.bad_primes()) {
      int want = BadPrimeAp(c, static_cast<uint64_t>(p));
      if (sign == FamilySign::kMinus) want = -want;
      ok = ok && Kronecker(d, static_cast<uint64_t>(p)) == want;
    }
    if (!ok) continue;
    ds.push_back(d);
    max_terms = std::max(max_terms, TermsNeeded(c.conductor, d, eps));
  }
  std::vector<int64_t> an(max_terms + 1);
  for (uint64_t n = 1; n <= max_terms; ++n) an[n] = a_n(n);
  std::sort(ds.begin(), ds.end(), [](int64_t a, int64_t b) { return std::llabs(a) < std::llabs(b); });
  for (int64_t d : ds) {
    const uint64_t N = TermsNeeded(c.conductor, d, eps);
    const double alpha = 2 * std::numbers::pi / (std::sqrt(static_cast<double>(c.conductor)) * std::llabs(d));
    double s = 0.0;
    for (uint64_t n = 1; n <= N; ++n)
      s += static_cast<double>(an[n]) * Kronecker(d, n) / n * std::exp(-alpha * n);
    out.push_back({d, 2 * s});
  }
  return out;
}

}  // namespace twistvan::testing

#endif  // TWISTVAN_TESTS_NAIVE_ORACLE_H_
