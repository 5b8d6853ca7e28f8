#ifndef TWISTVAN_COEFFICIENT_CACHE_H_
#define TWISTVAN_COEFFICIENT_CACHE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twistvan/curve.h"

namespace twistvan {

// On-disk a_p cache. Layout (little-endian):
//   u16 magic 0x5041 ("AP"), u16 curve hash, u32 prime limit,
//   then one i16 a_p per prime <= limit in ascending prime order.
struct ApCache {
  static constexpr uint16_t kMagic = 0x5041;
  uint16_t curve_hash = 0;
  uint32_t limit = 0;
  std::vector<int32_t> ap;
};

uint16_t CurveHash16(const CurveSpec& curve);

void WriteApCache(const std::string& path, const ApCache& cache);
// Empty when the file is missing, truncated, or has a bad header.
std::optional<ApCache> ReadApCache(const std::string& path);

// Loads the cache at `path` if its header matches `curve` and covers `limit`;
// extends a matching shorter cache by computing only the missing primes;
// rebuilds on any mismatch or corruption. The file is rewritten whenever it
// changed. Returns a_p for every prime <= limit.
std::vector<int32_t> EnsureApCache(const CurveSpec& curve, uint32_t limit,
                                   const std::string& path);

}  // namespace twistvan

#endif  // TWISTVAN_COEFFICIENT_CACHE_H_
