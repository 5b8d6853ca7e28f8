#include "twistvan/coefficient_cache.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include "twistvan/error.h"
#include "twistvan/primes.h"

namespace twistvan {
namespace {

template <typename T>
void PutLE(std::string& out, T v) {
  for (size_t i = 0; i < sizeof(T); ++i)
    out.push_back(static_cast<char>((static_cast<uint64_t>(v) >> (8 * i)) & 0xFF));
}

template <typename T>
T GetLE(const unsigned char* p) {
  uint64_t v = 0;
  for (size_t i = 0; i < sizeof(T); ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
  return static_cast<T>(v);
}

}  // namespace

uint16_t CurveHash16(const CurveSpec& curve) {
  uint64_t h = curve.Fingerprint();
  return static_cast<uint16_t>(h ^ (h >> 16) ^ (h >> 32) ^ (h >> 48));
}

void WriteApCache(const std::string& path, const ApCache& cache) {
  std::string buf;
  buf.reserve(8 + 2 * cache.ap.size());
  PutLE<uint16_t>(buf, ApCache::kMagic);
  PutLE<uint16_t>(buf, cache.curve_hash);
  PutLE<uint32_t>(buf, cache.limit);
  for (int32_t a : cache.ap) {
    if (a < std::numeric_limits<int16_t>::min() || a > std::numeric_limits<int16_t>::max())
      Fail(ErrorKind::kInternal, "a_p does not fit in 16 bits");
    PutLE<uint16_t>(buf, static_cast<uint16_t>(static_cast<int16_t>(a)));
  }
  // Write then rename so a crash never leaves a half-written cache.
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) Fail(ErrorKind::kIo, "cannot write a_p cache " + tmp);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) Fail(ErrorKind::kIo, "short write on a_p cache " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) Fail(ErrorKind::kIo, "cannot install a_p cache " + path + ": " + ec.message());
}

std::optional<ApCache> ReadApCache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 8) return std::nullopt;
  if (GetLE<uint16_t>(bytes.data()) != ApCache::kMagic) return std::nullopt;
  ApCache c;
  c.curve_hash = GetLE<uint16_t>(bytes.data() + 2);
  c.limit = GetLE<uint32_t>(bytes.data() + 4);
  size_t count = PrimesUpTo(c.limit).size();
  if (bytes.size() != 8 + 2 * count) return std::nullopt;
  c.ap.resize(count);
  for (size_t i = 0; i < count; ++i)
    c.ap[i] = static_cast<int16_t>(GetLE<uint16_t>(bytes.data() + 8 + 2 * i));
  return c;
}

std::vector<int32_t> EnsureApCache(const CurveSpec& curve, uint32_t limit,
                                   const std::string& path) {
  uint16_t hash = CurveHash16(curve);
  auto primes = PrimesUpTo(limit);
  auto cached = ReadApCache(path);
  if (cached && cached->curve_hash == hash) {
    if (cached->limit >= limit) {
      cached->ap.resize(primes.size());
      return cached->ap;
    }
    ApCache grown = std::move(*cached);
    size_t have = grown.ap.size();
    grown.ap.reserve(primes.size());
    for (size_t i = have; i < primes.size(); ++i)
      grown.ap.push_back(static_cast<int32_t>(Ap(curve, primes[i])));
    grown.limit = limit;
    WriteApCache(path, grown);
    return grown.ap;
  }
  ApCache fresh;
  fresh.curve_hash = hash;
  fresh.limit = limit;
  fresh.ap = ApList(curve, primes);
  WriteApCache(path, fresh);
  return fresh.ap;
}

}  // namespace twistvan
