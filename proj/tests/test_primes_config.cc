#include <numeric>
#include <random>

#include "test_util.h"
#include "twistvan/config.h"
#include "twistvan/primes.h"

namespace twistvan {
namespace {

using testing::SourcePath;

bool NaivePrime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

TEST(Primes, SieveMatchesTrialDivision) {
  auto primes = PrimesUpTo(5000);
  std::vector<uint32_t> naive;
  for (uint32_t n = 0; n <= 5000; ++n)
    if (NaivePrime(n)) naive.push_back(n);
  EXPECT_EQ(primes, naive);
  EXPECT_TRUE(PrimesUpTo(1).empty());
  EXPECT_EQ(PrimesUpTo(2), std::vector<uint32_t>{2});
  EXPECT_EQ(PrimesUpTo(100000).size(), 9592u);
}

TEST(Primes, SmallestPrimeFactor) {
  auto spf = SmallestPrimeFactors(3000);
  EXPECT_EQ(spf[0], 0u);
  EXPECT_EQ(spf[1], 0u);
  for (uint32_t n = 2; n <= 3000; ++n) {
    uint32_t d = 2;
    while (n % d) ++d;
    ASSERT_EQ(spf[n], d) << n;
  }
}

TEST(Primes, IsPrimeAndDivisors) {
  for (uint64_t n = 0; n < 4000; ++n) ASSERT_EQ(IsPrime(n), NaivePrime(n)) << n;
  EXPECT_TRUE(IsPrime(1'000'000'007ull));
  EXPECT_EQ(PrimeDivisors(-307), std::vector<uint64_t>{307});
  EXPECT_EQ(PrimeDivisors(-161051), std::vector<uint64_t>{11});
  EXPECT_EQ(PrimeDivisors(360), (std::vector<uint64_t>{2, 3, 5}));
  EXPECT_TV_ERROR(PrimeDivisors(0), ErrorKind::kDomain);
}

TEST(Primes, SquarefreeSieveWindows) {
  auto primes = PrimesUpTo(400);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    uint64_t lo = 1 + rng() % 100000, hi = lo + rng() % 2000;
    std::vector<uint8_t> flags;
    SieveSquarefree(lo, hi, primes, flags);
    ASSERT_EQ(flags.size(), hi - lo);
    for (uint64_t n = lo; n < hi; ++n) ASSERT_EQ(flags[n - lo] != 0, IsSquarefree(n)) << n;
  }
  std::vector<uint8_t> flags;
  EXPECT_TV_ERROR(SieveSquarefree(0, 10, primes, flags), ErrorKind::kDomain);
}

TEST(Config, ParsesKeysCommentsAndLists) {
  auto kv = KeyValueFile::Parse("# header\n a = 1 \n\nb = 2.5 # trailing\nc = x, y ,z\nd = -3, 4\n",
                                "mem");
  EXPECT_EQ(kv.GetInt("a"), 1);
  EXPECT_DOUBLE_EQ(kv.GetDouble("b"), 2.5);
  EXPECT_EQ(kv.GetList("c"), (std::vector<std::string>{"x", "y", "z"}));
  EXPECT_EQ(kv.GetIntList("d"), (std::vector<int64_t>{-3, 4}));
  EXPECT_EQ(kv.GetOr("missing", "fallback"), "fallback");
  EXPECT_FALSE(kv.Has("missing"));
}

TEST(Config, Errors) {
  EXPECT_TV_ERROR(KeyValueFile::Parse("a = 1\na = 2\n", "dup"), ErrorKind::kConfig);
  EXPECT_TV_ERROR(KeyValueFile::Parse("no equals sign\n", "bad"), ErrorKind::kConfig);
  EXPECT_TV_ERROR(KeyValueFile::Parse("= 3\n", "bad"), ErrorKind::kConfig);
  auto kv = KeyValueFile::Parse("a = 1x\nb = nope\n", "mem");
  EXPECT_TV_ERROR(kv.GetInt("a"), ErrorKind::kConfig);
  EXPECT_TV_ERROR(kv.GetDouble("b"), ErrorKind::kConfig);
  EXPECT_TV_ERROR(kv.Get("zzz"), ErrorKind::kConfig);
  EXPECT_TV_ERROR(KeyValueFile::Load(SourcePath("data/curves/does_not_exist.cfg")),
                  ErrorKind::kIo);
}

TEST(Config, Helpers) {
  EXPECT_EQ(Trim("  a b \t"), "a b");
  EXPECT_EQ(Split(" 1,, 2 ", ','), (std::vector<std::string>{"1", "2"}));  // trimmed, empties dropped
  EXPECT_EQ(ParseInt("1e5", "ctx"), 100000);
  EXPECT_EQ(ParseInt(" 42 ", "ctx"), 42);
  EXPECT_DOUBLE_EQ(ParseDouble("1e-9", "ctx"), 1e-9);
}

TEST(Errors, ExitCodes) {
  EXPECT_EQ(ExitCodeFor(ErrorKind::kConfig), 2);
  EXPECT_EQ(ExitCodeFor(ErrorKind::kDomain), 2);
  EXPECT_EQ(ExitCodeFor(ErrorKind::kNumerical), 3);
  EXPECT_EQ(ExitCodeFor(ErrorKind::kIo), 4);
}

}  // namespace
}  // namespace twistvan
