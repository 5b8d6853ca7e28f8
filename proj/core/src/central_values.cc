#include "twistvan/central_values.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <thread>

#include "twistvan/coefficient_cache.h"
#include "twistvan/error.h"
#include "twistvan/primes.h"

namespace twistvan {
namespace {

constexpr size_t kBlock = 4096;
constexpr size_t kTile = 8;

double Alpha(int64_t conductor, int64_t d) {
  return 2.0 * std::numbers::pi /
         (std::sqrt(static_cast<double>(conductor)) * static_cast<double>(std::llabs(d)));
}

// Everything needed to run the kernel for one discriminant.
struct Job {
  int64_t d = 0;
  uint64_t modulus = 0;
  uint64_t terms = 0;
  double alpha = 0.0;
  std::vector<int8_t> chi;    // chi_d(n mod |d|), extended by one block
  std::vector<double> rpow;   // exp(-alpha i), i < kBlock
  double hi = 0.0, lo = 0.0;  // Kahan state over blocks
};

void Prepare(Job& job, std::span<const uint32_t> spf, double epsilon, int64_t conductor) {
  const uint64_t m = static_cast<uint64_t>(std::llabs(job.d));
  job.modulus = m;
  job.terms = TermsNeeded(conductor, job.d, epsilon);
  job.alpha = Alpha(conductor, job.d);
  job.chi.assign(m + kBlock, 0);
  // Completely multiplicative fill over one period; chi_d has period |d|.
  std::vector<int8_t> base(m, 0);
  if (m > 1) base[1] = 1;
  for (uint64_t n = 2; n < m; ++n) {
    uint64_t p = spf[n];
    base[n] = p == n ? static_cast<int8_t>(Kronecker(job.d, p))
                     : static_cast<int8_t>(base[p] * base[n / p]);
  }
  for (uint64_t i = 0; i < m + kBlock; i += m)
    std::copy_n(base.begin(), std::min<uint64_t>(m, m + kBlock - i), job.chi.begin() + i);
  // exp(-alpha i) as a product of two short exp tables, i = 64 hi + lo.
  double fine[64], coarse[kBlock / 64];
  for (size_t i = 0; i < 64; ++i) fine[i] = std::exp(-job.alpha * static_cast<double>(i));
  for (size_t j = 0; j < kBlock / 64; ++j)
    coarse[j] = std::exp(-job.alpha * static_cast<double>(64 * j));
  job.rpow.resize(kBlock);
  for (size_t i = 0; i < kBlock; ++i) job.rpow[i] = coarse[i / 64] * fine[i % 64];
  job.hi = job.lo = 0.0;
}

// Adds the block starting at n0 (c[0] is zero, so n0 = 0 is harmless).
void AccumulateBlock(Job& job, const double* c, uint64_t n0) {
  if (n0 > job.terms) return;
  const size_t len = static_cast<size_t>(std::min<uint64_t>(kBlock, job.terms + 1 - n0));
  const int8_t* chi = job.chi.data() + (n0 % job.modulus);
  const double* cn = c + n0;
  const double* rp = job.rpow.data();
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    s0 += cn[i] * chi[i] * rp[i];
    s1 += cn[i + 1] * chi[i + 1] * rp[i + 1];
    s2 += cn[i + 2] * chi[i + 2] * rp[i + 2];
    s3 += cn[i + 3] * chi[i + 3] * rp[i + 3];
  }
  for (; i < len; ++i) s0 += cn[i] * chi[i] * rp[i];
  double block = ((s0 + s1) + (s2 + s3)) * std::exp(-job.alpha * static_cast<double>(n0));
  double y = block - job.lo;
  double t = job.hi + y;
  job.lo = (t - job.hi) - y;
  job.hi = t;
}

}  // namespace

void ValidatePolicy(const VanishingPolicy& policy) {
  if (!(policy.epsilon > 0.0) || !std::isfinite(policy.epsilon))
    Fail(ErrorKind::kConfig, "epsilon must be a positive number");
  if (!(policy.gap_min >= 1e3)) Fail(ErrorKind::kConfig, "gap_min must be at least 1e3");
}

double TailBound(int64_t conductor, int64_t d, uint64_t terms) {
  double a = Alpha(conductor, d);
  return 4.0 * std::exp(-a * static_cast<double>(terms + 1)) / -std::expm1(-a);
}

uint64_t TermsNeeded(int64_t conductor, int64_t d, double epsilon) {
  if (d == 0) Fail(ErrorKind::kDomain, "TermsNeeded: d = 0");
  if (!(epsilon > 0.0)) Fail(ErrorKind::kDomain, "TermsNeeded: epsilon must be positive");
  double a = Alpha(conductor, d);
  double guess = std::log(4.0 / (epsilon * -std::expm1(-a))) / a - 1.0;
  uint64_t n = guess > 1.0 ? static_cast<uint64_t>(guess) : 1;
  while (n > 1 && TailBound(conductor, d, n - 1) < epsilon) --n;
  while (TailBound(conductor, d, n) >= epsilon) ++n;
  return n;
}

std::vector<TwistRecord> ComputeValues(const CurveSpec& curve, const CoefficientTable& table,
                                       std::span<const int64_t> discriminants,
                                       double epsilon, unsigned workers) {
  std::vector<TwistRecord> out(discriminants.size());
  if (discriminants.empty()) return out;
  uint64_t max_m = 0, max_terms = 0;
  for (int64_t d : discriminants) {
    if (d == 0) Fail(ErrorKind::kDomain, "discriminant 0");
    if (ChiSigned(d, -curve.conductor) * curve.root_number != 1)
      Fail(ErrorKind::kDomain, "d = " + std::to_string(d) + " has odd twisted sign");
    max_m = std::max<uint64_t>(max_m, static_cast<uint64_t>(std::llabs(d)));
    max_terms = std::max(max_terms, TermsNeeded(curve.conductor, d, epsilon));
  }
  if (table.limit() < max_terms)
    Fail(ErrorKind::kCapacity, "coefficient table has " + std::to_string(table.limit()) +
                                   " terms but " + std::to_string(max_terms) + " are needed");

  // c_n = a_n / n, padded by one block so the kernel never reads past the end.
  std::vector<double> c(max_terms + 1 + kBlock, 0.0);
  for (uint64_t n = 1; n <= max_terms; ++n) c[n] = table[n] / static_cast<double>(n);
  auto spf = SmallestPrimeFactors(static_cast<uint32_t>(std::max<uint64_t>(max_m, 2)));

  const size_t tiles = (discriminants.size() + kTile - 1) / kTile;
  std::atomic<size_t> next{0};
  auto work = [&] {
    std::vector<Job> jobs(kTile);
    for (size_t t = next++; t < tiles; t = next++) {
      size_t begin = t * kTile, end = std::min(begin + kTile, discriminants.size());
      uint64_t longest = 0;
      for (size_t i = begin; i < end; ++i) {
        Job& job = jobs[i - begin];
        job.d = discriminants[i];
        Prepare(job, spf, epsilon, curve.conductor);
        longest = std::max(longest, job.terms);
      }
      // Walk the coefficients once per tile so a block of c stays in cache.
      for (uint64_t n0 = 0; n0 <= longest; n0 += kBlock) {
        for (size_t i = begin; i < end; ++i) AccumulateBlock(jobs[i - begin], c.data(), n0);
      }
      for (size_t i = begin; i < end; ++i) {
        const Job& job = jobs[i - begin];
        TwistRecord& r = out[i];
        r.d = job.d;
        r.value = 2.0 * job.hi;
        r.err = TailBound(curve.conductor, job.d, job.terms);
        r.terms = job.terms;
      }
    }
  };
  unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(tiles)));
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return out;
}

LValue CentralValue(const CurveSpec& curve, const CoefficientTable& table, int64_t d,
                    double epsilon) {
  int64_t one[1] = {d};
  auto r = ComputeValues(curve, table, one, epsilon, 1);
  return LValue{r[0].value, r[0].err, r[0].terms};
}

std::vector<TwistRecord> Classify(std::vector<TwistRecord> records,
                                  const VanishingPolicy& policy) {
  ValidatePolicy(policy);
  const double threshold = std::sqrt(policy.epsilon);
  const TwistRecord* max_zero = nullptr;
  const TwistRecord* min_nonzero = nullptr;
  for (const auto& r : records) {
    double v = std::fabs(r.value);
    if (v < threshold) {
      if (!max_zero || v > std::fabs(max_zero->value)) max_zero = &r;
    } else if (!min_nonzero || v < std::fabs(min_nonzero->value)) {
      min_nonzero = &r;
    }
  }
  if (min_nonzero) {
    double denom = max_zero ? std::fabs(max_zero->value) : policy.epsilon;
    double ratio = std::fabs(min_nonzero->value) / denom;
    if (!(ratio >= policy.gap_min)) {
      std::string zero_d = max_zero ? std::to_string(max_zero->d) : std::string("none");
      Fail(ErrorKind::kNumerical,
           "vanishing gap " + std::to_string(ratio) + " below " + std::to_string(policy.gap_min) +
               " between d = " + zero_d + " and d = " + std::to_string(min_nonzero->d) +
               "; tighten epsilon");
    }
  }
  for (auto& r : records) r.vanished = std::fabs(r.value) < threshold;
  return records;
}

std::vector<TwistRecord> ComputeBatch(const CurveSpec& curve, const FamilySelector& sel,
                                      const VanishingPolicy& policy,
                                      const BatchOptions& options) {
  ValidatePolicy(policy);
  auto family = EnumerateFamily(sel);
  if (family.empty()) return {};
  uint64_t max_terms = 0;
  for (int64_t d : family)
    max_terms = std::max(max_terms, TermsNeeded(curve.conductor, d, policy.epsilon));
  if (max_terms > options.coefficient_budget)
    Fail(ErrorKind::kCapacity, "X needs " + std::to_string(max_terms) +
                                   " coefficients, over the budget of " +
                                   std::to_string(options.coefficient_budget));

  auto primes = PrimesUpTo(static_cast<uint32_t>(max_terms));
  std::vector<int32_t> ap;
  if (!options.cache_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(options.cache_dir, ec);
    if (ec) Fail(ErrorKind::kIo, "cannot create cache dir " + options.cache_dir);
    auto path = (std::filesystem::path(options.cache_dir) / (curve.label + ".ap")).string();
    ap = EnsureApCache(curve, static_cast<uint32_t>(max_terms), path);
  } else {
    ap = ApList(curve, primes);
  }
  auto table = CoefficientTable::Build(curve, max_terms, primes, ap, options.coefficient_budget);
  auto records = ComputeValues(curve, table, family, policy.epsilon, options.workers);
  // Twisted central values are nonnegative; allow for the truncation bound and
  // a little summation roundoff.
  for (const auto& r : records) {
    if (r.value < -(r.err + 1e-12))
      Fail(ErrorKind::kNumerical, "negative central value " + std::to_string(r.value) +
                                      " at d = " + std::to_string(r.d));
  }
  return Classify(std::move(records), policy);
}

}  // namespace twistvan
