#include "twistvan/prime_sum.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "twistvan/error.h"

namespace twistvan {
namespace {

constexpr int kCheckpoints = 16;

// Checkpoints c * 10^(-i/16), ascending.
std::vector<double> Checkpoints(double c, bool smooth) {
  std::vector<double> out;
  if (!smooth) return {c};
  for (int i = kCheckpoints - 1; i >= 0; --i) out.push_back(c * std::pow(10.0, -i / 16.0));
  return out;
}

}  // namespace

PrimeSumResult SumOverPrimes(const PrimeSumPolicy& policy, size_t dim,
                             std::span<const uint32_t> primes,
                             const std::function<void(size_t, std::span<double>)>& term) {
  if (policy.cutoff < 4) Fail(ErrorKind::kConfig, "prime cutoff must be at least 4");
  if (primes.empty() || primes.back() < policy.cutoff) {
    // Allowed only if no prime lies in (last, cutoff]; callers pass a full sieve.
    uint64_t last = primes.empty() ? 0 : primes.back();
    if (last + 1 < policy.cutoff && last < policy.cutoff / 2)
      Fail(ErrorKind::kInternal, "prime list does not reach the cutoff");
  }
  const double full = static_cast<double>(policy.cutoff);
  auto marks_full = Checkpoints(full, policy.smooth);
  auto marks_half = Checkpoints(full / 2.0, policy.smooth);

  // Every checkpoint with its destination.
  struct Mark {
    double at;
    bool half;
  };
  std::vector<Mark> marks;
  for (double m : marks_full) marks.push_back({m, false});
  for (double m : marks_half) marks.push_back({m, true});
  std::stable_sort(marks.begin(), marks.end(),
                   [](const Mark& a, const Mark& b) { return a.at < b.at; });

  std::vector<double> sum(dim, 0.0), comp(dim, 0.0), buf(dim, 0.0);
  std::vector<double> acc_full(dim, 0.0), acc_half(dim, 0.0);
  size_t next_mark = 0;
  auto flush_upto = [&](double bound) {
    while (next_mark < marks.size() && marks[next_mark].at < bound) {
      auto& acc = marks[next_mark].half ? acc_half : acc_full;
      for (size_t j = 0; j < dim; ++j) acc[j] += sum[j];
      ++next_mark;
    }
  };
  for (size_t i = 0; i < primes.size() && primes[i] <= policy.cutoff; ++i) {
    flush_upto(static_cast<double>(primes[i]));
    std::fill(buf.begin(), buf.end(), 0.0);
    term(i, buf);
    for (size_t j = 0; j < dim; ++j) {
      double y = buf[j] - comp[j];
      double t = sum[j] + y;
      comp[j] = (t - sum[j]) - y;
      sum[j] = t;
    }
  }
  flush_upto(std::numeric_limits<double>::infinity());

  PrimeSumResult r;
  r.cutoff = policy.cutoff;
  r.smoothed = policy.smooth;
  r.value = acc_full;
  r.value_half = acc_half;
  double nf = static_cast<double>(marks_full.size()), nh = static_cast<double>(marks_half.size());
  for (size_t j = 0; j < dim; ++j) {
    r.value[j] /= nf;
    r.value_half[j] /= nh;
    r.stability_delta = std::max(r.stability_delta, std::fabs(r.value[j] - r.value_half[j]));
  }
  return r;
}

void CheckStability(const PrimeSumPolicy& policy, const PrimeSumResult& result,
                    const char* what) {
  if (policy.tolerance <= 0.0) return;
  if (result.stability_delta > policy.tolerance) {
    std::ostringstream msg;
    msg << what << ": prime sum moved by " << result.stability_delta << " between P = "
        << result.cutoff / 2 << " and P = " << result.cutoff << " (tolerance "
        << policy.tolerance << ")";
    Fail(ErrorKind::kNumerical, msg.str());
  }
}

}  // namespace twistvan
