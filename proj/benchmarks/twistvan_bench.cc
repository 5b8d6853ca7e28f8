#include <benchmark/benchmark.h>

#include <algorithm>
#include <string>
#include <vector>

#include "twistvan/central_values.h"
#include "twistvan/characters.h"
#include "twistvan/curve.h"
#include "twistvan/point_count.h"
#include "twistvan/ratio_conjecture.h"

namespace tv = twistvan;

static const tv::CurveSpec& Curve11A() {
  static const tv::CurveSpec c = tv::LoadCurve(std::string(TWISTVAN_SOURCE_DIR) + "/data/curves/11a.cfg");
  return c;
}

// range(0) = p. Enumeration is O(p^2), the character sum O(p log p), BSGS ~p^{1/4}.
template <int64_t (*trace)(const tv::WeierstrassCoeffs&, uint64_t)>
static void BM_Trace(benchmark::State& state) {
  const auto& a = Curve11A().weierstrass;
  const auto p = static_cast<uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(trace(a, p));
}
BENCHMARK_TEMPLATE(BM_Trace, tv::TraceByEnumeration)->Arg(101)->Arg(1009);
BENCHMARK_TEMPLATE(BM_Trace, tv::TraceByCharacterSum)->Arg(1009)->Arg(10007)->Arg(100003);
BENCHMARK_TEMPLATE(BM_Trace, tv::TraceByGroupOrder)->Arg(1009)->Arg(100003)->Arg(999983);

static void BM_Enumerate(benchmark::State& state) {
  tv::FamilySelector sel;
  sel.curve = &Curve11A();
  sel.bound = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(tv::EnumerateFamily(sel));
}
BENCHMARK(BM_Enumerate)->Arg(10'000)->Arg(100'000);

// Whole-family L-value batch; items = discriminants.
static void BM_LValueBatch(benchmark::State& state) {
  tv::FamilySelector sel;
  sel.curve = &Curve11A();
  sel.bound = state.range(0);
  const auto fam = tv::EnumerateFamily(sel);
  uint64_t limit = 0;
  for (int64_t d : fam) limit = std::max(limit, tv::TermsNeeded(11, d, 1e-9));
  const auto table = tv::CoefficientTable::Build(Curve11A(), limit);
  for (auto _ : state) benchmark::DoNotOptimize(tv::ComputeValues(Curve11A(), table, fam, 1e-9, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(fam.size()));
}
BENCHMARK(BM_LValueBatch)->Arg(2'000)->Arg(10'000)->Unit(benchmark::kMillisecond);

static void BM_BetaTotal(benchmark::State& state) {
  const auto aps = tv::PrimeApTable::Compute(Curve11A(), 100'000);
  tv::BetaOptions opts{tv::PrimeSumPolicy{static_cast<uint64_t>(state.range(0)), true, 0.0}, {}};
  for (auto _ : state)
    benchmark::DoNotOptimize(tv::BetaTotal(Curve11A(), aps, tv::FamilySign::kMinus, 3, -1, -0.5, opts));
}
BENCHMARK(BM_BetaTotal)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
