#include <cmath>
#include <random>

#include "test_util.h"
#include "twistvan/moment_engine.h"
#include "twistvan/primes.h"
#include "twistvan/ratio_conjecture.h"

namespace twistvan {
namespace {

using testing::Curve11A;
using testing::Curve307A;

const PrimeApTable& Aps11() {
  static const PrimeApTable t = PrimeApTable::Compute(Curve11A(), 100000);
  return t;
}
const PrimeApTable& Aps307() {
  static const PrimeApTable t = PrimeApTable::Compute(Curve307A(), 100000);
  return t;
}

PrimeSumPolicy Policy(uint64_t P) { return PrimeSumPolicy{P, true, 0.0}; }

TEST(Constants, Gk) {
  EXPECT_EQ(Gk(1), (Rational{2, 1}));
  EXPECT_EQ(Gk(2), (Rational{4, 1}));
  EXPECT_EQ(Gk(3), (Rational{8, 3}));
  EXPECT_TV_ERROR(Gk(0), ErrorKind::kDomain);
}

TEST(Constants, MO) {
  for (int N = 1; N <= 5; ++N) EXPECT_NEAR(MO(N, 0.0), 1.0, 1e-12) << N;
  EXPECT_NEAR(MO(1, 1.0), 2.0, 1e-12);
  // Independent 40-digit evaluation.
  EXPECT_NEAR(MO(3, 2.0), 14.0, 1e-11);
  EXPECT_NEAR(MO(5, 0.5), 1.0191212543156170391, 1e-12);
  EXPECT_TV_ERROR(MO(3, -0.5), ErrorKind::kDomain);
  EXPECT_TV_ERROR(MO(3, -0.5 + 1e-9), ErrorKind::kDomain);
  EXPECT_TV_ERROR(MO(1, -1.5), ErrorKind::kDomain);
  EXPECT_TV_ERROR(MO(0, 1.0), ErrorKind::kDomain);
  EXPECT_TRUE(std::isfinite(MO(4, -0.25)));
}

TEST(ArithmeticFactor, KZeroIsOne) {
  for (auto s : {FamilySign::kMinus, FamilySign::kPlus}) {
    LocalContext ctx{&Curve11A(), s, std::nullopt};
    EXPECT_EQ(ComputeArithmeticFactor(ctx, Aps11(), 0.0, Policy(100000)).value, 1.0);
    EXPECT_EQ(EulerASeries(ctx, Aps11(), 0, 2, Policy(1000)).series.constant(), 1.0);
  }
}

TEST(ArithmeticFactor, SelfConvergence) {
  LocalContext ctx{&Curve11A(), FamilySign::kMinus, std::nullopt};
  auto a4 = ComputeArithmeticFactor(ctx, Aps11(), 1.0, Policy(10000));
  auto a5 = ComputeArithmeticFactor(ctx, Aps11(), 1.0, Policy(100000));
  EXPECT_GT(a5.value, 0.0);
  // The product converges like sum (a_p^2 - p)/p^2; a decade of primes moves
  // the fourth digit.
  EXPECT_LT(std::fabs(a4.value - a5.value) / a5.value, 2e-3);
  EXPECT_LT(a5.stability_delta, 1e-3);
  PrimeSumPolicy strict = Policy(100000);
  strict.tolerance = 1e-6;
  auto beta_opts = BetaOptions{strict, ConductorTerm::kDerived};
  EXPECT_TV_ERROR(BetaTotal(Curve11A(), Aps11(), FamilySign::kMinus, 3, 1, -0.5, beta_opts),
                  ErrorKind::kNumerical);
}

TEST(ArithmeticFactor, MatchesEulerSeriesConstant) {
  for (const auto& [curve, aps] : {std::pair{&Curve11A(), &Aps11()}, std::pair{&Curve307A(), &Aps307()}})
    for (auto s : {FamilySign::kMinus, FamilySign::kPlus})
      for (int k : {1, 2}) {
        LocalContext ctx{curve, s, std::nullopt};
        double a = ComputeArithmeticFactor(ctx, *aps, k, Policy(20000)).value;
        double e = EulerASeries(ctx, *aps, k, 1, Policy(20000)).series.constant();
        EXPECT_NEAR(e / a, 1.0, 1e-12) << curve->label << " k=" << k;
      }
  LocalContext prog{&Curve11A(), FamilySign::kMinus, Progression{3, -1}};
  double a = ComputeArithmeticFactor(prog, Aps11(), 2, Policy(20000)).value;
  double e = EulerASeries(prog, Aps11(), 2, 1, Policy(20000)).series.constant();
  EXPECT_NEAR(e / a, 1.0, 1e-12);
}

TEST(ArithmeticFactor, CoverageAndContext) {
  auto small = PrimeApTable::Compute(Curve11A(), 1000);
  LocalContext ctx{&Curve11A(), FamilySign::kMinus, std::nullopt};
  EXPECT_TV_ERROR(ComputeArithmeticFactor(ctx, small, 1.0, Policy(100000)), ErrorKind::kConfig);
  LocalContext none{};
  EXPECT_TV_ERROR(ComputeArithmeticFactor(none, small, 1.0, Policy(100)), ErrorKind::kConfig);
}

// Direct evaluation of the local factor at a real point z.
double FactorAt(const CurveSpec& c, FamilySign sign, std::optional<Progression> prog, uint64_t p,
                int64_t ap, const std::vector<double>& z) {
  const double pd = static_cast<double>(p), a = static_cast<double>(ap);
  if (prog && prog->q == p) {
    double v = 1.0;
    for (double zj : z)
      v /= 1.0 - prog->lambda * a * std::pow(pd, -1.0 - zj) + std::pow(pd, -1.0 - 2.0 * zj);
    return v;
  }
  if (c.is_bad(p)) {
    double s = sign == FamilySign::kMinus ? 1.0 : -1.0, v = 1.0;
    for (double zj : z) v /= 1.0 + s * std::pow(pd, -1.0 - zj);
    return v;
  }
  double lp = 1.0, lm = 1.0;
  for (double zj : z) {
    double x = std::pow(pd, -1.0 - zj);
    lp /= 1.0 - a * x + pd * x * x;
    lm /= 1.0 + a * x + pd * x * x;
  }
  return pd / (pd + 1.0) * (1.0 / pd + 0.5 * (lp + lm));
}

TEST(LocalFactors, ConstantTerms) {
  auto b = MonomialBasis::Get(2, 2);
  for (uint64_t p : {2ull, 3ull, 5ull, 13ull}) {
    int64_t ap = Aps11().ApOf(p);
    LocalContext ctx{&Curve11A(), FamilySign::kMinus, std::nullopt};
    auto s = LocalFactorSeries(ctx, p, ap, 2, b);
    const double pd = static_cast<double>(p);
    double want = pd / (pd + 1.0) *
                  (1.0 / pd + 0.5 * (std::pow(LocalFactor(Curve11A(), p, ap, 1.0 / pd), 2) +
                                     std::pow(LocalFactor(Curve11A(), p, ap, -1.0 / pd), 2)));
    EXPECT_NEAR(s.constant(), want, 1e-14) << p;
  }
  LocalContext prog{&Curve11A(), FamilySign::kMinus, Progression{3, 1}};
  auto s = LocalFactorSeries(prog, 3, -1, 2, b);
  EXPECT_NEAR(s.constant(), std::pow(1.0 + 1.0 / 3 + 1.0 / 3, -2.0), 1e-14);
}

TEST(LocalFactors, FiniteDifferences) {
  const double h = 1e-6;
  auto b = MonomialBasis::Get(2, 2);
  std::mt19937_64 rng(5);
  auto primes = PrimesUpTo(400);
  struct Case {
    const CurveSpec* c;
    FamilySign s;
    std::optional<Progression> prog;
    uint64_t p;
  };
  std::vector<Case> cases = {{&Curve11A(), FamilySign::kMinus, Progression{3, 1}, 3},
                             {&Curve11A(), FamilySign::kMinus, Progression{3, -1}, 3},
                             {&Curve11A(), FamilySign::kMinus, std::nullopt, 11},
                             {&Curve11A(), FamilySign::kPlus, std::nullopt, 11}};
  for (int i = 0; i < 10; ++i) {
    uint64_t p = primes[rng() % primes.size()];
    if (p != 11) cases.push_back({&Curve11A(), FamilySign::kMinus, std::nullopt, p});
  }
  for (const auto& cs : cases) {
    int64_t ap = cs.c->is_bad(cs.p) ? 0 : Ap(*cs.c, cs.p);
    LocalContext ctx{cs.c, cs.s, cs.prog};
    auto series = LocalFactorSeries(ctx, cs.p, ap, 2, b);
    auto F = [&](double z1, double z2) { return FactorAt(*cs.c, cs.s, cs.prog, cs.p, ap, {z1, z2}); };
    double d1 = (F(h, 0) - F(-h, 0)) / (2 * h);
    double d12 = (F(h, h) - F(h, -h) - F(-h, h) + F(-h, -h)) / (4 * h * h);
    EXPECT_NEAR(series.coefficient({1, 0, 0, 0}), d1, 1e-8) << cs.p;
    EXPECT_NEAR(series.coefficient({0, 1, 0, 0}), d1, 1e-8) << cs.p;
    EXPECT_NEAR(series.coefficient({1, 1, 0, 0}), d12, 1e-4) << cs.p;
    // log F linear coefficient: the ratio engine's closed forms at k = 2.
    double lin = series.Log().coefficient({1, 0, 0, 0});
    double closed = cs.prog && cs.prog->q == cs.p
                        ? QPrimeLinear(cs.p, ap, cs.prog->lambda, 2.0) -
                              VandermondeCompensationLinear(cs.p, 2.0)
                    : cs.c->is_bad(cs.p) ? BadPrimeLinear(cs.p, cs.s)
                                         : GoodPrimeLinear(cs.p, ap, 2.0);
    EXPECT_NEAR(lin, closed, 1e-12) << cs.p;
  }
}

TEST(LocalFactors, VandermondeCompensation) {
  auto b = MonomialBasis::Get(3, 2);
  auto v = VandermondeCompensationSeries(5, 3, b);
  EXPECT_NEAR(v.constant(), std::pow(1.0 - 0.2, 3), 1e-15);
  // d/dz_1 log: two pairs contain z_1.
  EXPECT_NEAR(v.Log().coefficient({1, 0, 0, 0}), 2.0 * std::log(5.0) / 4.0, 1e-14);
  EXPECT_NEAR(v.Log().coefficient({1, 0, 0, 0}), VandermondeCompensationLinear(5, 3.0), 1e-14);
}

TEST(Upsilon, KOneIsTwiceH0) {
  for (auto s : {FamilySign::kMinus, FamilySign::kPlus}) {
    LocalContext ctx{&Curve11A(), s, std::nullopt};
    auto up = UpsilonPoly(ctx, Aps11(), 1, Policy(20000));
    ASSERT_EQ(up.degree(), 0);
    EXPECT_NEAR(up.coefficients[0], 2.0 * up.h0, 1e-14);
    EXPECT_NEAR(up.Evaluate(7.0), up.coefficients[0], 0.0);
  }
}

TEST(Upsilon, DegreeAndClosedFormPair) {
  for (const auto& [curve, aps] : {std::pair{&Curve11A(), &Aps11()}, std::pair{&Curve307A(), &Aps307()}})
    for (auto s : {FamilySign::kMinus, FamilySign::kPlus})
      for (int k : {2, 3})
        for (std::optional<Progression> prog :
             {std::optional<Progression>{}, std::optional<Progression>{Progression{5, -1}}}) {
          LocalContext ctx{curve, s, prog};
          auto up = UpsilonPoly(ctx, *aps, k, Policy(20000));
          const int m = k * (k - 1) / 2;
          ASSERT_EQ(up.degree(), m);
          auto beta = BetaTotal(*curve, *aps, s, prog ? prog->q : 0, prog ? prog->lambda : 1, k,
                                BetaOptions{Policy(20000), ConductorTerm::kDerived});
          double lead = up.h0 * Gk(k).value();
          EXPECT_NEAR(up.coefficients[m] / lead, 1.0, 1e-8) << curve->label << " k=" << k;
          EXPECT_NEAR(up.coefficients[m - 1] / (lead * m * beta.beta), 1.0, 1e-8)
              << curve->label << " k=" << k;
          EXPECT_NEAR(std::log(up.h0), beta.alpha, 1e-10);
        }
}

TEST(Upsilon, RangeErrors) {
  LocalContext ctx{&Curve11A(), FamilySign::kMinus, std::nullopt};
  EXPECT_TV_ERROR(UpsilonPoly(ctx, Aps11(), 4, Policy(1000)), ErrorKind::kDomain);
  EXPECT_TV_ERROR(UpsilonPoly(ctx, Aps11(), 0, Policy(1000)), ErrorKind::kDomain);
}

TEST(Moments, Integral) {
  EXPECT_NEAR(MomentIntegral({3.0}, 1e5), 3.0, 1e-15);
  const double X = 1e5, L = std::log(X);
  EXPECT_NEAR(MomentIntegral({0.0, 1.0}, X), L - 1.0, 1e-12);
  // Midpoint rule on (1/X) int_0^X P(log t) dt after t = X u.
  std::vector<double> c = {0.5, -0.25, 0.125, 0.01};
  const int n = 2'000'000;
  double q = 0.0;
  for (int i = 0; i < n; ++i) {
    double u = (i + 0.5) / n, x = std::log(X * u);
    q += ((c[3] * x + c[2]) * x + c[1]) * x + c[0];
  }
  q /= n;
  EXPECT_NEAR(MomentIntegral(c, X) / q, 1.0, 1e-4);
  EXPECT_TV_ERROR(MomentIntegral(c, 0.0), ErrorKind::kDomain);
}

TEST(Moments, Empirical) {
  FamilySelector sel;
  sel.curve = &Curve11A();
  std::vector<TwistRecord> one = {{-3, 0.7, 0, false, 0}};
  EXPECT_DOUBLE_EQ(EmpiricalMoment(one, sel, 0), 1.0);
  EXPECT_DOUBLE_EQ(EmpiricalMoment(one, sel, 2), 0.49);
  std::vector<TwistRecord> recs = {{-3, 1.0, 0, false, 0}, {-4, 2.0, 0, false, 0},
                                   {-8, 4.0, 0, false, 0}};
  EXPECT_DOUBLE_EQ(EmpiricalMoment(recs, sel, 1), 7.0 / 3.0);
  // chi_{-3}(3) = 0, chi_{-4}(3) = -1, chi_{-8}(3) = +1
  sel.progression = Progression{3, -1};
  EXPECT_DOUBLE_EQ(EmpiricalMoment(recs, sel, 1), 2.0);
  sel.progression = Progression{3, 1};
  EXPECT_DOUBLE_EQ(EmpiricalMoment(recs, sel, 2), 16.0);
  EXPECT_TV_ERROR(EmpiricalMoment(one, sel, 1), ErrorKind::kDomain);
  sel.progression.reset();
  EXPECT_TV_ERROR(EmpiricalMoment({}, sel, 1), ErrorKind::kDomain);
}

TEST(Moments, LeadingAsymptoticOrder) {
  LocalContext ctx{&Curve11A(), FamilySign::kMinus, std::nullopt};
  auto a1 = ComputeArithmeticFactor(ctx, Aps11(), 1.0, Policy(100000));
  auto up = UpsilonPoly(ctx, Aps11(), 1, Policy(100000));
  double lead = LeadingMomentAsymptotic(a1.value, 1e5, 1.0);
  double integral = MomentIntegral(up.coefficients, 1e5);
  EXPECT_GT(lead / integral, 0.1);
  EXPECT_LT(lead / integral, 10.0);
  EXPECT_TV_ERROR(LeadingMomentAsymptotic(1.0, 2.0, 1.0), ErrorKind::kDomain);
}

}  // namespace
}  // namespace twistvan
