#include "twistvan/ratio_conjecture.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "twistvan/error.h"
#include "twistvan/moment_engine.h"
#include "twistvan/primes.h"

namespace twistvan {

double GammaFactorLinear(int64_t conductor) {
  return -DefaultSeriesConstants().euler_gamma +
         std::log(std::sqrt(static_cast<double>(conductor)) / (2.0 * std::numbers::pi));
}

double ZetaFactorLinear(double k) { return (k - 1.0) * DefaultSeriesConstants().euler_gamma; }

double VandermondeCompensationLinear(uint64_t p, double k) {
  const double pd = static_cast<double>(p);
  return (k - 1.0) * std::log(pd) / (pd - 1.0);
}

double GoodPrimeLinear(uint64_t p, int64_t ap, double k) {
  const double pd = static_cast<double>(p), a = static_cast<double>(ap);
  const double f1 = 1.0 - a / pd + 1.0 / pd, f2 = 1.0 + a / pd + 1.0 / pd;
  const double num = (2.0 - a) * std::pow(f1, -k - 1.0) + (2.0 + a) * std::pow(f2, -k - 1.0);
  const double den = 2.0 + pd * (std::pow(f1, -k) + std::pow(f2, -k));
  return std::log(pd) * num / den;
}

double BadPrimeLinear(uint64_t p, FamilySign sign) {
  const double pd = static_cast<double>(p);
  return sign == FamilySign::kMinus ? std::log(pd) / (1.0 + pd) : std::log(pd) / (1.0 - pd);
}

double QPrimeLinear(uint64_t q, int64_t aq, int lambda, double k) {
  const double qd = static_cast<double>(q);
  const double la = static_cast<double>(lambda) * static_cast<double>(aq);
  const double den = la - qd - 1.0;
  if (den == 0.0) Fail(ErrorKind::kInternal, "lambda a_q = q + 1 violates the Hasse bound");
  return VandermondeCompensationLinear(q, k) + std::log(qd) * (la - 2.0) / den;
}

double BetaPrimeTerm(const CurveSpec& curve, FamilySign sign, uint64_t q, int lambda, int64_t aq,
                     uint64_t p, int64_t ap, double k) {
  if (p == q) return QPrimeLinear(q, aq, lambda, k);
  double v = VandermondeCompensationLinear(p, k);
  return v + (curve.is_bad(p) ? BadPrimeLinear(p, sign) : GoodPrimeLinear(p, ap, k));
}

namespace {

// log of F_p(0) times the Vandermonde compensation at 0, real k.
double AlphaPrimeTerm(const CurveSpec& curve, FamilySign sign, uint64_t q, int lambda,
                      int64_t aq, uint64_t p, int64_t ap, double k) {
  const double pd = static_cast<double>(p), a = static_cast<double>(ap);
  double v = k * (k - 1.0) / 2.0 * std::log1p(-1.0 / pd);
  if (p == q) {
    v -= k * std::log(1.0 - lambda * static_cast<double>(aq) / pd + 1.0 / pd);
  } else if (curve.is_bad(p)) {
    v -= k * std::log1p(sign == FamilySign::kMinus ? 1.0 / pd : -1.0 / pd);
  } else {
    double f1 = 1.0 - a / pd + 1.0 / pd, f2 = 1.0 + a / pd + 1.0 / pd;
    v += std::log(pd / (pd + 1.0) * (1.0 / pd + 0.5 * (std::pow(f1, -k) + std::pow(f2, -k))));
  }
  return v;
}

}  // namespace

BetaExpansion BetaTotal(const CurveSpec& curve, const PrimeApTable& aps, FamilySign sign,
                        uint64_t q, int lambda, double k, const BetaOptions& options) {
  if (q != 0 && !IsPrime(q))
    Fail(ErrorKind::kConfig, "q = " + std::to_string(q) + " is not prime");
  if (q != 0 && curve.is_bad(q)) Fail(ErrorKind::kConfig, "q = " + std::to_string(q) + " divides Q");
  if (lambda != 1 && lambda != -1) Fail(ErrorKind::kConfig, "lambda must be +1 or -1");
  if (sign == FamilySign::kPlus && !IsPrime(static_cast<uint64_t>(curve.conductor)))
    Fail(ErrorKind::kConfig, "S+ needs a prime conductor");
  uint64_t top = options.prime_sum.cutoff;
  while (top > 2 && !IsPrime(top)) --top;
  if (aps.limit() < top || aps.limit() < q)
    Fail(ErrorKind::kConfig, "a_p table stops at " + std::to_string(aps.limit()) +
                                 ", below the prime cutoff");
  const int64_t aq = q == 0 ? 0 : aps.ApOf(q);

  auto sums = SumOverPrimes(options.prime_sum, 2, aps.primes, [&](size_t i, std::span<double> o) {
    const uint64_t p = aps.primes[i];
    o[0] = AlphaPrimeTerm(curve, sign, q, lambda, aq, p, aps.ap[i], k);
    o[1] = BetaPrimeTerm(curve, sign, q, lambda, aq, p, aps.ap[i], k);
  });
  CheckStability(options.prime_sum, sums, "beta");

  const double L = std::log(std::sqrt(static_cast<double>(curve.conductor)) /
                            (2.0 * std::numbers::pi));
  double conductor_weight = 1.0;
  if (options.conductor_term == ConductorTerm::kTableCompatible) {
    const double m = k * (k - 1.0) / 2.0;
    if (m == 0.0) Fail(ErrorKind::kDomain, "table-compatible conductor term needs k(k-1) != 0");
    conductor_weight = 1.0 / m;
  }
  BetaExpansion b;
  b.k = k;
  b.sign = sign;
  b.q = q;
  b.lambda = lambda;
  b.alpha = sums.value[0];
  b.beta = GammaFactorLinear(curve.conductor) + ZetaFactorLinear(k) + sums.value[1];
  if (conductor_weight != 1.0) b.beta += (conductor_weight - 1.0) * L;
  b.cutoff = sums.cutoff;
  b.stability_delta = sums.stability_delta;
  return b;
}

double H0Ratio(uint64_t q, int64_t aq, double k) {
  const double qd = static_cast<double>(q), a = static_cast<double>(aq);
  return std::pow((qd + 1.0 - a) / (qd + 1.0 + a), -k);
}

double RMain(uint64_t q, int64_t aq) {
  const double qd = static_cast<double>(q), a = static_cast<double>(aq);
  if (a * a >= 4.0 * qd) Fail(ErrorKind::kDomain, "a_q violates the Hasse bound");
  return std::sqrt((qd + 1.0 - a) / (qd + 1.0 + a));
}

Prediction PredictRatio(const CurveSpec& curve, const PrimeApTable& aps, FamilySign sign,
                        uint64_t q, double X, const BetaOptions& options, double k_eval) {
  if (!(X >= 3.0)) Fail(ErrorKind::kDomain, "prediction needs X >= 3");
  BetaExpansion plus = BetaTotal(curve, aps, sign, q, 1, k_eval, options);
  BetaExpansion minus = BetaTotal(curve, aps, sign, q, -1, k_eval, options);
  Prediction p;
  p.q = q;
  p.aq = aps.ApOf(q);
  p.X = X;
  p.r_main = RMain(q, p.aq);
  p.beta_plus = plus.beta;
  p.beta_minus = minus.beta;
  const double m = k_eval * (k_eval - 1.0) / 2.0;
  const double lx = std::log(X);
  p.r_second = H0Ratio(q, p.aq, k_eval) * (1.0 + m * (plus.beta - 1.0) / lx) /
               (1.0 + m * (minus.beta - 1.0) / lx);
  p.cutoff = plus.cutoff;
  p.stability_delta = std::max(plus.stability_delta, minus.stability_delta);
  return p;
}

}  // namespace twistvan
