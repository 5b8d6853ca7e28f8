#include "twistvan/moment_engine.h"

#include <cmath>
#include <numbers>

#include "twistvan/error.h"
#include "twistvan/primes.h"

namespace twistvan {
namespace {

constexpr double kZeta[] = {0.0,
                            0.0,
                            1.644934066848226436,
                            1.202056903159594285,
                            1.082323233711138192,
                            1.036927755143369926,
                            1.017343061984449140,
                            1.008349277381922827,
                            1.004077356197944339};

using Coeffs = std::vector<double>;

// Univariate power-series helpers on coefficient vectors.
Coeffs UniLog(const Coeffs& f) {
  if (!(f[0] > 0.0)) Fail(ErrorKind::kDomain, "log of a series with nonpositive constant");
  Coeffs g(f.size(), 0.0);
  g[0] = std::log(f[0]);
  for (size_t n = 1; n < f.size(); ++n) {
    double s = f[n] * static_cast<double>(n);
    for (size_t j = 1; j < n; ++j) s -= static_cast<double>(j) * g[j] * f[n - j];
    g[n] = s / (static_cast<double>(n) * f[0]);
  }
  return g;
}

// c0 + c1 p^{-z} + c2 p^{-2z} as a series in z.
Coeffs ExpPoly(double c0, double c1, double c2, double logp, int degree) {
  Coeffs out(degree + 1, 0.0);
  double t1 = 1.0, t2 = 1.0, fact = 1.0;
  for (int n = 0; n <= degree; ++n) {
    if (n > 0) {
      t1 *= -logp;
      t2 *= -2.0 * logp;
      fact *= n;
    }
    out[n] = (n == 0 ? c0 : 0.0) + c1 * t1 / fact + c2 * t2 / fact;
  }
  return out;
}

// Sum over variables (or pairs z_i + z_j) of a univariate series.
TruncatedSeries SumOverVariables(const Coeffs& g, int k,
                                 const std::shared_ptr<const MonomialBasis>& basis) {
  TruncatedSeries out(basis);
  for (int j = 0; j < k; ++j) out += TruncatedSeries::Univariate(basis, j, g);
  return out;
}

TruncatedSeries SumOverPairs(const Coeffs& g, int k,
                             const std::shared_ptr<const MonomialBasis>& basis) {
  TruncatedSeries out(basis);
  Coeffs tail = g;
  tail[0] = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      TruncatedSeries s =
          TruncatedSeries::Variable(basis, i) + TruncatedSeries::Variable(basis, j);
      out += TruncatedSeries::Compose(tail, s);
      out += g[0];
    }
  }
  return out;
}

void RequireCoverage(const PrimeApTable& aps, uint64_t cutoff) {
  uint64_t top = cutoff;
  while (top > 2 && !IsPrime(top)) --top;
  if (aps.limit() < top)
    Fail(ErrorKind::kConfig, "a_p table stops at " + std::to_string(aps.limit()) +
                                 ", below the prime cutoff " + std::to_string(cutoff));
}

bool IsQ(const LocalContext& ctx, uint64_t p) {
  return ctx.progression && ctx.progression->q == p;
}

// log of the local factor times the Vandermonde compensation.
TruncatedSeries LogLocalSeries(const LocalContext& ctx, uint64_t p, int64_t ap, int k,
                               const std::shared_ptr<const MonomialBasis>& basis) {
  const int D = basis->degree();
  const double pd = static_cast<double>(p), lp = std::log(pd);
  TruncatedSeries out(basis);
  if (IsQ(ctx, p)) {
    double la = ctx.progression->lambda * static_cast<double>(ap);
    Coeffs g = UniLog(ExpPoly(1.0, -la / pd, 1.0 / pd, lp, D));
    for (double& c : g) c = -c;
    out = SumOverVariables(g, k, basis);
  } else if (ctx.curve->is_bad(p)) {
    // (1 -/+ p^{-1-z})^{-1}: minus family gives 1 + p^{-1-z}, plus 1 - p^{-1-z}.
    double s = ctx.sign == FamilySign::kMinus ? 1.0 : -1.0;
    Coeffs g = UniLog(ExpPoly(1.0, s / pd, 0.0, lp, D));
    for (double& c : g) c = -c;
    out = SumOverVariables(g, k, basis);
  } else {
    out = LocalFactorSeries(ctx, p, ap, k, basis).Log();
  }
  Coeffs v = UniLog(ExpPoly(1.0, -1.0 / pd, 0.0, lp, D));
  out += SumOverPairs(v, k, basis);
  return out;
}

}  // namespace

const SeriesConstants& DefaultSeriesConstants() {
  static const SeriesConstants c = [] {
    SeriesConstants s;
    s.euler_gamma = 0.5772156649015328606;
    s.stieltjes = {0.5772156649015328606,    -0.07281584548367672486,
                   -0.009690363192872318485, 0.002053834420303345866,
                   0.002325370065467300057,  0.0007933238173010627018,
                   -0.0002387693454301996099};
    s.loggamma_taylor.assign(9, 0.0);
    s.loggamma_taylor[1] = -s.euler_gamma;
    for (int n = 2; n <= 8; ++n) s.loggamma_taylor[n] = (n % 2 ? -1.0 : 1.0) * kZeta[n] / n;
    return s;
  }();
  return c;
}

std::vector<double> ZetaTimesSSeries(int degree) {
  const auto& st = DefaultSeriesConstants().stieltjes;
  if (degree < 0 || degree > static_cast<int>(st.size()))
    Fail(ErrorKind::kDomain, "zeta series degree out of range");
  std::vector<double> out(degree + 1, 0.0);
  out[0] = 1.0;
  double fact = 1.0;
  for (int n = 0; n + 1 <= degree; ++n) {
    if (n > 0) fact *= n;
    out[n + 1] = (n % 2 ? -1.0 : 1.0) * st[n] / fact;
  }
  return out;
}

TruncatedSeries LocalFactorSeries(const LocalContext& ctx, uint64_t p, int64_t ap, int k,
                                  std::shared_ptr<const MonomialBasis> basis) {
  const int D = basis->degree();
  const double pd = static_cast<double>(p), lp = std::log(pd), a = static_cast<double>(ap);
  auto product_of = [&](const Coeffs& u) {
    TruncatedSeries prod = TruncatedSeries::Constant(basis, 1.0);
    for (int j = 0; j < k; ++j) prod = prod * TruncatedSeries::Univariate(basis, j, u);
    return prod;
  };
  auto inverse_of = [](const Coeffs& f) {
    Coeffs g = UniLog(f);
    for (double& c : g) c = -c;
    return g;
  };
  if (IsQ(ctx, p)) {
    double la = ctx.progression->lambda * a;
    return (SumOverVariables(inverse_of(ExpPoly(1.0, -la / pd, 1.0 / pd, lp, D)), k, basis))
        .Exp();
  }
  if (ctx.curve->is_bad(p)) {
    double s = ctx.sign == FamilySign::kMinus ? 1.0 : -1.0;
    return SumOverVariables(inverse_of(ExpPoly(1.0, s / pd, 0.0, lp, D)), k, basis).Exp();
  }
  // L_p(+-p^{-1-z}) = (1 -/+ a_p p^{-1-z} + p^{-1-2z})^{-1}
  auto lfac = [&](double s) {
    return inverse_of(ExpPoly(1.0, -s * a / pd, 1.0 / pd, lp, D));
  };
  auto exp_uni = [&](const Coeffs& g) {
    Coeffs f(g.size(), 0.0);
    f[0] = std::exp(g[0]);
    for (size_t n = 1; n < g.size(); ++n) {
      double s = 0.0;
      for (size_t j = 1; j <= n; ++j) s += static_cast<double>(j) * g[j] * f[n - j];
      f[n] = s / static_cast<double>(n);
    }
    return f;
  };
  TruncatedSeries plus = product_of(exp_uni(lfac(1.0)));
  TruncatedSeries minus = product_of(exp_uni(lfac(-1.0)));
  TruncatedSeries f = (plus + minus) * 0.5;
  f += 1.0 / pd;
  return f * (pd / (pd + 1.0));
}

TruncatedSeries VandermondeCompensationSeries(uint64_t p, int k,
                                              std::shared_ptr<const MonomialBasis> basis) {
  const double pd = static_cast<double>(p);
  Coeffs v = UniLog(ExpPoly(1.0, -1.0 / pd, 0.0, std::log(pd), basis->degree()));
  return SumOverPairs(v, k, basis).Exp();
}

EulerSeries EulerASeries(const LocalContext& ctx, const PrimeApTable& aps, int k, int degree,
                         const PrimeSumPolicy& policy) {
  if (ctx.curve == nullptr) Fail(ErrorKind::kConfig, "local context has no curve");
  if (k < 0 || k > kMaxSeriesVars) Fail(ErrorKind::kDomain, "k out of range for series");
  RequireCoverage(aps, policy.cutoff);
  auto basis = MonomialBasis::Get(std::max(k, 1), degree);
  EulerSeries out{TruncatedSeries(basis), TruncatedSeries(basis), 0, 0.0, 0.0};
  if (k == 0) {
    out.series = TruncatedSeries::Constant(basis, 1.0);
    out.cutoff = policy.cutoff;
    return out;
  }
  double last = 0.0;
  auto result = SumOverPrimes(policy, basis->size(), aps.primes, [&](size_t i, std::span<double> o) {
    TruncatedSeries t = LogLocalSeries(ctx, aps.primes[i], aps.ap[i], k, basis);
    auto c = t.coefficients();
    last = 0.0;
    for (size_t j = 0; j < c.size(); ++j) {
      o[j] = c[j];
      last = std::max(last, std::fabs(c[j]));
    }
  });
  for (size_t j = 0; j < basis->size(); ++j) {
    Exponents e = basis->exponents(j);
    out.log_series.set_coefficient(e, result.value[j]);
  }
  out.series = out.log_series.Exp();
  out.cutoff = result.cutoff;
  out.stability_delta = result.stability_delta;
  out.last_term = last;
  return out;
}

double MomentPolynomial::Evaluate(double x) const {
  double v = 0.0;
  for (size_t i = coefficients.size(); i-- > 0;) v = v * x + coefficients[i];
  return v;
}

MomentPolynomial UpsilonPoly(const LocalContext& ctx, const PrimeApTable& aps, int k,
                             const PrimeSumPolicy& policy) {
  if (k < 1 || k > 3) Fail(ErrorKind::kDomain, "the residue engine supports k = 1, 2, 3");
  const int m = k * (k - 1) / 2;
  const int D = std::max(m, 1);
  EulerSeries A = EulerASeries(ctx, aps, k, D, policy);
  auto basis = A.log_series.basis_ptr();

  // log h = log A + Gamma/conductor part + log prod zeta(1+z_i+z_j)(z_i+z_j)
  TruncatedSeries logh = A.log_series;
  const auto& lg = DefaultSeriesConstants().loggamma_taylor;
  const double L = std::log(std::sqrt(static_cast<double>(ctx.curve->conductor)) /
                            (2.0 * std::numbers::pi));
  Coeffs gam(D + 1, 0.0);
  for (int n = 1; n <= D; n += 2) gam[n] = lg[n];
  gam[1] += L;
  logh += SumOverVariables(gam, k, basis);
  logh += SumOverPairs(UniLog(ZetaTimesSSeries(D)), k, basis);
  TruncatedSeries h = logh.Exp();

  // prod_{i<j} (z_j - z_i)^2 (z_i + z_j), exactly.
  IntPolynomial P = IntPolynomial::Monomial(Exponents{}, 1);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      Exponents ei{}, ej{};
      ei[i] = 1;
      ej[j] = 1;
      IntPolynomial diff = IntPolynomial::Monomial(ej, 1) + IntPolynomial::Monomial(ei, -1);
      IntPolynomial sum = IntPolynomial::Monomial(ej, 1) + IntPolynomial::Monomial(ei, 1);
      P = P * diff * diff * sum;
    }
  }

  Exponents target{};
  for (int j = 0; j < k; ++j) target[j] = static_cast<uint8_t>(2 * k - 2);
  double pref = (m % 2 ? -1.0 : 1.0) * std::ldexp(1.0, k);
  for (int j = 2; j <= k; ++j) pref /= j;

  TruncatedSeries sigma(basis);
  for (int j = 0; j < k; ++j) sigma += TruncatedSeries::Variable(basis, j);
  TruncatedSeries power = TruncatedSeries::Constant(basis, 1.0);  // sigma^j / j!

  MomentPolynomial poly;
  poly.k = k;
  poly.sign = ctx.sign;
  poly.progression = ctx.progression;
  poly.coefficients.assign(m + 1, 0.0);
  for (int j = 0; j <= m; ++j) {
    if (j > 0) power = power * sigma * (1.0 / j);
    TruncatedSeries T = h * power;
    double c = 0.0;
    for (size_t idx = 0; idx < basis->size(); ++idx) {
      if (basis->total_degree(idx) != m) continue;
      const Exponents& e = basis->exponents(idx);
      Exponents rest{};
      bool ok = true;
      for (int v = 0; v < kMaxSeriesVars; ++v) {
        if (e[v] > target[v]) {
          ok = false;
          break;
        }
        rest[v] = static_cast<uint8_t>(target[v] - e[v]);
      }
      if (!ok) continue;
      int64_t pc = P.coefficient(rest);
      if (pc != 0) c += T.coefficients()[idx] * static_cast<double>(pc);
    }
    poly.coefficients[j] = pref * c;
  }
  if (poly.coefficients[m] == 0.0 || !std::isfinite(poly.coefficients[m]))
    Fail(ErrorKind::kInternal, "residue has degree below k(k-1)/2");
  poly.h0 = A.series.constant();
  poly.cutoff = A.cutoff;
  poly.stability_delta = A.stability_delta;
  return poly;
}

Rational Gk(int k) {
  if (k < 1 || k > 8) Fail(ErrorKind::kDomain, "g_k is tabulated for 1 <= k <= 8");
  __int128 num = static_cast<__int128>(1) << (k * (k + 1) / 2);
  __int128 den = 1;
  for (int j = 1; j < k; ++j) {
    __int128 fj = 1, f2j = 1;
    for (int i = 2; i <= j; ++i) fj *= i;
    for (int i = 2; i <= 2 * j; ++i) f2j *= i;
    num *= fj;
    den *= f2j;
    __int128 a = num, b = den;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    num /= a;
    den /= a;
  }
  return Rational{static_cast<int64_t>(num), static_cast<int64_t>(den)};
}

double MO(int N, double k) {
  if (N < 1) Fail(ErrorKind::kDomain, "M_O needs N >= 1");
  if (std::fabs(k + 0.5) < 1e-8) Fail(ErrorKind::kDomain, "M_O at the pole k = -1/2");
  // log|Gamma| with the sign tracked by hand (lgamma's sign output is not
  // thread safe).
  int sign = 1;
  auto lg = [&](double x) {
    if (x <= 0.0 && std::floor(x) == x)
      Fail(ErrorKind::kDomain, "M_O hits a Gamma pole at k = " + std::to_string(k));
    if (x < 0.0 && static_cast<int64_t>(std::floor(x)) % 2 != 0) sign = -sign;
    return std::lgamma(x);
  };
  double log_value = 2.0 * N * k * std::numbers::ln2;
  for (int j = 1; j <= N; ++j) {
    log_value += lg(N + j - 1.0) + lg(k + j - 0.5);
    double den = lg(j - 0.5) + lg(k + j + N - 1.0);
    log_value -= den;
  }
  return sign * std::exp(log_value);
}

ArithmeticFactor ComputeArithmeticFactor(const LocalContext& ctx, const PrimeApTable& aps,
                                         double k, const PrimeSumPolicy& policy) {
  if (ctx.curve == nullptr) Fail(ErrorKind::kConfig, "local context has no curve");
  RequireCoverage(aps, policy.cutoff);
  if (k == 0.0) return ArithmeticFactor{1.0, policy.cutoff, 0.0};
  const double m = k * (k - 1.0) / 2.0;
  auto result = SumOverPrimes(policy, 1, aps.primes, [&](size_t i, std::span<double> out) {
    const uint64_t p = aps.primes[i];
    const double pd = static_cast<double>(p), a = aps.ap[i];
    double v = m * std::log1p(-1.0 / pd);
    if (IsQ(ctx, p)) {
      v -= k * std::log(1.0 - ctx.progression->lambda * a / pd + 1.0 / pd);
    } else if (ctx.curve->is_bad(p)) {
      v -= k * std::log1p(ctx.sign == FamilySign::kMinus ? 1.0 / pd : -1.0 / pd);
    } else {
      double f1 = 1.0 - a / pd + 1.0 / pd, f2 = 1.0 + a / pd + 1.0 / pd;
      v += std::log(pd / (pd + 1.0) * (1.0 / pd + 0.5 * (std::pow(f1, -k) + std::pow(f2, -k))));
    }
    out[0] = v;
  });
  ArithmeticFactor af;
  af.value = std::exp(result.value[0]);
  af.cutoff = result.cutoff;
  af.stability_delta = std::fabs(std::exp(result.value[0]) - std::exp(result.value_half[0]));
  return af;
}

double EmpiricalMoment(const std::vector<TwistRecord>& records, const FamilySelector& sel,
                       int k) {
  double sum = 0.0, comp = 0.0;
  uint64_t count = 0;
  for (const auto& r : records) {
    if (sel.progression && Kronecker(r.d, sel.progression->q) != sel.progression->lambda)
      continue;
    double t = std::pow(r.value, k);
    double y = t - comp;
    double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
    ++count;
  }
  if (count == 0) Fail(ErrorKind::kDomain, "empirical moment over an empty family");
  return sum / static_cast<double>(count);
}

double MomentIntegral(const std::vector<double>& coefficients, double X) {
  if (!(X > 0.0)) Fail(ErrorKind::kDomain, "moment integral needs X > 0");
  const double lx = std::log(X);
  double I = 1.0, total = 0.0;
  for (size_t m = 0; m < coefficients.size(); ++m) {
    if (m > 0) I = std::pow(lx, static_cast<double>(m)) - static_cast<double>(m) * I;
    total += coefficients[m] * I;
  }
  return total;
}

double LeadingMomentAsymptotic(double arithmetic_factor, double X, double k) {
  if (!(X > std::exp(1.0))) Fail(ErrorKind::kDomain, "leading asymptotic needs log X >= 1");
  return arithmetic_factor * MO(static_cast<int>(std::floor(std::log(X))), k);
}

}  // namespace twistvan
