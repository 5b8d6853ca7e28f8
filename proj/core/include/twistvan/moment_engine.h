#ifndef TWISTVAN_MOMENT_ENGINE_H_
#define TWISTVAN_MOMENT_ENGINE_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "twistvan/central_values.h"
#include "twistvan/characters.h"
#include "twistvan/curve.h"
#include "twistvan/prime_sum.h"
#include "twistvan/series.h"

namespace twistvan {

struct SeriesConstants {
  double euler_gamma;
  // gamma_0 .. gamma_6: zeta(1+s) = 1/s + sum_n (-1)^n gamma_n s^n / n!
  std::vector<double> stieltjes;
  // loggamma_taylor[n] = coefficient of z^n in log Gamma(1+z), n = 0..8
  std::vector<double> loggamma_taylor;
};
const SeriesConstants& DefaultSeriesConstants();

// Maclaurin coefficients of s * zeta(1+s) up to s^degree (degree <= 7).
std::vector<double> ZetaTimesSSeries(int degree);

// Which local factor of the Euler product applies at a prime.
struct LocalContext {
  const CurveSpec* curve = nullptr;
  FamilySign sign = FamilySign::kMinus;
  std::optional<Progression> progression;  // replaces the factor at p = q
};

// F_{k,p}(z_1..z_k) as a truncated series in k variables: the twist-average
// factor for good p, the bad-prime product for p | Q, and the lambda factor
// at p = q. The Vandermonde compensation is separate.
TruncatedSeries LocalFactorSeries(const LocalContext& ctx, uint64_t p, int64_t ap, int k,
                                  std::shared_ptr<const MonomialBasis> basis);

// prod_{i<j} (1 - p^(-1 - z_i - z_j))
TruncatedSeries VandermondeCompensationSeries(uint64_t p, int k,
                                              std::shared_ptr<const MonomialBasis> basis);

struct EulerSeries {
  TruncatedSeries log_series;
  TruncatedSeries series;
  uint64_t cutoff = 0;
  double stability_delta = 0.0;
  double last_term = 0.0;  // max |coefficient| of the log term at the last prime
};

// A_k(z) = prod_{p <= P} F_{k,p}(z) prod_{i<j}(1 - p^{-1-z_i-z_j}), truncated
// at total degree `degree`, accumulated as a sum of logs then exponentiated.
EulerSeries EulerASeries(const LocalContext& ctx, const PrimeApTable& aps, int k, int degree,
                         const PrimeSumPolicy& policy);

// Upsilon polynomial in x, ascending coefficients c_0..c_m, m = k(k-1)/2.
struct MomentPolynomial {
  int k = 0;
  FamilySign sign = FamilySign::kMinus;
  std::optional<Progression> progression;
  std::vector<double> coefficients;
  double h0 = 0.0;  // h_k(0) = A_k(0)
  uint64_t cutoff = 0;
  double stability_delta = 0.0;

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
  double Evaluate(double x) const;
};

// Residue extraction for k = 1, 2, 3 by series arithmetic: h_k(z) =
// A_k * Gamma-ratio/conductor factor * prod zeta(1+z_i+z_j)(z_i+z_j) times the
// exact polynomial prod_{i<j}(z_j-z_i)^2(z_i+z_j) = Delta(z^2)^2 / prod(z_i+z_j)
// times e^{x sum z_j}; reads the coefficient of prod z_j^{2k-2}.
MomentPolynomial UpsilonPoly(const LocalContext& ctx, const PrimeApTable& aps, int k,
                             const PrimeSumPolicy& policy);

// g_k(O+) = 2^{k(k+1)/2} prod_{j=1}^{k-1} j!/(2j)!
struct Rational {
  int64_t num = 0;
  int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};
Rational Gk(int k);

// Random-matrix factor M_O(N, k); kDomain within 1e-8 of the pole k = -1/2.
double MO(int N, double k);

struct ArithmeticFactor {
  double value = 0.0;
  uint64_t cutoff = 0;
  double stability_delta = 0.0;
};

// A(k): truncated Euler product over p <= P, for real k. With a progression,
// the factor at q becomes (1 - lambda a_q / q + 1/q)^-k.
ArithmeticFactor ComputeArithmeticFactor(const LocalContext& ctx, const PrimeApTable& aps,
                                         double k, const PrimeSumPolicy& policy);

// (1/|S|) sum value^k over records, restricted to chi_d(q) = lambda when the
// selector carries a progression. kDomain on an empty family.
double EmpiricalMoment(const std::vector<TwistRecord>& records, const FamilySelector& sel,
                       int k);

// (1/X) int_0^X P(log t) dt, exactly, via I_m = (log X)^m - m I_{m-1}.
double MomentIntegral(const std::vector<double>& coefficients, double X);

// A(k) * M_O(floor(log X), k)
double LeadingMomentAsymptotic(double arithmetic_factor, double X, double k);

}  // namespace twistvan

#endif  // TWISTVAN_MOMENT_ENGINE_H_
