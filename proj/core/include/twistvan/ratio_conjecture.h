#ifndef TWISTVAN_RATIO_CONJECTURE_H_
#define TWISTVAN_RATIO_CONJECTURE_H_

#include <cstdint>

#include "twistvan/characters.h"
#include "twistvan/curve.h"
#include "twistvan/prime_sum.h"

namespace twistvan {

// Linear Maclaurin coefficients (coefficient of sum z_j) of the log of each
// factor of h_k. Every formula is algebraic in k, so one code path serves the
// integer-k moment checks and the k = -1/2 interpolation.

// (1/2) log(Gamma(1+z)/Gamma(1-z) (Q/4pi^2)^z): -gamma + log(sqrt(Q)/(2pi))
double GammaFactorLinear(int64_t conductor);
// log prod_{i<j} zeta(1+z_i+z_j)(z_i+z_j): (k-1) gamma
double ZetaFactorLinear(double k);
// log prod_{i<j}(1 - p^{-1-z_i-z_j}): (k-1) log p / (p-1)
double VandermondeCompensationLinear(uint64_t p, double k);
// log F_{k,p} at a good prime p != q.
double GoodPrimeLinear(uint64_t p, int64_t ap, double k);
// log F_{k,p} at p | Q: log p/(1+p) for S-, log p/(1-p) for S+.
double BadPrimeLinear(uint64_t p, FamilySign sign);
// Full per-prime coefficient at p = q (includes the Vandermonde part).
double QPrimeLinear(uint64_t q, int64_t aq, int lambda, double k);

// How log(sqrt(Q)/2pi) enters beta.
enum class ConductorTerm {
  // As derived from the Gamma factor: weight 1 in beta.
  kDerived,
  // Weight 2/(k(k-1)) (8/3 at k = -1/2), so the conductor contributes
  // log(sqrt(Q)/2pi)/log X to the ratio correction unscaled. This is the
  // convention the published residual tables follow.
  kTableCompatible,
};

struct BetaOptions {
  PrimeSumPolicy prime_sum{};
  ConductorTerm conductor_term = ConductorTerm::kDerived;
};

struct BetaExpansion {
  double k = 0.0;
  FamilySign sign = FamilySign::kMinus;
  uint64_t q = 0;
  int lambda = 1;
  double alpha = 0.0;  // log h_k(0; q, lambda) = log A_k(0; q, lambda)
  double beta = 0.0;
  uint64_t cutoff = 0;
  double stability_delta = 0.0;
};

// beta_k(q, lambda) = (k-2) gamma + log(sqrt(Q)/2pi) + sum_{p<=P} beta_k(p).
// Requires q prime, q !| Q, and (for S+) prime Q. q = 0 means no progression:
// every prime keeps its family factor and lambda is ignored.
BetaExpansion BetaTotal(const CurveSpec& curve, const PrimeApTable& aps, FamilySign sign,
                        uint64_t q, int lambda, double k, const BetaOptions& options = {});

// The per-prime term beta_k(p) of the sum above.
double BetaPrimeTerm(const CurveSpec& curve, FamilySign sign, uint64_t q, int lambda,
                     int64_t aq, uint64_t p, int64_t ap, double k);

// ((q+1-a_q)/(q+1+a_q))^(-k)
double H0Ratio(uint64_t q, int64_t aq, double k);
// sqrt((q+1-a_q)/(q+1+a_q))
double RMain(uint64_t q, int64_t aq);

struct Prediction {
  uint64_t q = 0;
  int64_t aq = 0;
  double X = 0.0;
  double r_main = 0.0;
  double beta_plus = 0.0;   // beta(q, +1)
  double beta_minus = 0.0;  // beta(q, -1)
  double r_second = 0.0;
  uint64_t cutoff = 0;
  double stability_delta = 0.0;
};

// Two-term prediction for R_q(X) at k_eval (default -1/2):
//   H0Ratio * (1 + m(beta+ - 1)/log X) / (1 + m(beta- - 1)/log X),
// m = k(k-1)/2 (3/8 at k = -1/2). a_q = 0 gives exactly 1.
Prediction PredictRatio(const CurveSpec& curve, const PrimeApTable& aps, FamilySign sign,
                        uint64_t q, double X, const BetaOptions& options = {},
                        double k_eval = -0.5);

}  // namespace twistvan

#endif  // TWISTVAN_RATIO_CONJECTURE_H_
