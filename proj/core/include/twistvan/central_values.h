#ifndef TWISTVAN_CENTRAL_VALUES_H_
#define TWISTVAN_CENTRAL_VALUES_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "twistvan/characters.h"
#include "twistvan/curve.h"

namespace twistvan {

struct TwistRecord {
  int64_t d = 0;
  double value = 0.0;
  double err = 0.0;
  bool vanished = false;
  uint64_t terms = 0;
};

struct VanishingPolicy {
  double epsilon = 1e-9;
  double gap_min = 1e3;
};

void ValidatePolicy(const VanishingPolicy& policy);

// Smallest N with 4 r^(N+1) / (1 - r) < epsilon, r = exp(-2 pi / (sqrt(Q)|d|)).
// The bound uses |a_n chi_d(n) / n| <= d(n) / sqrt(n) <= 2.
uint64_t TermsNeeded(int64_t conductor, int64_t d, double epsilon);
double TailBound(int64_t conductor, int64_t d, uint64_t terms);

struct LValue {
  double value = 0.0;
  double err = 0.0;
  uint64_t terms = 0;
};

// L_E(1, chi_d) = 2 sum_{n<=N} a_n chi_d(n)/n exp(-2 pi n / (sqrt(Q)|d|)),
// valid when chi_d(-Q) w_E = +1. Throws kDomain on odd sign and kCapacity if
// the table is shorter than N.
LValue CentralValue(const CurveSpec& curve, const CoefficientTable& table, int64_t d,
                    double epsilon);

// Zero cluster = records with |value| < sqrt(epsilon). Requires
// min nonzero / max zero (or epsilon when the cluster is empty) >= gap_min,
// otherwise throws kNumerical naming both straddling discriminants.
std::vector<TwistRecord> Classify(std::vector<TwistRecord> records,
                                  const VanishingPolicy& policy);

struct BatchOptions {
  unsigned workers = 1;
  // Directory for the a_p cache; empty disables caching.
  std::string cache_dir;
  uint64_t coefficient_budget = CoefficientTable::kDefaultBudget;
};

// One classified record per family member, ascending |d|. Output does not
// depend on the worker count. Throws kNumerical if some value < -err.
std::vector<TwistRecord> ComputeBatch(const CurveSpec& curve, const FamilySelector& sel,
                                      const VanishingPolicy& policy,
                                      const BatchOptions& options = {});

// Same, for an explicit discriminant list and a prebuilt table.
std::vector<TwistRecord> ComputeValues(const CurveSpec& curve, const CoefficientTable& table,
                                       std::span<const int64_t> discriminants,
                                       double epsilon, unsigned workers);

}  // namespace twistvan

#endif  // TWISTVAN_CENTRAL_VALUES_H_
