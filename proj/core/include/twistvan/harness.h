#ifndef TWISTVAN_HARNESS_H_
#define TWISTVAN_HARNESS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twistvan/central_values.h"
#include "twistvan/characters.h"
#include "twistvan/curve.h"
#include "twistvan/ratio_conjecture.h"

namespace twistvan {

const char* BuildId();

// Vanishing counts of one family split by chi_d(q), with both residuals.
struct RatioReport {
  std::string curve;
  FamilySign sign = FamilySign::kMinus;
  uint64_t q = 0;
  int64_t aq = 0;
  int64_t X = 0;
  uint64_t vanished_plus = 0;   // chi_d(q) = +1
  uint64_t vanished_minus = 0;  // chi_d(q) = -1
  uint64_t size_plus = 0;
  uint64_t size_minus = 0;
  double r_main = 0.0;
  double r_second = 0.0;
  // Unset when vanished_minus == 0.
  std::optional<double> r_empirical;
  std::optional<double> resid1;  // R(X) - R_q
  std::optional<double> resid2;  // R(X) - two-term prediction

  bool defined() const { return r_empirical.has_value(); }
};

// d with chi_d(q) = 0 belong to neither class.
RatioReport MakeRatioReport(const std::vector<TwistRecord>& records, const CurveSpec& curve,
                            FamilySign sign, int64_t X, const Prediction& prediction);

// Throws kDomain when the lambda = -1 class has no vanishings.
double RequireRatio(const RatioReport& report);

struct Histogram {
  double bin_width = 0.0002;
  std::map<int64_t, uint64_t> bins;  // floor(v / bin_width) -> count
  uint64_t total() const;
};

Histogram MakeHistogram(const std::vector<double>& values, double bin_width = 0.0002);
std::string HistogramCsv(const Histogram& h);

struct SummaryStats {
  uint64_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // sample variance (n - 1)
};
SummaryStats Summarize(const std::vector<double>& values);

// Suite manifest (key=value): curves = a.cfg, b.cfg; X; q_max; sign = minus |
// plus | both; epsilon; P; records_dir; conductor_term = derived | table.
// Relative curve paths resolve against the manifest's directory.
struct SuiteManifest {
  std::vector<std::string> curve_paths;
  int64_t X = 100'000;
  uint64_t q_max = 500;
  std::vector<FamilySign> signs{FamilySign::kMinus};
  double epsilon = 1e-9;
  uint64_t prime_cutoff = 100'000;
  std::string records_dir = "records";
  ConductorTerm conductor_term = ConductorTerm::kDerived;
};
SuiteManifest LoadSuiteManifest(const std::string& path);

std::string RecordPathFor(const std::string& dir, const CurveSpec& curve, FamilySign sign,
                          int64_t X);
std::string ApCachePathFor(const std::string& dir, const CurveSpec& curve);

// enumerate -> central values -> records file; reuses an existing file whose
// header matches (curve, X, epsilon).
std::vector<TwistRecord> EnsureRecords(const CurveSpec& curve, FamilySign sign, int64_t X,
                                       const VanishingPolicy& policy,
                                       const std::string& records_dir,
                                       const BatchOptions& options = {});

struct ResidualSuite {
  std::vector<RatioReport> rows;
  SummaryStats resid1;         // all defined rows
  SummaryStats resid2;
  SummaryStats resid1_nonzero_aq;  // defined rows with a_q != 0
  SummaryStats resid2_nonzero_aq;
  int64_t X = 0;
  double epsilon = 0.0;
  uint64_t prime_cutoff = 0;
};

// Reports for every prime q <= q_max with q !| Q, for each curve and sign.
// Record files must already exist in records_dir (kIo naming the curve
// otherwise).
ResidualSuite RunResidualSuite(const std::vector<CurveSpec>& curves,
                               const std::vector<FamilySign>& signs, int64_t X, uint64_t q_max,
                               const std::string& records_dir, double epsilon,
                               const BetaOptions& beta_options);

// Columns: curve,sign,q,a_q,resid1,resid2,r_empirical,r_main,r_second,
// vanished_plus,vanished_minus,size_plus,size_minus,X,epsilon,P,build_id.
// Undefined ratios are empty fields.
std::string ResidualCsv(const ResidualSuite& suite);
// Rows grouped by a_q (ascending), then q: a_q,q,curve,sign,resid1,resid2.
std::string ByAqCsv(const ResidualSuite& suite);
// column,count,mean,variance for resid1/resid2 (all rows and a_q != 0 rows).
std::string StatsCsv(const ResidualSuite& suite);
// Table layout for one curve: q,a_q,resid1_minus,resid2_minus,resid1_plus,resid2_plus.
std::string TableCsv(const ResidualSuite& suite, const std::string& curve_label);

}  // namespace twistvan

#endif  // TWISTVAN_HARNESS_H_
