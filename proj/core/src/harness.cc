#include "twistvan/harness.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "twistvan/config.h"
#include "twistvan/error.h"
#include "twistvan/primes.h"
#include "twistvan/record_file.h"

#ifndef TWISTVAN_BUILD_ID
#define TWISTVAN_BUILD_ID "unknown"
#endif

namespace twistvan {
namespace {

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string Opt(const std::optional<double>& v) { return v ? Num(*v) : std::string(); }

}  // namespace

const char* BuildId() { return TWISTVAN_BUILD_ID; }

RatioReport MakeRatioReport(const std::vector<TwistRecord>& records, const CurveSpec& curve,
                            FamilySign sign, int64_t X, const Prediction& prediction) {
  RatioReport r;
  r.curve = curve.label;
  r.sign = sign;
  r.q = prediction.q;
  r.aq = prediction.aq;
  r.X = X;
  r.r_main = prediction.r_main;
  r.r_second = prediction.r_second;
  for (const auto& rec : records) {
    int chi = Kronecker(rec.d, prediction.q);
    if (chi > 0) {
      ++r.size_plus;
      r.vanished_plus += rec.vanished;
    } else if (chi < 0) {
      ++r.size_minus;
      r.vanished_minus += rec.vanished;
    }
  }
  if (r.vanished_minus > 0) {
    double ratio = static_cast<double>(r.vanished_plus) / static_cast<double>(r.vanished_minus);
    r.r_empirical = ratio;
    r.resid1 = ratio - r.r_main;
    r.resid2 = ratio - r.r_second;
  }
  return r;
}

double RequireRatio(const RatioReport& report) {
  if (!report.defined())
    Fail(ErrorKind::kDomain, "no vanishings with chi_d(" + std::to_string(report.q) +
                                 ") = -1 for " + report.curve + "; ratio undefined (" +
                                 std::to_string(report.vanished_plus) + " in the +1 class)");
  return *report.r_empirical;
}

uint64_t Histogram::total() const {
  uint64_t t = 0;
  for (const auto& [bin, count] : bins) t += count;
  return t;
}

Histogram MakeHistogram(const std::vector<double>& values, double bin_width) {
  if (!(bin_width > 0.0)) Fail(ErrorKind::kDomain, "histogram bin width must be positive");
  Histogram h;
  h.bin_width = bin_width;
  for (double v : values) {
    if (!std::isfinite(v)) Fail(ErrorKind::kDomain, "histogram value is not finite");
    ++h.bins[static_cast<int64_t>(std::floor(v / bin_width))];
  }
  return h;
}

std::string HistogramCsv(const Histogram& h) {
  std::ostringstream out;
  out << "bin,left_edge,count\n";
  for (const auto& [bin, count] : h.bins)
    out << bin << ',' << Num(static_cast<double>(bin) * h.bin_width) << ',' << count << '\n';
  return out.str();
}

SummaryStats Summarize(const std::vector<double>& values) {
  SummaryStats s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return s;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.variance = ss / static_cast<double>(values.size() - 1);
  return s;
}

SuiteManifest LoadSuiteManifest(const std::string& path) {
  KeyValueFile kv = KeyValueFile::Load(path);
  SuiteManifest m;
  auto base = std::filesystem::path(path).parent_path();
  for (const auto& c : kv.GetList("curves")) {
    std::filesystem::path p(c);
    m.curve_paths.push_back((p.is_absolute() ? p : base / p).string());
  }
  if (m.curve_paths.empty()) Fail(ErrorKind::kConfig, path + ": no curves listed");
  if (kv.Has("X")) m.X = kv.GetInt("X");
  if (kv.Has("q_max")) m.q_max = static_cast<uint64_t>(kv.GetInt("q_max"));
  if (kv.Has("sign")) {
    std::string s = kv.Get("sign");
    if (s == "both")
      m.signs = {FamilySign::kMinus, FamilySign::kPlus};
    else
      m.signs = {ParseFamilySign(s)};
  }
  if (kv.Has("epsilon")) m.epsilon = kv.GetDouble("epsilon");
  if (kv.Has("P")) m.prime_cutoff = static_cast<uint64_t>(kv.GetInt("P"));
  if (kv.Has("records_dir")) {
    std::filesystem::path p(kv.Get("records_dir"));
    m.records_dir = (p.is_absolute() ? p : base / p).string();
  } else {
    m.records_dir = (base / m.records_dir).string();
  }
  if (kv.Has("conductor_term")) {
    std::string t = kv.Get("conductor_term");
    if (t == "derived")
      m.conductor_term = ConductorTerm::kDerived;
    else if (t == "table")
      m.conductor_term = ConductorTerm::kTableCompatible;
    else
      Fail(ErrorKind::kConfig, path + ": conductor_term must be derived or table");
  }
  if (m.X < 3) Fail(ErrorKind::kConfig, path + ": X must be at least 3");
  if (m.q_max < 2) Fail(ErrorKind::kConfig, path + ": q_max must be at least 2");
  return m;
}

std::string RecordPathFor(const std::string& dir, const CurveSpec& curve, FamilySign sign,
                          int64_t X) {
  return (std::filesystem::path(dir) /
          (curve.label + "_" + ToString(sign) + "_" + std::to_string(X) + ".rec"))
      .string();
}

std::string ApCachePathFor(const std::string& dir, const CurveSpec& curve) {
  return (std::filesystem::path(dir) / (curve.label + ".ap")).string();
}

std::vector<TwistRecord> EnsureRecords(const CurveSpec& curve, FamilySign sign, int64_t X,
                                       const VanishingPolicy& policy,
                                       const std::string& records_dir,
                                       const BatchOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(records_dir, ec);
  if (ec) Fail(ErrorKind::kIo, "cannot create " + records_dir + ": " + ec.message());
  const std::string path = RecordPathFor(records_dir, curve, sign, X);
  if (std::filesystem::exists(path)) {
    try {
      RecordFile f = ReadRecordFile(path);
      if (f.header.curve_fingerprint == curve.Fingerprint() && f.header.bound == X &&
          f.header.epsilon == policy.epsilon)
        return f.records;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kIo) throw;
    }
  }
  FamilySelector sel{sign, X, &curve, std::nullopt};
  BatchOptions opts = options;
  if (opts.cache_dir.empty()) opts.cache_dir = records_dir;
  RecordFile f;
  f.header = {curve.Fingerprint(), X, policy.epsilon};
  f.records = ComputeBatch(curve, sel, policy, opts);
  WriteRecordFile(path, f);
  return f.records;
}

ResidualSuite RunResidualSuite(const std::vector<CurveSpec>& curves,
                               const std::vector<FamilySign>& signs, int64_t X, uint64_t q_max,
                               const std::string& records_dir, double epsilon,
                               const BetaOptions& beta_options) {
  ResidualSuite suite;
  suite.X = X;
  suite.epsilon = epsilon;
  suite.prime_cutoff = beta_options.prime_sum.cutoff;
  std::vector<double> r1, r2, r1n, r2n;
  for (const auto& curve : curves) {
    auto aps = PrimeApTable::Compute(
        curve, static_cast<uint32_t>(std::max<uint64_t>(beta_options.prime_sum.cutoff, q_max)));
    for (FamilySign sign : signs) {
      const std::string path = RecordPathFor(records_dir, curve, sign, X);
      if (!std::filesystem::exists(path))
        Fail(ErrorKind::kIo, "missing record file for " + curve.label + " (" + ToString(sign) +
                                 "): " + path);
      RecordFile f = ReadRecordFile(path);
      if (f.header.curve_fingerprint != curve.Fingerprint() || f.header.bound != X ||
          f.header.epsilon != epsilon)
        Fail(ErrorKind::kIo, path + ": header does not match " + curve.label + " at X = " +
                                 std::to_string(X));
      for (uint32_t q : aps.primes) {
        if (q > q_max) break;
        if (curve.is_bad(q)) continue;
        Prediction pred = PredictRatio(curve, aps, sign, q, static_cast<double>(X), beta_options);
        RatioReport row = MakeRatioReport(f.records, curve, sign, X, pred);
        if (row.defined()) {
          r1.push_back(*row.resid1);
          r2.push_back(*row.resid2);
          if (row.aq != 0) {
            r1n.push_back(*row.resid1);
            r2n.push_back(*row.resid2);
          }
        }
        suite.rows.push_back(std::move(row));
      }
    }
  }
  suite.resid1 = Summarize(r1);
  suite.resid2 = Summarize(r2);
  suite.resid1_nonzero_aq = Summarize(r1n);
  suite.resid2_nonzero_aq = Summarize(r2n);
  return suite;
}

std::string ResidualCsv(const ResidualSuite& suite) {
  std::ostringstream out;
  out << "curve,sign,q,a_q,resid1,resid2,r_empirical,r_main,r_second,vanished_plus,"
         "vanished_minus,size_plus,size_minus,X,epsilon,P,build_id\n";
  for (const auto& r : suite.rows) {
    out << r.curve << ',' << ToString(r.sign) << ',' << r.q << ',' << r.aq << ','
        << Opt(r.resid1) << ',' << Opt(r.resid2) << ',' << Opt(r.r_empirical) << ','
        << Num(r.r_main) << ',' << Num(r.r_second) << ',' << r.vanished_plus << ','
        << r.vanished_minus << ',' << r.size_plus << ',' << r.size_minus << ',' << suite.X
        << ',' << Num(suite.epsilon) << ',' << suite.prime_cutoff << ',' << BuildId() << '\n';
  }
  return out.str();
}

std::string ByAqCsv(const ResidualSuite& suite) {
  std::vector<const RatioReport*> rows;
  for (const auto& r : suite.rows) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(), [](const RatioReport* a, const RatioReport* b) {
    return a->aq != b->aq ? a->aq < b->aq : a->q < b->q;
  });
  std::ostringstream out;
  out << "a_q,q,curve,sign,resid1,resid2\n";
  for (const auto* r : rows)
    out << r->aq << ',' << r->q << ',' << r->curve << ',' << ToString(r->sign) << ','
        << Opt(r->resid1) << ',' << Opt(r->resid2) << '\n';
  return out.str();
}

std::string StatsCsv(const ResidualSuite& suite) {
  std::ostringstream out;
  out << "column,count,mean,variance\n";
  auto line = [&](const char* name, const SummaryStats& s) {
    out << name << ',' << s.count << ',' << Num(s.mean) << ',' << Num(s.variance) << '\n';
  };
  line("resid1", suite.resid1);
  line("resid2", suite.resid2);
  line("resid1_nonzero_aq", suite.resid1_nonzero_aq);
  line("resid2_nonzero_aq", suite.resid2_nonzero_aq);
  return out.str();
}

std::string TableCsv(const ResidualSuite& suite, const std::string& curve_label) {
  struct Cells {
    int64_t aq = 0;
    std::optional<double> r1m, r2m, r1p, r2p;
  };
  std::map<uint64_t, Cells> byq;
  for (const auto& r : suite.rows) {
    if (r.curve != curve_label) continue;
    Cells& c = byq[r.q];
    c.aq = r.aq;
    if (r.sign == FamilySign::kMinus) {
      c.r1m = r.resid1;
      c.r2m = r.resid2;
    } else {
      c.r1p = r.resid1;
      c.r2p = r.resid2;
    }
  }
  std::ostringstream out;
  out << "q,a_q,resid1_minus,resid2_minus,resid1_plus,resid2_plus\n";
  for (const auto& [q, c] : byq)
    out << q << ',' << c.aq << ',' << Opt(c.r1m) << ',' << Opt(c.r2m) << ',' << Opt(c.r1p) << ','
        << Opt(c.r2p) << '\n';
  return out.str();
}

}  // namespace twistvan
