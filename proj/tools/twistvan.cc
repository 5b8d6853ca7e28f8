// twistvan: vanishing statistics for quadratic twists of elliptic curves.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "twistvan/central_values.h"
#include "twistvan/config.h"
#include "twistvan/characters.h"
#include "twistvan/curve.h"
#include "twistvan/error.h"
#include "twistvan/harness.h"
#include "twistvan/moment_engine.h"
#include "twistvan/ratio_conjecture.h"
#include "twistvan/record_file.h"

namespace tv = twistvan;
using nlohmann::json;

namespace {

struct Common {
  std::string curve;
  std::string sign = "minus";
  int64_t X = 0;
  uint64_t q = 0;
  int lambda = 0;
  uint64_t P = 100'000;
  bool no_smooth = false;
  std::string conductor_term = "derived";
  double epsilon = 1e-9;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::string out;
};

void WriteOutput(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) tv::Fail(tv::ErrorKind::kIo, "cannot write " + path);
  f << text;
  if (!f) tv::Fail(tv::ErrorKind::kIo, "short write on " + path);
}

tv::BetaOptions MakeBetaOptions(const Common& c) {
  tv::BetaOptions o;
  o.prime_sum.cutoff = c.P;
  o.prime_sum.smooth = !c.no_smooth;
  if (c.conductor_term == "table")
    o.conductor_term = tv::ConductorTerm::kTableCompatible;
  else if (c.conductor_term != "derived")
    tv::Fail(tv::ErrorKind::kConfig, "--conductor-term must be derived or table");
  return o;
}

std::optional<tv::Progression> MakeProgression(const Common& c) {
  if (c.q == 0) {
    if (c.lambda != 0) tv::Fail(tv::ErrorKind::kConfig, "--lambda needs --q");
    return std::nullopt;
  }
  if (c.lambda == 0) tv::Fail(tv::ErrorKind::kConfig, "--q needs --lambda");
  return tv::Progression{c.q, c.lambda};
}

void AddCurve(CLI::App* app, Common& c) {
  app->add_option("--curve", c.curve, "curve config file")->required();
}
void AddSign(CLI::App* app, Common& c) {
  app->add_option("--sign", c.sign, "family: plus or minus")->check(CLI::IsMember({"plus", "minus"}));
}
void AddPrimeSum(CLI::App* app, Common& c) {
  app->add_option("--P", c.P, "prime-sum cutoff");
  app->add_flag("--no-smooth", c.no_smooth, "use the raw partial sum at P");
  app->add_option("--conductor-term", c.conductor_term, "derived | table");
}

int RunEnumerate(const Common& c) {
  tv::CurveSpec curve = tv::LoadCurve(c.curve);
  // --q alone adds the chi_d(q) column; --lambda also filters on it.
  std::optional<tv::Progression> filter;
  if (c.q != 0 && c.lambda == 0) {
    tv::ValidateSelector({tv::ParseFamilySign(c.sign), c.X, &curve, tv::Progression{c.q, 1}});
  } else {
    filter = MakeProgression(c);
  }
  tv::FamilySelector sel{tv::ParseFamilySign(c.sign), c.X, &curve, filter};
  auto family = tv::EnumerateFamily(sel);
  std::optional<uint64_t> q;
  if (c.q != 0) q = c.q;
  WriteOutput(c.out, tv::FamilyCsv(family, q));
  return 0;
}

int RunLvalues(const Common& c, const std::string& csv_path, const std::string& cache_dir) {
  tv::CurveSpec curve = tv::LoadCurve(c.curve);
  tv::FamilySelector sel{tv::ParseFamilySign(c.sign), c.X, &curve, std::nullopt};
  tv::VanishingPolicy policy;
  policy.epsilon = c.epsilon;
  tv::BatchOptions opts;
  opts.workers = c.workers;
  opts.cache_dir = cache_dir;
  tv::RecordFile file;
  file.header = {curve.Fingerprint(), c.X, c.epsilon};
  file.records = tv::ComputeBatch(curve, sel, policy, opts);
  tv::WriteRecordFile(c.out, file);
  if (!csv_path.empty()) WriteOutput(csv_path, tv::RecordsCsv(file.records));
  size_t vanished = 0;
  for (const auto& r : file.records) vanished += r.vanished;
  std::cerr << curve.label << " " << c.sign << " X=" << c.X << ": " << file.records.size()
            << " discriminants, " << vanished << " vanishings\n";
  return 0;
}

int RunMoments(const Common& c, int k, const std::string& records_path) {
  tv::CurveSpec curve = tv::LoadCurve(c.curve);
  auto sign = tv::ParseFamilySign(c.sign);
  auto progression = MakeProgression(c);
  auto opts = MakeBetaOptions(c);
  uint64_t limit = std::max<uint64_t>(c.P, c.q);
  auto aps = tv::PrimeApTable::Compute(curve, static_cast<uint32_t>(limit));
  tv::LocalContext ctx{&curve, sign, progression};
  auto poly = tv::UpsilonPoly(ctx, aps, k, opts.prime_sum);
  auto beta = tv::BetaTotal(curve, aps, sign, c.q, progression ? progression->lambda : 1,
                            static_cast<double>(k), opts);
  const double gk = tv::Gk(k).value();
  const int m = k * (k - 1) / 2;
  json out;
  out["k"] = k;
  out["sign"] = c.sign;
  if (progression) {
    out["q"] = progression->q;
    out["lambda"] = progression->lambda;
  }
  out["coefficients"] = poly.coefficients;
  json closed = json::array({poly.h0 * gk});
  if (m >= 1) closed.push_back(poly.h0 * gk * m * beta.beta);
  out["leading_closed_form"] = closed;
  out["h0"] = poly.h0;
  out["beta"] = beta.beta;
  out["P"] = poly.cutoff;
  out["stability"] = std::max(poly.stability_delta, beta.stability_delta);
  if (c.X > 0) {
    out["X"] = c.X;
    out["integral"] = tv::MomentIntegral(poly.coefficients, static_cast<double>(c.X));
    std::vector<tv::TwistRecord> records;
    if (!records_path.empty()) {
      auto f = tv::ReadRecordFile(records_path);
      if (f.header.curve_fingerprint != curve.Fingerprint() || f.header.bound != c.X)
        tv::Fail(tv::ErrorKind::kIo, records_path + " was written for another curve or X");
      records = std::move(f.records);
    } else {
      tv::FamilySelector sel{sign, c.X, &curve, std::nullopt};
      tv::VanishingPolicy policy;
      policy.epsilon = c.epsilon;
      tv::BatchOptions bo;
      bo.workers = c.workers;
      records = tv::ComputeBatch(curve, sel, policy, bo);
    }
    tv::FamilySelector sel{sign, c.X, &curve, progression};
    out["empirical"] = tv::EmpiricalMoment(records, sel, k);
  } else {
    out["integral"] = nullptr;
    out["empirical"] = nullptr;
  }
  WriteOutput(c.out, out.dump(2) + "\n");
  return 0;
}

int RunPredict(const Common& c) {
  tv::CurveSpec curve = tv::LoadCurve(c.curve);
  auto opts = MakeBetaOptions(c);
  auto aps = tv::PrimeApTable::Compute(curve, static_cast<uint32_t>(std::max<uint64_t>(c.P, c.q)));
  auto p = tv::PredictRatio(curve, aps, tv::ParseFamilySign(c.sign), c.q,
                            static_cast<double>(c.X), opts);
  json out;
  out["q"] = p.q;
  out["a_q"] = p.aq;
  out["X"] = c.X;
  out["R_main"] = p.r_main;
  out["beta_plus"] = p.beta_plus;
  out["beta_minus"] = p.beta_minus;
  out["R_second"] = p.r_second;
  out["P"] = p.cutoff;
  out["stability"] = p.stability_delta;
  WriteOutput(c.out, out.dump(2) + "\n");
  return 0;
}

int RunRatios(const Common& c, uint64_t q_max, const std::string& records_dir) {
  tv::CurveSpec curve = tv::LoadCurve(c.curve);
  auto sign = tv::ParseFamilySign(c.sign);
  tv::VanishingPolicy policy;
  policy.epsilon = c.epsilon;
  tv::BatchOptions bo;
  bo.workers = c.workers;
  tv::EnsureRecords(curve, sign, c.X, policy, records_dir, bo);
  auto suite = tv::RunResidualSuite({curve}, {sign}, c.X, q_max, records_dir, c.epsilon,
                                    MakeBetaOptions(c));
  WriteOutput(c.out, tv::ResidualCsv(suite));
  return 0;
}

int RunReport(const std::string& manifest_path, const std::string& out_dir, unsigned workers) {
  tv::SuiteManifest m = tv::LoadSuiteManifest(manifest_path);
  std::vector<tv::CurveSpec> curves;
  for (const auto& path : m.curve_paths) curves.push_back(tv::LoadCurve(path));
  tv::VanishingPolicy policy;
  policy.epsilon = m.epsilon;
  tv::BatchOptions bo;
  bo.workers = workers;
  for (const auto& curve : curves)
    for (auto sign : m.signs) tv::EnsureRecords(curve, sign, m.X, policy, m.records_dir, bo);
  tv::BetaOptions beta;
  beta.prime_sum.cutoff = m.prime_cutoff;
  beta.conductor_term = m.conductor_term;
  auto suite = tv::RunResidualSuite(curves, m.signs, m.X, m.q_max, m.records_dir, m.epsilon, beta);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) tv::Fail(tv::ErrorKind::kIo, "cannot create " + out_dir);
  auto at = [&](const std::string& name) { return (std::filesystem::path(out_dir) / name).string(); };
  WriteOutput(at("residuals.csv"), tv::ResidualCsv(suite));
  WriteOutput(at("by_aq.csv"), tv::ByAqCsv(suite));
  WriteOutput(at("stats.csv"), tv::StatsCsv(suite));
  for (const auto& curve : curves)
    WriteOutput(at("table_" + curve.label + ".csv"), tv::TableCsv(suite, curve.label));
  std::vector<double> r1, r2;
  for (const auto& row : suite.rows) {
    if (!row.defined()) continue;
    r1.push_back(*row.resid1);
    r2.push_back(*row.resid2);
  }
  WriteOutput(at("hist_resid1.csv"), tv::HistogramCsv(tv::MakeHistogram(r1)));
  WriteOutput(at("hist_resid2.csv"), tv::HistogramCsv(tv::MakeHistogram(r2)));
  std::cout << tv::StatsCsv(suite);
  return 0;
}

int RunHist(const std::string& in_path, const std::string& column, double bin,
            const std::string& out) {
  std::ifstream in(in_path);
  if (!in) tv::Fail(tv::ErrorKind::kIo, "cannot open " + in_path);
  std::string line;
  if (!std::getline(in, line)) tv::Fail(tv::ErrorKind::kIo, in_path + " is empty");
  auto header = tv::Split(line, ',');
  auto it = std::find(header.begin(), header.end(), column);
  if (it == header.end()) tv::Fail(tv::ErrorKind::kConfig, "no column '" + column + "' in " + in_path);
  const size_t col = static_cast<size_t>(it - header.begin());
  std::vector<double> values;
  while (std::getline(in, line)) {
    // Split keeps no empty fields, so walk commas by hand.
    size_t start = 0, idx = 0;
    std::string field;
    for (size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        if (idx == col) field = line.substr(start, i - start);
        ++idx;
        start = i + 1;
      }
    }
    if (!tv::Trim(field).empty()) values.push_back(tv::ParseDouble(field, in_path));
  }
  WriteOutput(out, tv::HistogramCsv(tv::MakeHistogram(values, bin)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twistvan: vanishing statistics for quadratic twists of elliptic curves"};
  app.require_subcommand(1);
  Common c;

  auto* enumerate = app.add_subcommand("enumerate", "list the discriminants of a family");
  AddCurve(enumerate, c);
  AddSign(enumerate, c);
  enumerate->add_option("--X", c.X, "bound on |d|")->required();
  enumerate->add_option("--q", c.q, "prime for the chi_d(q) column / filter");
  enumerate->add_option("--lambda", c.lambda, "keep only chi_d(q) = lambda");
  enumerate->add_option("--out", c.out, "output CSV (default stdout)");

  std::string csv_path, cache_dir;
  auto* lvalues = app.add_subcommand("lvalues", "compute and classify central values");
  AddCurve(lvalues, c);
  AddSign(lvalues, c);
  lvalues->add_option("--X", c.X)->required();
  lvalues->add_option("--epsilon", c.epsilon, "absolute truncation target");
  lvalues->add_option("--out", c.out, "record file")->required();
  lvalues->add_option("--csv", csv_path, "also write the records as CSV");
  lvalues->add_option("--cache-dir", cache_dir, "directory for the a_p cache");
  lvalues->add_option("--workers", c.workers);

  int k = 1;
  std::string records_path;
  auto* moments = app.add_subcommand("moments", "moment polynomial, closed form and data");
  AddCurve(moments, c);
  AddSign(moments, c);
  AddPrimeSum(moments, c);
  moments->add_option("--k", k)->required()->check(CLI::Range(1, 3));
  moments->add_option("--q", c.q);
  moments->add_option("--lambda", c.lambda);
  moments->add_option("--X", c.X, "family bound for the empirical moment (0 skips it)");
  moments->add_option("--epsilon", c.epsilon);
  moments->add_option("--records", records_path, "record file to reuse");
  moments->add_option("--workers", c.workers);
  moments->add_option("--out", c.out);

  auto* predict = app.add_subcommand("predict", "two-term prediction for R_q(X)");
  AddCurve(predict, c);
  AddSign(predict, c);
  AddPrimeSum(predict, c);
  predict->add_option("--q", c.q)->required();
  predict->add_option("--X", c.X)->required();
  predict->add_option("--out", c.out);

  uint64_t q_max = 500;
  std::string records_dir = "records";
  auto* ratios = app.add_subcommand("ratios", "empirical ratios and residuals for one family");
  AddCurve(ratios, c);
  AddSign(ratios, c);
  AddPrimeSum(ratios, c);
  ratios->add_option("--X", c.X)->required();
  ratios->add_option("--epsilon", c.epsilon);
  ratios->add_option("--q-max", q_max);
  ratios->add_option("--records-dir", records_dir);
  ratios->add_option("--workers", c.workers);
  ratios->add_option("--out", c.out);

  std::string manifest, out_dir = "report";
  auto* report = app.add_subcommand("report", "run a suite manifest end to end");
  report->add_option("--manifest", manifest)->required();
  report->add_option("--out-dir", out_dir);
  report->add_option("--workers", c.workers);

  std::string hist_in, column = "resid1";
  double bin = 0.0002;
  auto* hist = app.add_subcommand("hist", "histogram of a CSV column");
  hist->add_option("--in", hist_in)->required();
  hist->add_option("--column", column);
  hist->add_option("--bin", bin);
  hist->add_option("--out", c.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*enumerate) return RunEnumerate(c);
    if (*lvalues) return RunLvalues(c, csv_path, cache_dir);
    if (*moments) return RunMoments(c, k, records_path);
    if (*predict) return RunPredict(c);
    if (*ratios) return RunRatios(c, q_max, records_dir);
    if (*report) return RunReport(manifest, out_dir, c.workers);
    if (*hist) return RunHist(hist_in, column, bin, c.out);
  } catch (const tv::Error& e) {
    std::cerr << "twistvan: " << e.what() << "\n";
    return tv::ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "twistvan: internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
