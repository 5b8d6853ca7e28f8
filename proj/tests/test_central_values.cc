#include <cmath>
#include <numbers>

#include "test_util.h"
#include "twistvan/central_values.h"
#include "twistvan/characters.h"
#include "twistvan/record_file.h"

namespace twistvan {
namespace {

using testing::Curve11A;
using testing::Curve307A;
using testing::TempDir;

FamilySelector Sel(const CurveSpec& c, FamilySign s, int64_t X) {
  FamilySelector sel;
  sel.curve = &c;
  sel.sign = s;
  sel.bound = X;
  return sel;
}

// Plain reverse-order sum in long double with its own truncation point.
double ReverseOracle(const CurveSpec& c, const CoefficientTable& t, int64_t d, uint64_t terms) {
  const long double r = std::exp(-2.0L * std::numbers::pi_v<long double> /
                                 (std::sqrt(static_cast<long double>(c.conductor)) *
                                  static_cast<long double>(std::llabs(d))));
  long double s = 0.0L;
  for (uint64_t n = terms; n >= 1; --n) {
    int chi = Kronecker(d, n);
    if (chi == 0 || t[n] == 0) continue;
    s += static_cast<long double>(t[n]) * chi / n * std::pow(r, static_cast<long double>(n));
  }
  return static_cast<double>(2.0L * s);
}

TEST(Truncation, TermsNeededIsMinimal) {
  for (int64_t d : {-3, -4, -23, -1000, -99999, 5, 1001}) {
    for (double eps : {1e-6, 1e-9, 1e-12}) {
      uint64_t n = TermsNeeded(11, d, eps);
      EXPECT_LT(TailBound(11, d, n), eps);
      if (n > 1) {
        EXPECT_GE(TailBound(11, d, n - 1), eps);
      }
    }
  }
  EXPECT_TV_ERROR(TermsNeeded(11, 0, 1e-9), ErrorKind::kDomain);
  EXPECT_TV_ERROR(TermsNeeded(11, -3, 0.0), ErrorKind::kDomain);
}

TEST(Truncation, DoublingTermsChangesLittle) {
  auto t = CoefficientTable::Build(Curve11A(), 20000);
  for (int64_t d : {-3, -4, -15, -20, -23, -311}) {
    uint64_t n = TermsNeeded(11, d, 1e-9);
    ASSERT_LE(2 * n, t.limit());
    EXPECT_LT(std::fabs(ReverseOracle(Curve11A(), t, d, n) - ReverseOracle(Curve11A(), t, d, 2 * n)),
              1e-10)
        << d;
  }
}

TEST(LValues, AgreeWithReverseOracle) {
  for (const CurveSpec* c : {&Curve11A(), &Curve307A()})
    for (FamilySign s : {FamilySign::kMinus, FamilySign::kPlus}) {
      auto fam = EnumerateFamily(Sel(*c, s, 200));
      ASSERT_GE(fam.size(), 10u);
      fam.resize(10);
      uint64_t n_oracle = 0;
      for (int64_t d : fam) n_oracle = std::max(n_oracle, TermsNeeded(c->conductor, d, 1e-12));
      auto t = CoefficientTable::Build(*c, n_oracle);
      auto recs = ComputeValues(*c, t, fam, 1e-9, 2);
      for (size_t i = 0; i < fam.size(); ++i) {
        double want = ReverseOracle(*c, t, fam[i], TermsNeeded(c->conductor, fam[i], 1e-12));
        EXPECT_NEAR(recs[i].value, want, 1e-9) << c->label << " d=" << fam[i];
        EXPECT_LT(recs[i].err, 1e-9);
      }
    }
}

TEST(LValues, PinnedSmallValues) {
  auto t = CoefficientTable::Build(Curve11A(), 100);
  EXPECT_NEAR(CentralValue(Curve11A(), t, -3, 1e-9).value, 1.6844963329622609, 1e-12);
  EXPECT_NEAR(CentralValue(Curve11A(), t, -4, 1e-9).value, 1.4588166169542838, 1e-12);
}

TEST(LValues, Errors) {
  auto t = CoefficientTable::Build(Curve11A(), 100);
  EXPECT_TV_ERROR(CentralValue(Curve11A(), t, -7, 1e-9), ErrorKind::kDomain);  // odd sign
  int64_t far = EnumerateFamily(Sel(Curve11A(), FamilySign::kMinus, 5000)).back();
  EXPECT_TV_ERROR(CentralValue(Curve11A(), t, far, 1e-9), ErrorKind::kCapacity);
  EXPECT_TV_ERROR(ValidatePolicy(VanishingPolicy{0.0, 1e3}), ErrorKind::kConfig);
  EXPECT_TV_ERROR(ValidatePolicy(VanishingPolicy{1e-9, 10.0}), ErrorKind::kConfig);
  BatchOptions tiny;
  tiny.coefficient_budget = 100;
  EXPECT_TV_ERROR(ComputeBatch(Curve11A(), Sel(Curve11A(), FamilySign::kMinus, 1000),
                               VanishingPolicy{}, tiny),
                  ErrorKind::kCapacity);
}

TEST(Classify, Basics) {
  VanishingPolicy policy;
  EXPECT_TRUE(Classify({}, policy).empty());
  std::vector<TwistRecord> big = {{-3, 0.5, 0, false, 0}, {-4, 0.1, 0, false, 0}};
  for (const auto& r : Classify(big, policy)) EXPECT_FALSE(r.vanished);
  std::vector<TwistRecord> mixed = {{-3, 0.5, 0, false, 0}, {-4, 2e-12, 0, false, 0},
                                    {-7, -1e-12, 0, false, 0}};
  auto out = Classify(mixed, policy);
  EXPECT_FALSE(out[0].vanished);
  EXPECT_TRUE(out[1].vanished);
  EXPECT_TRUE(out[2].vanished);
}

TEST(Classify, GapViolationNamesBothDiscriminants) {
  std::vector<TwistRecord> recs = {{-3, 0.5, 0, false, 0}, {-4, 1e-6, 0, false, 0},
                                   {-15, 4e-5, 0, false, 0}};
  try {
    Classify(recs, VanishingPolicy{});
    ADD_FAILURE() << "expected a gap violation";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNumerical);
    std::string msg = e.what();
    EXPECT_NE(msg.find("d = -4"), std::string::npos) << msg;
    EXPECT_NE(msg.find("d = -15"), std::string::npos) << msg;
  }
  // With no zero cluster the reference level is epsilon itself, so anything
  // above sqrt(epsilon) clears a 1e3 gap.
  std::vector<TwistRecord> lone = {{-3, 5e-5, 0, false, 0}};
  EXPECT_FALSE(Classify(lone, VanishingPolicy{})[0].vanished);
  EXPECT_TV_ERROR(Classify(lone, VanishingPolicy{1e-9, 1e5}), ErrorKind::kNumerical);
}

TEST(Batch, VanishingCountPinnedAndStableUnderTighterEpsilon) {
  auto sel = Sel(Curve11A(), FamilySign::kMinus, 10000);
  BatchOptions opt;
  opt.workers = 4;
  auto loose = ComputeBatch(Curve11A(), sel, VanishingPolicy{1e-9, 1e3}, opt);
  auto tight = ComputeBatch(Curve11A(), sel, VanishingPolicy{1e-11, 1e3}, opt);
  ASSERT_EQ(loose.size(), 1387u);
  ASSERT_EQ(loose.size(), tight.size());
  size_t vanished = 0;
  double min_nonzero = 1e300, max_zero = 0.0;
  for (size_t i = 0; i < loose.size(); ++i) {
    EXPECT_EQ(loose[i].d, tight[i].d);
    EXPECT_EQ(loose[i].vanished, tight[i].vanished) << loose[i].d;
    EXPECT_NEAR(loose[i].value, tight[i].value, 2e-9);
    vanished += loose[i].vanished;
    if (loose[i].vanished)
      max_zero = std::max(max_zero, std::fabs(loose[i].value));
    else
      min_nonzero = std::min(min_nonzero, loose[i].value);
  }
  EXPECT_EQ(vanished, 123u);
  EXPECT_GT(min_nonzero, 0.0);  // nonvanishing twisted values are positive
  EXPECT_GE(min_nonzero / std::max(max_zero, 1e-9), 1e3);
}

TEST(Batch, WorkerCountDoesNotChangeBytes) {
  TempDir dir("workers");
  auto sel = Sel(Curve307A(), FamilySign::kPlus, 3000);
  std::vector<std::string> bytes;
  for (unsigned w : {1u, 3u, 8u}) {
    BatchOptions opt;
    opt.workers = w;
    RecordFile f{{Curve307A().Fingerprint(), 3000, 1e-9},
                 ComputeBatch(Curve307A(), sel, VanishingPolicy{}, opt)};
    std::string path = dir.file("w" + std::to_string(w) + ".rec");
    WriteRecordFile(path, f);
    bytes.push_back(testing::Slurp(path));
  }
  EXPECT_EQ(bytes[0], bytes[1]);
  EXPECT_EQ(bytes[0], bytes[2]);
}

TEST(Batch, RecordPerFamilyMemberAndCache) {
  TempDir dir("batch");
  auto sel = Sel(Curve11A(), FamilySign::kMinus, 100);
  BatchOptions opt;
  opt.cache_dir = dir.file("cache");
  auto recs = ComputeBatch(Curve11A(), sel, VanishingPolicy{}, opt);
  auto fam = EnumerateFamily(sel);
  ASSERT_EQ(recs.size(), fam.size());
  for (size_t i = 0; i < fam.size(); ++i) EXPECT_EQ(recs[i].d, fam[i]);
  EXPECT_TRUE(std::filesystem::exists(dir.file("cache/11A.ap")));
  auto again = ComputeBatch(Curve11A(), sel, VanishingPolicy{}, opt);
  for (size_t i = 0; i < fam.size(); ++i) EXPECT_EQ(recs[i].value, again[i].value);
  EXPECT_TRUE(ComputeBatch(Curve11A(), Sel(Curve11A(), FamilySign::kMinus, 2), VanishingPolicy{})
                  .empty());
}

TEST(RecordFileFormat, RoundTripAndValidation) {
  TempDir dir("rec");
  RecordFile f{{0x1234, 777, 1e-9},
               {{-3, 1.5, 1e-10, false, 9}, {-4, 1e-13, 2e-10, true, 9}, {-7, 0.25, 0.0, false, 0}}};
  std::string path = dir.file("a.rec");
  WriteRecordFile(path, f);
  EXPECT_EQ(testing::Slurp(path).size(), 32u + 25u * 3);
  auto back = ReadRecordFile(path);
  EXPECT_EQ(back.header.curve_fingerprint, 0x1234u);
  EXPECT_EQ(back.header.bound, 777);
  EXPECT_EQ(back.header.epsilon, 1e-9);
  ASSERT_EQ(back.records.size(), 3u);
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.records[i].d, f.records[i].d);
    EXPECT_EQ(back.records[i].value, f.records[i].value);
    EXPECT_EQ(back.records[i].err, f.records[i].err);
    EXPECT_EQ(back.records[i].vanished, f.records[i].vanished);
  }

  std::string bytes = testing::Slurp(path);
  testing::WriteText(dir.file("trunc.rec"), bytes.substr(0, bytes.size() - 3));
  EXPECT_TV_ERROR(ReadRecordFile(dir.file("trunc.rec")), ErrorKind::kIo);
  std::string bad = bytes;
  bad[0] = 'X';
  testing::WriteText(dir.file("magic.rec"), bad);
  EXPECT_TV_ERROR(ReadRecordFile(dir.file("magic.rec")), ErrorKind::kIo);
  bad = bytes;
  bad[32 + 24] = 7;
  testing::WriteText(dir.file("flags.rec"), bad);
  EXPECT_TV_ERROR(ReadRecordFile(dir.file("flags.rec")), ErrorKind::kIo);
  EXPECT_TV_ERROR(ReadRecordFile(dir.file("missing.rec")), ErrorKind::kIo);
  EXPECT_TV_ERROR(WriteRecordFile(dir.file("no/such/dir/x.rec"), f), ErrorKind::kIo);
}

TEST(RecordFileFormat, Csv) {
  std::string csv = RecordsCsv({{-3, 0.1, 1e-10, false, 1}, {-4, 0.0, 0.0, true, 1}});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "d,value,err,vanished");
  EXPECT_NE(csv.find("-3,0.10000000000000001,"), std::string::npos) << csv;
  EXPECT_NE(csv.find("-4,0,0,1"), std::string::npos) << csv;
}

}  // namespace
}  // namespace twistvan
