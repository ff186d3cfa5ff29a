#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "citepred/cli.hpp"
#include "citepred/report.hpp"

namespace fs = std::filesystem;

namespace citepred::cli {
namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> data_lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("citepred_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  struct Result {
    int code;
    std::string out, err;
  };

  Result call(std::vector<std::string> args) {
    args.insert(args.begin(), "citepred");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
  }

  fs::path synth(int n_sc, int pubs, const std::string& name = "syn") {
    const auto out = dir_ / name;
    const auto r = call({"synth", "--n-sc", std::to_string(n_sc), "--pubs-per-sc",
                         std::to_string(pubs), "--preset", "fast-peak", "--preset", "slow",
                         "--seed", "4", "-o", out.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    return out;
  }

  fs::path dir_;
};

TEST_F(CliTest, FitCoversEveryWindowAndVariant) {
  const auto corpus = synth(1, 400);
  const auto r = call({"fit", "-i", (corpus / "corpus.csv").string(), "-o", (dir_ / "fit").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = data_lines(dir_ / "fit" / "results.csv");
  ASSERT_EQ(rows.size(), 19u);
  EXPECT_EQ(rows[0], report::kResultsHeader);
  for (const char* f : {"results.txt", "baselines.csv", "ingest_report.csv", "skipped_scs.csv"}) {
    EXPECT_TRUE(fs::exists(dir_ / "fit" / f)) << f;
  }
  EXPECT_NE(r.out.find("results.csv"), std::string::npos);
  const auto head = slurp(dir_ / "fit" / "results.csv");
  EXPECT_NE(head.find("# covariance: HC3"), std::string::npos);
  EXPECT_NE(head.find("# config_hash: "), std::string::npos);
}

TEST_F(CliTest, SmallScIsListedAsSkipped) {
  const auto corpus = synth(1, 80);
  const auto r = call({"fit", "-i", (corpus / "corpus.csv").string(), "-o", (dir_ / "fit").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(data_lines(dir_ / "fit" / "results.csv").size(), 1u);
  const auto skipped = data_lines(dir_ / "fit" / "skipped_scs.csv");
  ASSERT_EQ(skipped.size(), 2u);
  EXPECT_EQ(skipped[1], "SYN.FASTPEAK.01,80,100");
}

TEST_F(CliTest, RerunsAreByteIdentical) {
  const auto corpus = synth(3, 300);
  const auto again = synth(3, 300, "syn2");
  EXPECT_EQ(slurp(corpus / "corpus.csv"), slurp(again / "corpus.csv"));
  const std::string in = (corpus / "corpus.csv").string();
  for (const char* cmd : {"fit", "uncited", "strata", "errors"}) {
    ASSERT_EQ(call({cmd, "-i", in, "-o", (dir_ / "a").string()}).code, 0) << cmd;
    ASSERT_EQ(call({cmd, "-i", in, "-o", (dir_ / "b").string(), "--workers", "3"}).code, 0) << cmd;
  }
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "a")) {
    EXPECT_EQ(slurp(e.path()), slurp(dir_ / "b" / e.path().filename())) << e.path();
    ++compared;
  }
  EXPECT_GE(compared, 10u);
}

TEST_F(CliTest, SummarizeSingleSc) {
  const auto corpus = synth(1, 400);
  ASSERT_EQ(call({"fit", "-i", (corpus / "corpus.csv").string(), "-o", dir_.string()}).code, 0);
  const auto r = call({"summarize", "-i", (dir_ / "results.csv").string(), "--area-map",
                       (corpus / "sc_areas.csv").string(), "--t-min", "3", "--t-max", "3",
                       "--variant", "rescaled", "-o", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = data_lines(dir_ / "macro_areas.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], report::kMacroAreaHeader);
  EXPECT_EQ(rows[1].rfind("rescaled,3,Clinical medicine,1,", 0), 0u) << rows[1];
  EXPECT_NE(rows[1].find("n.a."), std::string::npos);
}

TEST_F(CliTest, SummarizeGroupsAreas) {
  const auto corpus = synth(4, 300);
  ASSERT_EQ(call({"fit", "-i", (corpus / "corpus.csv").string(), "-o", dir_.string()}).code, 0);
  const auto r = call({"summarize", "-i", (dir_ / "results.csv").string(), "--area-map",
                       (corpus / "sc_areas.csv").string(), "--t-min", "2", "--t-max", "2",
                       "-o", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = data_lines(dir_ / "macro_areas.csv");
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[1].rfind("log,2,Clinical medicine,2,", 0), 0u) << rows[1];
  EXPECT_EQ(rows[2].rfind("rescaled,2,Clinical medicine,2,", 0), 0u) << rows[2];
  EXPECT_EQ(rows[3].rfind("log,2,Mathematics,2,", 0), 0u) << rows[3];
}

TEST_F(CliTest, SummarizeRejectsMixedWindows) {
  const auto corpus = synth(1, 400);
  ASSERT_EQ(call({"fit", "-i", (corpus / "corpus.csv").string(), "-o", dir_.string()}).code, 0);
  const auto r = call({"summarize", "-i", (dir_ / "results.csv").string(), "--area-map",
                       (corpus / "sc_areas.csv").string(), "-o", dir_.string()});
  EXPECT_EQ(r.code, kValidation);
  EXPECT_NE(r.err.find("kind=validation code=2"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("single time window"), std::string::npos);
}

TEST_F(CliTest, StrataRowsPerVariant) {
  const auto corpus = synth(1, 2000);
  const auto r = call({"strata", "-i", (corpus / "corpus.csv").string(), "--quantiles", "4",
                       "--variant", "log", "-o", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(data_lines(dir_ / "strata.csv").size(), 1u + 9u * 5u);
}

TEST_F(CliTest, LogErrorsEarlyWindowHasOverallOnly) {
  const auto corpus = synth(1, 1000);
  const auto r = call({"errors", "-i", (corpus / "corpus.csv").string(), "--variant", "log",
                       "--t-min", "0", "--t-max", "0", "-o", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = data_lines(dir_ / "error_curves.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].rfind("log,0,overall,", 0), 0u) << rows[1];
}

TEST_F(CliTest, UncitedSubsetShrinks) {
  const auto corpus = synth(1, 3000);
  const auto r = call({"uncited", "-i", (corpus / "corpus.csv").string(), "--variant", "log",
                       "-o", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(dir_ / "uncited.csv");
  const auto fits = report::read_results_csv(in);
  std::map<int, std::size_t> n;
  for (const auto& f : fits) {
    if (f.subset == "ALL") n[f.t] = f.n;
  }
  ASSERT_TRUE(n.count(3) && n.count(8));
  EXPECT_LE(n[8], n[3]);
}

TEST_F(CliTest, ErrorLinesAndExitCodes) {
  auto r = call({"fit", "-i", (dir_ / "missing.csv").string()});
  EXPECT_EQ(r.code, kValidation);
  EXPECT_EQ(r.err.rfind("citepred: error: kind=usage code=2 message=\"", 0), 0u) << r.err;

  const auto bad = dir_ / "bad.csv";
  std::ofstream(bad) << std::string(kCorpusHeader) + "\n"
                        "p1,2004,J,1.0,A,3,2,2,2,2,2,2,2,2,2\n";
  r = call({"fit", "-i", bad.string(), "-o", dir_.string()});
  EXPECT_EQ(r.code, kValidation);
  EXPECT_NE(r.err.find("kind=parse code=2"), std::string::npos) << r.err;

  const auto corpus = synth(1, 200);
  r = call({"fit", "-i", (corpus / "corpus.csv").string(), "--t-max", "9"});
  EXPECT_EQ(r.code, kValidation);
  EXPECT_NE(r.err.find("kind=validation"), std::string::npos) << r.err;

  r = call({"synth", "--rho", "2", "-o", dir_.string()});
  EXPECT_EQ(r.code, kValidation);

  r = call({"--version"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find(std::string(kVersion)), std::string::npos);
}

TEST_F(CliTest, UncitedDegenerateResponseIsNotAnError) {
  // Every publication uncited forever: the IF-only fit sees a constant zero response.
  const auto in = dir_ / "zero.csv";
  {
    std::ofstream out(in);
    out << kCorpusHeader << "\n";
    for (int i = 0; i < 120; ++i) {
      out << "p" << i << ",2004,J" << i % 9 << "," << 1 + i % 9 << ",A,0,0,0,0,0,0,0,0,0,0\n";
    }
  }
  const auto r = call({"uncited", "-i", in.string(), "--variant", "log", "--t-min", "3",
                       "--t-max", "3", "-o", dir_.string()});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST_F(CliTest, ConfigFileWithOverride) {
  const auto corpus = synth(1, 400);
  const auto cfg = dir_ / "run.ini";
  std::ofstream(cfg) << "variant = log\nt-min = 2\nt-max = 4\n";
  auto r = call({"--config", cfg.string(), "fit", "-i", (corpus / "corpus.csv").string(), "-o",
                 (dir_ / "a").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(data_lines(dir_ / "a" / "results.csv").size(), 4u);
  r = call({"--config", cfg.string(), "fit", "-i", (corpus / "corpus.csv").string(), "--t-max",
            "2", "-o", (dir_ / "b").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(data_lines(dir_ / "b" / "results.csv").size(), 2u);

  std::ofstream(cfg) << "varient = log\n";
  r = call({"--config", cfg.string(), "fit", "-i", (corpus / "corpus.csv").string(), "-o",
            dir_.string()});
  EXPECT_EQ(r.code, kValidation);
}

TEST_F(CliTest, ConfigHashTracksInputs) {
  const auto corpus = synth(1, 200);
  RunConfig a;
  a.inputs = {corpus / "corpus.csv"};
  RunConfig b = a;
  b.workers = 7;
  b.out = "/elsewhere";
  EXPECT_EQ(config_hash(a, "fit"), config_hash(b, "fit"));
  b.t_min = 1;
  EXPECT_NE(config_hash(a, "fit"), config_hash(b, "fit"));
  EXPECT_NE(config_hash(a, "fit"), config_hash(a, "strata"));
}

TEST_F(CliTest, HelpDocumentsColumns) {
  const auto r = call({"fit", "--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("bp_stat"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("skipped_scs.csv"), std::string::npos);
}

TEST(Report, ResultsRoundTrip) {
  FitResult f;
  f.subset = "A";
  f.variant = Variant::log;
  f.t = 2;
  f.n = 10;
  f.coefficients = {{0.1, 0.01, 10.0, 0.002}, {0.25, 0.1, 2.5, 0.07}, {1.5, 0.2, 7.5, 0.3}};
  f.r2 = 0.75;
  f.bp = {4.5, 0.1, 2};
  FitResult s;
  s.subset = "B";
  s.t = 3;
  s.skip_reason = "too few";
  std::stringstream io;
  const std::vector<FitResult> in{f, s};
  report::write_results_csv(io, in);
  const auto back = report::read_results_csv(io);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].subset, "A");
  EXPECT_EQ(back[0].variant, Variant::log);
  EXPECT_EQ(back[0].coefficients.size(), 3u);
  EXPECT_EQ(back[0].coefficients[1].estimate, 0.25);
  EXPECT_EQ(back[0].coefficients[1].p_value, 0.07);
  EXPECT_EQ(back[0].r2, 0.75);
  EXPECT_TRUE(back[1].skipped());
  EXPECT_EQ(back[1].skip_reason, "too few");
}

TEST(Report, RejectsWrongHeader) {
  std::istringstream in("subset,variant\nA,log\n");
  EXPECT_ANY_THROW(report::read_results_csv(in));
}

}  // namespace
}  // namespace citepred::cli
