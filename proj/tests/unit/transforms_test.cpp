#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "builders.hpp"
#include "citepred/error.hpp"
#include "citepred/synth.hpp"
#include "citepred/transforms.hpp"

namespace citepred {
namespace {

using testing::make_pub;

using testing::step;

TEST(Baselines, MeanOverCitedSubsetOnly) {
  const std::vector<Publication> pubs{
      make_pub("P1", 2004, "J1", 1.0, {"A"}, step(3, 0, 5)),
      make_pub("P2", 2004, "J1", 1.0, {"A"}, step(3, 2, 5)),
      make_pub("P3", 2004, "J2", 3.0, {"A"}, step(3, 4, 5)),
  };
  const auto obs = expand_by_sc(pubs);
  const auto table = BaselineTable::compute(obs);
  const Baseline* b = table.find(2004, "A");
  ASSERT_NE(b, nullptr);
  ASSERT_TRUE(b->cbar[3]);
  EXPECT_DOUBLE_EQ(*b->cbar[3], 3.0);
  EXPECT_EQ(b->n_cited[3], 2u);
  ASSERT_TRUE(b->ifbar);
  EXPECT_DOUBLE_EQ(*b->ifbar, 2.0);
  EXPECT_EQ(b->n_journals, 2u);
  EXPECT_EQ(table.find(2005, "A"), nullptr);
  EXPECT_EQ(table.find(2004, "B"), nullptr);
}

TEST(Baselines, AllUncitedWindowIsUnavailable) {
  const std::vector<Publication> pubs{
      make_pub("P1", 2004, "J1", 1.0, {"A"}, step(1, 1, 3)),
      make_pub("P2", 2004, "J1", 1.0, {"A"}, step(1, 2, 3)),
  };
  const auto obs = expand_by_sc(pubs);
  const auto table = BaselineTable::compute(obs);
  const Baseline* b = table.find(2004, "A");
  ASSERT_NE(b, nullptr);
  EXPECT_FALSE(b->cbar[0]);
  EXPECT_EQ(b->n_cited[0], 0u);
  EXPECT_TRUE(b->cbar[1]);
}

TEST(Baselines, JournalsCountOnceAndMissingIfIsSkipped) {
  // J1 has four publications but enters IFbar once; J3 has no IF.
  std::vector<Publication> pubs;
  for (int i = 0; i < 4; ++i) {
    pubs.push_back(make_pub("A" + std::to_string(i), 2004, "J1", 1.0, {"A"}, testing::constant(2)));
  }
  pubs.push_back(make_pub("B", 2004, "J2", 3.0, {"A"}, testing::constant(4)));
  pubs.push_back(make_pub("C", 2004, "J3", std::nullopt, {"A"}, testing::constant(6)));
  const auto obs = expand_by_sc(pubs);
  const auto table = BaselineTable::compute(obs);
  const Baseline* b = table.find(2004, "A");
  ASSERT_NE(b, nullptr);
  EXPECT_DOUBLE_EQ(*b->ifbar, 2.0);
  EXPECT_EQ(b->n_journals, 2u);
  EXPECT_DOUBLE_EQ(*b->cbar[0], (4 * 2 + 4 + 6) / 6.0);
}

TEST(Baselines, CsvExportHasOneLinePerCellAndWindow) {
  const std::vector<Publication> pubs{
      make_pub("P1", 2004, "J1", 1.0, {"A", "B"}, step(1, 1, 3)),
  };
  const auto obs = expand_by_sc(pubs);
  std::ostringstream out;
  BaselineTable::compute(obs).write_csv(out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "year,sc,t,cbar,n_cited,ifbar,n_journals");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 2u * kTrajectoryLength);
  EXPECT_NE(out.str().find("2004,A,0,,0,1,1"), std::string::npos) << out.str();
}

class TransformTest : public ::testing::Test {
 protected:
  void SetUp() override {
    pubs_ = {
        make_pub("P1", 2004, "J1", 1.5, {"A"}, step(3, 4, 9)),
        make_pub("P2", 2004, "J1", 1.5, {"A"}, step(3, 0, 0)),
        make_pub("P3", 2004, "J1", 1.5, {"A"}, step(3, 0, 3)),
        make_pub("P4", 2004, "J1", std::nullopt, {"A"}, step(3, 0, 3)),
    };
    obs_ = expand_by_sc(pubs_);
    table_ = BaselineTable::compute(obs_);
  }
  std::vector<Publication> pubs_;
  std::vector<Observation> obs_;
  BaselineTable table_;
};

TEST_F(TransformTest, RescaledRatios) {
  // cbar_3 over cited = 4, so y_3 = 1 for P1; IF equals IFbar.
  const auto s = to_rescaled_sample(obs_[0], table_, 3);
  EXPECT_DOUBLE_EQ(s.y_t, 1.0);
  EXPECT_DOUBLE_EQ(s.x, 1.0);
  EXPECT_DOUBLE_EQ(s.y_long, 9.0 / *table_.find(2004, "A")->cbar[9]);
  EXPECT_EQ(s.variant, Variant::rescaled);
  EXPECT_EQ(to_rescaled_sample(obs_[1], table_, 3).y_long, 0.0);
}

TEST_F(TransformTest, LogValues) {
  const auto s = to_log_sample(obs_[0], table_, 3);
  EXPECT_DOUBLE_EQ(s.y_t, std::log(5.0));
  EXPECT_DOUBLE_EQ(s.y_long, std::log(10.0));
  EXPECT_EQ(to_log_sample(obs_[1], table_, 3).y_t, 0.0);
  auto pub9 = make_pub("Q", 2004, "J1", 1.5, {"A"}, testing::constant(9));
  Observation o{&pub9, "A"};
  const auto q = to_log_sample(o, table_, 3);
  EXPECT_NEAR(q.y_t, 2.302585, 1e-6);
  EXPECT_EQ(q.y_t, q.y_long);
}

TEST_F(TransformTest, RawImpactFactorOption) {
  TransformOptions opts;
  opts.raw_if_for_log = true;
  EXPECT_DOUBLE_EQ(to_log_sample(obs_[0], table_, 3, opts).x, 1.5);
  EXPECT_DOUBLE_EQ(to_log_sample(obs_[0], table_, 3).x, 1.0);
}

TEST_F(TransformTest, MissingImpactFactorIsValidationError) {
  EXPECT_THROW(to_rescaled_sample(obs_[3], table_, 3), ValidationError);
  const auto set = build_samples(obs_, table_, Variant::rescaled, 3);
  EXPECT_EQ(set.missing_if, 1u);
  EXPECT_EQ(set.rejected, 0u);
  EXPECT_EQ(set.samples.size(), 3u);
}

TEST_F(TransformTest, UnavailableBaselineNamesCell) {
  // Nobody is cited at t = 0.
  try {
    to_rescaled_sample(obs_[0], table_, 0);
    FAIL();
  } catch (const BaselineUnavailableError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("baseline unavailable"), std::string::npos);
    EXPECT_NE(msg.find("year=2004"), std::string::npos);
    EXPECT_NE(msg.find("sc=A"), std::string::npos);
    EXPECT_NE(msg.find("t=0"), std::string::npos);
  }
  // The uncited path maps c_t = 0 without cbar_t.
  const auto set = build_samples(obs_, table_, Variant::rescaled, 0, {}, false);
  EXPECT_EQ(set.rejected, 0u);
  EXPECT_EQ(set.samples.size(), 3u);
}

TEST_F(TransformTest, WindowChecks) {
  EXPECT_THROW(to_sample(obs_[0], table_, Variant::log, 9), ValidationError);
  EXPECT_THROW(to_sample(obs_[0], table_, Variant::log, -1), ValidationError);
  TransformOptions opts;
  opts.long_window = 5;
  EXPECT_NO_THROW(to_sample(obs_[0], table_, Variant::log, 4, opts));
  EXPECT_THROW(to_sample(obs_[0], table_, Variant::log, 5, opts), ValidationError);
}

TEST(VariantNames, RoundTrip) {
  for (Variant v : {Variant::rescaled, Variant::log}) EXPECT_EQ(parse_variant(to_string(v)), v);
  EXPECT_FALSE(parse_variant("both"));
}

std::vector<Publication> synthetic(std::uint64_t seed, int n_sc = 3, int pubs = 400) {
  return synth::generate_corpus(synth::preset_config({"fast-peak", "slow"}, n_sc, pubs, seed));
}

TEST(TransformProperties, NormalizationOverCitedSubset) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto pubs = synthetic(seed);
    const auto obs = expand_by_sc(pubs);
    const auto table = BaselineTable::compute(obs);
    for (int t = 0; t < kLongWindow; ++t) {
      std::map<std::pair<int, std::string_view>, std::pair<double, int>> acc;
      for (const auto& o : obs) {
        if (o.citations(t) < 1) continue;
        const auto s = to_rescaled_sample(o, table, t);
        auto& a = acc[{o.pub->year, o.sc}];
        a.first += s.y_t;
        ++a.second;
      }
      for (const auto& [key, a] : acc) EXPECT_NEAR(a.first / a.second, 1.0, 1e-12);
    }
  }
}

TEST(TransformProperties, MonotoneInCitations) {
  const auto pubs = synthetic(5);
  const auto obs = expand_by_sc(pubs);
  const auto table = BaselineTable::compute(obs);
  for (Variant v : {Variant::rescaled, Variant::log}) {
    std::map<std::pair<int, std::string_view>, std::vector<std::pair<std::int64_t, double>>> cells;
    for (const auto& o : obs) {
      const auto s = to_sample(o, table, v, 4);
      cells[{o.pub->year, o.sc}].emplace_back(s.c_t, s.y_t);
      EXPECT_GE(s.y_t, 0.0);
      EXPECT_GE(s.y_long, 0.0);
      EXPECT_GE(s.x, 0.0);
      EXPECT_EQ(s.y_t == 0.0, s.c_t == 0);
    }
    for (auto& [key, pts] : cells) {
      std::sort(pts.begin(), pts.end());
      for (std::size_t i = 1; i < pts.size(); ++i) {
        EXPECT_LE(pts[i - 1].second, pts[i].second);
        if (v == Variant::log && pts[i].first > pts[i - 1].first) {
          EXPECT_LT(pts[i - 1].second, pts[i].second);
        }
      }
    }
  }
}

TEST(TransformProperties, ImpactFactorScaleInvariance) {
  auto pubs = synthetic(9);
  const auto obs = expand_by_sc(pubs);
  const auto table = BaselineTable::compute(obs);
  std::vector<double> before;
  for (const auto& o : obs) before.push_back(to_rescaled_sample(o, table, 2).x);
  for (double lambda : {0.001, 3.7, 1e4}) {
    auto scaled = pubs;
    for (auto& p : scaled) *p.impact_factor *= lambda;
    const auto sobs = expand_by_sc(scaled);
    const auto stable = BaselineTable::compute(sobs);
    for (std::size_t i = 0; i < sobs.size(); ++i) {
      EXPECT_NEAR(to_rescaled_sample(sobs[i], stable, 2).x, before[i], 1e-12);
      EXPECT_NEAR(to_log_sample(sobs[i], stable, 2).x, before[i], 1e-12);
    }
  }
}

}  // namespace
}  // namespace citepred
