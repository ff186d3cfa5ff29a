#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "builders.hpp"
#include "citepred/corpus.hpp"
#include "citepred/csv.hpp"
#include "citepred/error.hpp"

namespace citepred {
namespace {

using testing::make_pub;

std::vector<Publication> parse(const std::string& body) {
  std::istringstream in(std::string(kCorpusHeader) + "\n" + body);
  return parse_publications(in);
}

std::string parse_error(const std::string& body) {
  try {
    parse(body);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

TEST(CsvTest, SplitsQuotedFields) {
  const auto f = csv::split_line(R"(a,"b,c","d""e",)");
  ASSERT_EQ(f.size(), 4u);
  EXPECT_EQ(f[1], "b,c");
  EXPECT_EQ(f[2], "d\"e");
  EXPECT_EQ(f[3], "");
}

TEST(CsvTest, EscapeRoundTrips) {
  for (std::string s : {"plain", "with,comma", "with \"quote\"", " padded "}) {
    const auto f = csv::split_line(csv::escape(s) + ",x");
    ASSERT_EQ(f.size(), 2u);
    EXPECT_EQ(f[0], s);
  }
}

TEST(CsvTest, FormatDoubleRoundTrips) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    EXPECT_EQ(*csv::parse_double(csv::format_double(v)), v);
  }
  EXPECT_EQ(csv::format_double(0.0), "0");
  EXPECT_EQ(csv::format_fixed(-0.0001, 3), "0.000");
  EXPECT_EQ(csv::format_fixed(1.1275, 2), "1.13");
}

TEST(CsvTest, ParseRejectsTrailingGarbage) {
  EXPECT_FALSE(csv::parse_double("1.5x"));
  EXPECT_FALSE(csv::parse_double(""));
  EXPECT_FALSE(csv::parse_int("3.0"));
  EXPECT_EQ(*csv::parse_int("+7"), 7);
}

TEST(CorpusParse, DirectFieldMapping) {
  const auto pubs = parse("P1,2004,J9,1.50,CHEM.ENG,0,1,2,3,4,5,6,7,8,9\n");
  ASSERT_EQ(pubs.size(), 1u);
  const auto& p = pubs[0];
  EXPECT_EQ(p.id, "P1");
  EXPECT_EQ(p.year, 2004);
  EXPECT_EQ(p.journal_id, "J9");
  ASSERT_TRUE(p.impact_factor);
  EXPECT_EQ(*p.impact_factor, 1.5);
  EXPECT_EQ(p.sc_ids, std::vector<std::string>{"CHEM.ENG"});
  for (int t = 0; t < kTrajectoryLength; ++t) EXPECT_EQ(p.citations[t], t);
}

TEST(CorpusParse, NonmonotoneTrajectoryNamesWindow) {
  const auto msg = parse_error("P1,2004,J9,1.5,A,0,1,2,3,5,3,6,7,8,9\n");
  EXPECT_NE(msg.find("nonmonotone citation trajectory at t=5"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("'c5'"), std::string::npos) << msg;
}

TEST(CorpusParse, EmptyBodyGivesEmptyList) { EXPECT_TRUE(parse("").empty()); }

TEST(CorpusParse, ErrorsNameRowAndField) {
  EXPECT_NE(parse_error("P1,2004,J9,1.5,A,0,1,2\n").find("expected 15 columns"), std::string::npos);
  EXPECT_NE(parse_error("P1,20x4,J9,1.5,A,0,1,2,3,4,5,6,7,8,9\n").find("'year'"), std::string::npos);
  EXPECT_NE(parse_error("P1,2004,J9,abc,A,0,1,2,3,4,5,6,7,8,9\n").find("'if'"), std::string::npos);
  EXPECT_NE(parse_error("P1,2004,J9,-1,A,0,1,2,3,4,5,6,7,8,9\n").find("negative impact"),
            std::string::npos);
  EXPECT_NE(parse_error("P1,2004,J9,1,,0,1,2,3,4,5,6,7,8,9\n").find("empty subject-category"),
            std::string::npos);
  EXPECT_NE(parse_error("P1,2004,J9,1,A;A,0,1,2,3,4,5,6,7,8,9\n").find("duplicate"),
            std::string::npos);
  EXPECT_NE(parse_error("P1,2004,J9,1,A,-1,1,2,3,4,5,6,7,8,9\n").find("negative citation"),
            std::string::npos);
  const auto msg = parse_error("P1,2004,J9,1,A,0,1,2,3,4,5,6,7,8,9\nP2,2004,J9,1,A,0,1,x,3,4,5,6,7,8,9\n");
  EXPECT_NE(msg.find("line 3, field 'c2'"), std::string::npos) << msg;
}

TEST(CorpusParse, RejectsWrongHeader) {
  std::istringstream in("id,year\n");
  EXPECT_THROW(parse_publications(in), ParseError);
}

TEST(CorpusParse, MissingImpactFactorAndMultipleCategories) {
  const auto pubs = parse("P1,2005,J1,,A; B ,0,0,0,0,0,0,0,0,0,1\n");
  ASSERT_EQ(pubs.size(), 1u);
  EXPECT_FALSE(pubs[0].impact_factor);
  EXPECT_EQ(pubs[0].sc_ids, (std::vector<std::string>{"A", "B"}));
}

TEST(CorpusParse, SkipsCommentsAndBlankLines) {
  std::istringstream in("# generated\n" + std::string(kCorpusHeader) +
                        "\n\nP1,2004,J9,1,A,0,0,0,0,0,0,0,0,0,0\n# trailer\n");
  EXPECT_EQ(parse_publications(in).size(), 1u);
}

TEST(CorpusRoundTrip, WriteThenParseIsIdentity) {
  std::mt19937_64 rng(11);
  std::vector<Publication> pubs;
  for (int i = 0; i < 200; ++i) {
    Trajectory c{};
    std::int64_t acc = 0;
    for (auto& v : c) v = acc += static_cast<std::int64_t>(rng() % 5);
    std::optional<double> impact;
    if (i % 7 != 0) impact = std::uniform_real_distribution<double>(0, 40)(rng);
    std::vector<std::string> scs{"SC" + std::to_string(i % 3)};
    if (i % 4 == 0) scs.push_back("Engineering, chemical");
    pubs.push_back(make_pub("P" + std::to_string(i), 2004 + i % 3, "J" + std::to_string(i % 9),
                            impact, scs, c));
  }
  std::ostringstream out;
  write_publications(out, pubs);
  std::istringstream in(out.str());
  EXPECT_EQ(parse_publications(in), pubs);
}

TEST(ExpandBySc, OneObservationPerCategory) {
  const std::vector<Publication> pubs{
      make_pub("P1", 2004, "J", 1.0, {"A", "B"}, {}),
      make_pub("P2", 2004, "J", 1.0, {"A"}, {}),
  };
  const auto obs = expand_by_sc(pubs);
  ASSERT_EQ(obs.size(), 3u);
  EXPECT_EQ(obs[0].sc, "A");
  EXPECT_EQ(obs[1].sc, "B");
  EXPECT_EQ(obs[0].pub_id(), "P1");
  EXPECT_EQ(obs[1].pub_id(), "P1");
  EXPECT_TRUE(expand_by_sc({}).empty());
}

TEST(ExpandBySc, PreservesIdMultiplicity) {
  std::vector<Publication> pubs;
  for (int i = 0; i < 50; ++i) {
    std::vector<std::string> scs;
    for (int k = 0; k <= i % 4; ++k) scs.push_back("S" + std::to_string(k));
    pubs.push_back(make_pub("P" + std::to_string(i), 2004, "J", 1.0, scs, {}));
  }
  const auto obs = expand_by_sc(pubs);
  std::map<std::string_view, std::size_t> count;
  for (const auto& o : obs) ++count[o.pub_id()];
  for (const auto& p : pubs) EXPECT_EQ(count[p.id], p.sc_ids.size());
}

TEST(FilterScMinCount, StrictlyMoreThanThreshold) {
  std::vector<Publication> pubs;
  for (int i = 0; i < 101; ++i) pubs.push_back(make_pub("A" + std::to_string(i), 2004, "J", 1.0, {"A"}, {}));
  for (int i = 0; i < 100; ++i) pubs.push_back(make_pub("B" + std::to_string(i), 2004, "J", 1.0, {"B"}, {}));
  const auto obs = expand_by_sc(pubs);
  const auto groups = filter_sc_min_count(obs, 100);
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups.begin()->first, "A");
  EXPECT_EQ(groups.begin()->second.size(), 101u);
  for (const auto& [sc, members] : filter_sc_min_count(obs, 1)) {
    for (const auto& o : members) EXPECT_EQ(o.sc, sc);
  }
  EXPECT_TRUE(filter_sc_min_count({}, 100).empty());
  EXPECT_THROW(filter_sc_min_count(obs, 0), ValidationError);
}

TEST(IngestReport, CountsPublicationsAndObservations) {
  const std::vector<Publication> pubs{
      make_pub("P1", 2004, "J", std::nullopt, {"A", "B"}, {}),
      make_pub("P2", 2004, "J", 2.0, {"A"}, {}),
  };
  const auto obs = expand_by_sc(pubs);
  const auto groups = filter_sc_min_count(obs, 1);
  const auto r = make_ingest_report(pubs, obs, groups);
  EXPECT_EQ(r.publications, 2u);
  EXPECT_EQ(r.observations, 3u);
  EXPECT_EQ(r.missing_if, 1u);
  EXPECT_EQ(r.scs_total, 2u);
  EXPECT_EQ(r.scs_retained, 1u);
}

TEST(Validate, RejectsBrokenPublications) {
  auto p = make_pub("P", 2004, "J", 1.0, {"A"}, testing::constant(3));
  EXPECT_NO_THROW(validate(p));
  p.citations[4] = 1;
  EXPECT_THROW(validate(p), ValidationError);
  p = make_pub("P", 2004, "J", -1.0, {"A"}, {});
  EXPECT_THROW(validate(p), ValidationError);
  p = make_pub("P", 2004, "J", 1.0, {}, {});
  EXPECT_THROW(validate(p), ValidationError);
}

}  // namespace
}  // namespace citepred
