#include "citepred/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "citepred/csv.hpp"
#include "citepred/error.hpp"

namespace citepred {
namespace {

constexpr std::size_t kColumns = 5 + kTrajectoryLength;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_sc(std::string_view field) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= field.size()) {
    const auto end = std::min(field.find(';', start), field.size());
    const auto code = trim(field.substr(start, end - start));
    if (!code.empty()) out.emplace_back(code);
    start = end + 1;
  }
  return out;
}

Publication parse_row(const std::vector<std::string>& fields, std::size_t line) {
  static const std::array<std::string, kColumns> names = {
      "pub_id", "year", "journal_id", "if", "sc", "c0", "c1", "c2",
      "c3",     "c4",   "c5",         "c6", "c7", "c8", "c9"};
  if (fields.size() != kColumns) {
    throw ParseError(line, "*",
                     "expected " + std::to_string(kColumns) + " columns, found " +
                         std::to_string(fields.size()));
  }
  Publication pub;
  pub.id = std::string(trim(fields[0]));
  if (pub.id.empty()) throw ParseError(line, names[0], "empty publication id");

  const auto year = csv::parse_int(trim(fields[1]));
  if (!year) throw ParseError(line, names[1], "not an integer: '" + fields[1] + "'");
  pub.year = static_cast<int>(*year);

  pub.journal_id = std::string(trim(fields[2]));
  if (pub.journal_id.empty()) throw ParseError(line, names[2], "empty journal id");

  const auto if_text = trim(fields[3]);
  if (!if_text.empty()) {
    const auto value = csv::parse_double(if_text);
    if (!value || !std::isfinite(*value)) {
      throw ParseError(line, names[3], "not a number: '" + fields[3] + "'");
    }
    if (*value < 0) throw ParseError(line, names[3], "negative impact factor");
    pub.impact_factor = *value;
  }

  pub.sc_ids = split_sc(fields[4]);
  if (pub.sc_ids.empty()) throw ParseError(line, names[4], "empty subject-category list");
  std::set<std::string_view> seen;
  for (const auto& sc : pub.sc_ids) {
    if (!seen.insert(sc).second) {
      throw ParseError(line, names[4], "duplicate subject category '" + sc + "'");
    }
  }

  for (int t = 0; t < kTrajectoryLength; ++t) {
    const auto& name = names[5 + t];
    const auto value = csv::parse_int(trim(fields[5 + t]));
    if (!value) throw ParseError(line, name, "not an integer: '" + fields[5 + t] + "'");
    if (*value < 0) throw ParseError(line, name, "negative citation count");
    pub.citations[t] = *value;
    if (t > 0 && pub.citations[t] < pub.citations[t - 1]) {
      throw ParseError(line, name,
                       "nonmonotone citation trajectory at t=" + std::to_string(t));
    }
  }
  return pub;
}

}  // namespace

void validate(const Publication& pub) {
  if (pub.id.empty()) throw ValidationError("publication with empty id");
  if (pub.sc_ids.empty()) throw ValidationError(pub.id + ": empty subject-category list");
  if (pub.impact_factor && (!std::isfinite(*pub.impact_factor) || *pub.impact_factor < 0)) {
    throw ValidationError(pub.id + ": impact factor must be finite and nonnegative");
  }
  for (int t = 0; t < kTrajectoryLength; ++t) {
    if (pub.citations[t] < 0) throw ValidationError(pub.id + ": negative citation count");
    if (t > 0 && pub.citations[t] < pub.citations[t - 1]) {
      throw ValidationError(pub.id + ": nonmonotone citation trajectory at t=" +
                            std::to_string(t));
    }
  }
}

std::vector<Publication> parse_publications(std::istream& in) {
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header) throw ParseError(1, "header", "missing header row");
  std::string joined;
  for (std::size_t i = 0; i < header->size(); ++i) {
    if (i > 0) joined += ',';
    joined += trim((*header)[i]);
  }
  if (joined != kCorpusHeader) {
    throw ParseError(reader.line(), "header",
                     "expected '" + std::string(kCorpusHeader) + "', found '" + joined + "'");
  }
  std::vector<Publication> pubs;
  while (auto fields = reader.next()) pubs.push_back(parse_row(*fields, reader.line()));
  return pubs;
}

std::vector<Publication> read_publications(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open corpus file '" + path.string() + "'");
  try {
    return parse_publications(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string(), e);
  }
}

void write_publications(std::ostream& out, std::span<const Publication> pubs) {
  out << kCorpusHeader << '\n';
  std::vector<std::string> row;
  for (const auto& pub : pubs) {
    row.clear();
    row.push_back(pub.id);
    row.push_back(std::to_string(pub.year));
    row.push_back(pub.journal_id);
    row.push_back(pub.impact_factor ? csv::format_double(*pub.impact_factor) : "");
    std::string sc;
    for (std::size_t i = 0; i < pub.sc_ids.size(); ++i) {
      if (i > 0) sc += ';';
      sc += pub.sc_ids[i];
    }
    row.push_back(std::move(sc));
    for (auto c : pub.citations) row.push_back(std::to_string(c));
    csv::write_row(out, row);
  }
}

std::vector<Observation> expand_by_sc(std::span<const Publication> pubs) {
  std::vector<Observation> obs;
  std::size_t total = 0;
  for (const auto& pub : pubs) total += pub.sc_ids.size();
  obs.reserve(total);
  for (const auto& pub : pubs) {
    for (const auto& sc : pub.sc_ids) obs.push_back({&pub, sc});
  }
  return obs;
}

std::map<std::string, std::size_t, std::less<>> count_by_sc(std::span<const Observation> obs) {
  std::map<std::string, std::size_t, std::less<>> counts;
  for (const auto& o : obs) {
    auto it = counts.find(o.sc);
    if (it == counts.end()) it = counts.emplace(std::string(o.sc), 0).first;
    ++it->second;
  }
  return counts;
}

ScGroups filter_sc_min_count(std::span<const Observation> obs, std::size_t threshold) {
  if (threshold < 1) throw ValidationError("SC threshold must be at least 1");
  const auto counts = count_by_sc(obs);
  ScGroups groups;
  for (const auto& [sc, n] : counts) {
    if (n > threshold) groups[sc].reserve(n);
  }
  for (const auto& o : obs) {
    auto it = groups.find(o.sc);
    if (it != groups.end()) it->second.push_back(o);
  }
  return groups;
}

IngestReport make_ingest_report(std::span<const Publication> pubs,
                                std::span<const Observation> obs, const ScGroups& retained) {
  IngestReport report;
  report.publications = pubs.size();
  report.observations = obs.size();
  report.missing_if = static_cast<std::size_t>(std::count_if(
      pubs.begin(), pubs.end(), [](const Publication& p) { return !p.impact_factor; }));
  report.scs_total = count_by_sc(obs).size();
  report.scs_retained = retained.size();
  return report;
}

}  // namespace citepred
