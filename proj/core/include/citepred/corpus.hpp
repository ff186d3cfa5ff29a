#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace citepred {

/// Number of cumulative citation counts stored per publication (c_0..c_9).
inline constexpr int kTrajectoryLength = 10;

/// Default index of the long-term impact window.
inline constexpr int kLongWindow = kTrajectoryLength - 1;

using Trajectory = std::array<std::int64_t, kTrajectoryLength>;

/// One indexed item. `citations[t]` is the cumulative count accrued t years
/// after publication; it is nondecreasing in t.
struct Publication {
  std::string id;
  int year = 0;
  std::string journal_id;
  std::optional<double> impact_factor;  // empty when the journal has no IF
  std::vector<std::string> sc_ids;
  Trajectory citations{};

  bool operator==(const Publication&) const = default;
};

/// A (publication, subject category) pair. Both members point into an
/// immutable publication list which must outlive the observation.
struct Observation {
  const Publication* pub = nullptr;
  std::string_view sc;

  std::string_view pub_id() const { return pub->id; }
  std::int64_t citations(int t) const { return pub->citations[t]; }
};

/// Observations keyed by subject category, in SC order.
using ScGroups = std::map<std::string, std::vector<Observation>, std::less<>>;

/// Header expected by `parse_publications` and produced by `write_publications`.
inline constexpr std::string_view kCorpusHeader =
    "pub_id,year,journal_id,if,sc,c0,c1,c2,c3,c4,c5,c6,c7,c8,c9";

/// Parses the corpus CSV schema. Throws ParseError naming the line and field
/// on any malformed row or violated Publication invariant.
std::vector<Publication> parse_publications(std::istream& in);
std::vector<Publication> read_publications(const std::filesystem::path& path);

void write_publications(std::ostream& out, std::span<const Publication> pubs);

/// Throws ValidationError if `pub` breaks any Publication invariant.
void validate(const Publication& pub);

/// One observation per (publication, SC); publications in multi-category
/// journals appear once for each of their categories.
std::vector<Observation> expand_by_sc(std::span<const Publication> pubs);

/// Observation count for every SC present.
std::map<std::string, std::size_t, std::less<>> count_by_sc(
    std::span<const Observation> obs);

/// Keeps only SCs with strictly more than `threshold` observations.
ScGroups filter_sc_min_count(std::span<const Observation> obs, std::size_t threshold);

/// Counts reported alongside every fit run.
struct IngestReport {
  std::size_t publications = 0;
  std::size_t observations = 0;
  std::size_t missing_if = 0;  // publications excluded from regressions
  std::size_t scs_total = 0;
  std::size_t scs_retained = 0;
};

IngestReport make_ingest_report(std::span<const Publication> pubs,
                                std::span<const Observation> obs,
                                const ScGroups& retained);

}  // namespace citepred
