#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "citepred/analysis.hpp"
#include "citepred/report.hpp"

namespace citepred::cli {

inline constexpr std::string_view kVersion = "1.0.0";

enum ExitCode : int { kSuccess = 0, kInternal = 1, kValidation = 2, kDegenerate = 3 };

struct RunConfig {
  std::vector<std::filesystem::path> inputs;
  std::string variant = "both";  // rescaled | log | both
  int t_min = 0;
  std::optional<int> t_max;  // defaults to long_window - 1
  int long_window = kLongWindow;
  std::size_t sc_threshold = kDefaultScThreshold;
  std::size_t uncited_threshold = kDefaultUncitedThreshold;
  std::optional<int> quantiles;
  std::filesystem::path area_map;  // empty: shipped default mapping
  std::filesystem::path out = ".";
  std::uint64_t seed = 1;
  unsigned workers = 1;
  int digits = 3;
  bool raw_if_log = false;

  // synth
  std::vector<std::string> presets{"fast-peak"};
  int n_sc = 20;
  int pubs_per_sc = 5000;
  std::optional<double> mu, sigma, rho, journal_share;
  std::optional<int> journals;
  double multi_category = 0.0;

  int last_window() const { return t_max.value_or(long_window - 1); }
  std::vector<Variant> variants() const;
  TransformOptions transform() const;
  AnalysisOptions analysis() const;
};

/// Throws ValidationError when a field is out of range.
void validate(const RunConfig& config);

/// Stable 64-bit digest of every setting that can change a command's output,
/// including the bytes of the input files. Worker count and output directory
/// are excluded.
std::uint64_t config_hash(const RunConfig& config, std::string_view command);

report::Metadata metadata(const RunConfig& config, std::string_view command);

/// Path of the shipped SC -> macro-area table.
std::filesystem::path default_area_map();

// Each command writes its files under config.out and returns the paths written.
std::vector<std::filesystem::path> cmd_fit(const RunConfig& config);
std::vector<std::filesystem::path> cmd_summarize(const RunConfig& config);
std::vector<std::filesystem::path> cmd_uncited(const RunConfig& config);
std::vector<std::filesystem::path> cmd_strata(const RunConfig& config);
std::vector<std::filesystem::path> cmd_errors(const RunConfig& config);
std::vector<std::filesystem::path> cmd_synth(const RunConfig& config);

/// Full command-line entry point. Errors are reported on `err` as one line
/// `citepred: error: kind=<kind> code=<n> message="<text>"`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace citepred::cli
