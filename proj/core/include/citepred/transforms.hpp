#pragma once

#include <array>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citepred/corpus.hpp"

namespace citepred {

enum class Variant { rescaled, log };

std::string_view to_string(Variant v);
/// Accepts "rescaled" or "log".
std::optional<Variant> parse_variant(std::string_view text);

/// Rescaling denominators for one (year, SC) cell.
struct Baseline {
  std::array<std::optional<double>, kTrajectoryLength> cbar{};  // mean c_t over c_t >= 1
  std::array<std::size_t, kTrajectoryLength> n_cited{};
  std::optional<double> ifbar;  // mean IF over distinct journals with an IF
  std::size_t n_journals = 0;
};

struct BaselineKey {
  int year = 0;
  std::string sc;
  auto operator<=>(const BaselineKey&) const = default;
};

class BaselineTable {
 public:
  /// Aggregates every (year, SC) cell present in `obs`. A publication counts
  /// towards cbar[t] iff its c_t >= 1; publications without an IF still count
  /// towards cbar but not towards ifbar.
  static BaselineTable compute(std::span<const Observation> obs);

  const Baseline* find(int year, std::string_view sc) const;
  const std::map<BaselineKey, Baseline>& cells() const { return cells_; }

  /// Audit export: `year,sc,t,cbar,n_cited,ifbar,n_journals`, one line per
  /// (cell, t); unavailable means are written as empty fields.
  void write_csv(std::ostream& out) const;

 private:
  std::map<BaselineKey, Baseline> cells_;
};

struct TransformOptions {
  int long_window = kLongWindow;
  /// Log variant only: use the raw journal IF instead of IF / IFbar.
  bool raw_if_for_log = false;
};

/// One observation in model space.
struct RegressionSample {
  std::string_view pub_id;
  std::string_view sc;
  double x = 0.0;       // IF regressor
  double y_t = 0.0;     // early-citation regressor
  double y_long = 0.0;  // response
  std::int64_t c_t = 0;
  Variant variant = Variant::rescaled;
  int t = 0;
};

/// y_t = c_t / cbar_t, y_long = c_L / cbar_L, x = IF / IFbar.
/// Throws BaselineUnavailableError naming (year, SC, t) when a required mean
/// is missing, ValidationError when the publication has no IF.
RegressionSample to_rescaled_sample(const Observation& obs, const BaselineTable& table,
                                    int t, const TransformOptions& opts = {});

/// y_t = ln(1 + c_t), y_long = ln(1 + c_L), x = IF / IFbar (or raw IF).
RegressionSample to_log_sample(const Observation& obs, const BaselineTable& table,
                               int t, const TransformOptions& opts = {});

RegressionSample to_sample(const Observation& obs, const BaselineTable& table,
                           Variant variant, int t, const TransformOptions& opts = {});

/// Reason the observation cannot be mapped, or nullopt if it can.
std::optional<std::string> sample_unavailable(const Observation& obs,
                                              const BaselineTable& table, Variant variant,
                                              int t, const TransformOptions& opts = {},
                                              bool need_early = true);

struct SampleSet {
  std::vector<RegressionSample> samples;
  std::size_t missing_if = 0;   // excluded: publication has no IF
  std::size_t rejected = 0;     // excluded: a required baseline is unavailable
  std::string first_rejection;  // empty when nothing was rejected
};

/// Maps every observation that can be mapped; the rest are counted. With
/// `need_early` false an observation with c_t = 0 is mapped even when cbar_t
/// is unavailable, since y_t = 0 in both variants.
SampleSet build_samples(std::span<const Observation> obs, const BaselineTable& table,
                        Variant variant, int t, const TransformOptions& opts = {},
                        bool need_early = true);

}  // namespace citepred
