#pragma once

#include <cstddef>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "citepred/corpus.hpp"
#include "citepred/inference.hpp"
#include "citepred/ols.hpp"
#include "citepred/transforms.hpp"

namespace citepred {

inline constexpr std::size_t kDefaultScThreshold = 100;
inline constexpr std::size_t kDefaultUncitedThreshold = 50;
/// IF coefficients enter macro-area statistics only below this p-value.
inline constexpr double kIfSignificance = 0.1;
/// Below this window the log variant has too little spread in c_t for
/// quintiles; error curves report the overall median only.
inline constexpr int kLogBinnedMinWindow = 2;

inline constexpr std::string_view kAllSubset = "ALL";

/// Inference for one (subset, variant, t). A skipped result carries the
/// reason and no coefficients.
struct FitResult {
  std::string subset;
  Variant variant = Variant::rescaled;
  int t = 0;
  std::size_t n = 0;
  Model model = Model::full;
  std::vector<CoefficientTest> coefficients;  // b0, b1 (IF), [b2 (early citations)]
  double r2 = std::numeric_limits<double>::quiet_NaN();
  BreuschPagan bp;
  bool degenerate_response = false;
  std::string skip_reason;

  bool skipped() const { return !skip_reason.empty(); }
  const CoefficientTest* coefficient(std::size_t j) const {
    return j < coefficients.size() ? &coefficients[j] : nullptr;
  }
};

/// Results order: subset, then variant name, then t.
bool result_order(const FitResult& a, const FitResult& b);

struct AnalysisOptions {
  TransformOptions transform;
  unsigned workers = 1;
};

/// OLS + HC3 + Breusch-Pagan on prepared samples. Computation failures are
/// returned as skipped results, never thrown.
FitResult fit_samples(std::string subset, std::span<const RegressionSample> samples,
                      Variant variant, int t, Model model);

/// One result per (SC, t) for t in [t_min, t_max], sorted by result_order.
std::vector<FitResult> run_sc_sweep(const ScGroups& groups, const BaselineTable& table,
                                    Variant variant, int t_min, int t_max,
                                    const AnalysisOptions& opts = {});

// ---------------------------------------------------------------------------
// Macro areas

using AreaMap = std::map<std::string, std::string, std::less<>>;

/// Two-column CSV `sc,macro_area`; `#` lines are comments.
AreaMap read_area_map(std::istream& in);

struct MacroAreaSummary {
  std::string area;
  Variant variant = Variant::rescaled;
  int t = 0;
  std::size_t n_sc = 0;
  std::size_t n_if_significant = 0;
  // IF coefficient statistics over SCs with IF p-value < kIfSignificance.
  std::optional<double> if_min, if_max, if_mean, if_sd;
  // Early-citation coefficient and R^2 statistics over all SCs in the area.
  std::optional<double> ec_min, ec_max, ec_mean, ec_sd;
  std::optional<double> r2_mean, r2_sd;
};

/// Per-area statistics of per-SC fits, sorted by area name. All non-skipped
/// fits must share variant and t. Sample standard deviations are unavailable
/// for fewer than two values. Throws ValidationError for an unmapped SC.
std::vector<MacroAreaSummary> summarize_macro_areas(std::span<const FitResult> fits,
                                                    const AreaMap& sc_to_area);

// ---------------------------------------------------------------------------
// Uncited publications

/// Observations with c_t = 0.
std::vector<Observation> uncited_subset(std::span<const Observation> obs, int t);

/// IF-only model on the c_t = 0 subset of `obs`. Skipped unless the subset
/// has strictly more than `min_obs` mappable observations.
FitResult uncited_regression(std::string subset, std::span<const Observation> obs,
                             const BaselineTable& table, Variant variant, int t,
                             std::size_t min_obs = kDefaultUncitedThreshold,
                             const TransformOptions& opts = {});

// ---------------------------------------------------------------------------
// Citedness strata

struct StratumAssignment {
  int t = 0;
  int q = 0;
  std::vector<int> bin;                 // per input observation; 0 when uncited
  std::vector<std::size_t> uncited;     // indices with c_t = 0
  std::vector<std::size_t> bin_sizes;   // index j - 1 holds the size of bin j
};

/// Ranks the cited observations (c_t >= 1) by (c_t, pub_id, sc) and cuts at
/// ranks ceil(j n / q). Throws ValidationError for q < 2 and
/// InsufficientDataError when fewer than q observations are cited.
StratumAssignment assign_citedness_quantiles(std::span<const Observation> obs, int t, int q);

/// Full-model fits for Q1..Qq followed by ALL (every mappable observation,
/// cited or not).
std::vector<FitResult> stratified_regressions(const StratumAssignment& assignment,
                                              std::span<const Observation> obs,
                                              const BaselineTable& table, Variant variant,
                                              const TransformOptions& opts = {});

// ---------------------------------------------------------------------------
// Prediction error

/// |y_long - prediction| / y_long, undefined when y_long = 0.
std::optional<double> prediction_error(const RegressionSample& sample, const FitResult& fit);

struct ErrorCurvePoint {
  Variant variant = Variant::rescaled;
  int t = 0;
  int bin = 0;  // 1..q; 0 is the overall median across all bins
  std::size_t n = 0;
  double median = std::numeric_limits<double>::quiet_NaN();
};

struct ErrorSummary {
  std::vector<ErrorCurvePoint> points;  // by t, then bin with overall (0) last
};

/// Default bin count: deciles for rescaled citations, quintiles for logs.
int default_error_quantiles(Variant variant);

/// Median prediction error per (t, citedness bin) using the pooled fit over
/// all observations at each window. For the log variant below
/// kLogBinnedMinWindow, or when too few cited observations exist, only the
/// overall row is produced. Throws ComputationError if the pooled fit fails.
ErrorSummary median_error_curves(std::span<const Observation> obs, const BaselineTable& table,
                                 Variant variant, int t_min, int t_max, int q,
                                 const AnalysisOptions& opts = {});

/// Median of a nonempty set; the mean of the two central values for even sizes.
double median(std::vector<double> values);

}  // namespace citepred
