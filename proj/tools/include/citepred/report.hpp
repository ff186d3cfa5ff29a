#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "citepred/analysis.hpp"

namespace citepred::report {

/// Ordered `key: value` lines written as `# key: value` above every output table.
using Metadata = std::vector<std::pair<std::string, std::string>>;

void write_metadata(std::ostream& out, const Metadata& meta);

inline constexpr std::string_view kResultsHeader =
    "subset,variant,t,n,b0,se0,p0,stars0,b1,se1,p1,stars1,b2,se2,p2,stars2,r2,bp_stat,bp_p,"
    "skip_reason";

inline constexpr std::string_view kErrorCurveHeader = "variant,t,bin,n,median_E";

inline constexpr std::string_view kMacroAreaHeader =
    "variant,t,macro_area,n_sc,n_sc_if_p_lt_0.1,if_min,if_max,if_mean,if_sd,ec_min,ec_max,"
    "ec_mean,ec_sd,r2_mean,r2_sd";

void write_results_csv(std::ostream& out, std::span<const FitResult> results);

/// Inverse of write_results_csv; `#` lines are skipped.
std::vector<FitResult> read_results_csv(std::istream& in);

void write_error_curves_csv(std::ostream& out, const ErrorSummary& summary);

/// "n.a." marks a standard deviation over fewer than two SCs; "-" marks IF
/// statistics of an area where no SC has a significant IF coefficient.
void write_macro_areas_csv(std::ostream& out, std::span<const MacroAreaSummary> rows);

// Aligned plain-text renderings; coefficients carry significance stars.
void render_results(std::ostream& out, std::span<const FitResult> results, int digits);
void render_strata(std::ostream& out, std::span<const FitResult> results, int digits);
void render_uncited(std::ostream& out, std::span<const FitResult> results, int digits);
void render_error_curves(std::ostream& out, const ErrorSummary& summary, int digits);
void render_macro_areas(std::ostream& out, std::span<const MacroAreaSummary> rows, int digits);

/// Left-aligned label columns, right-aligned rest, two spaces between columns.
void write_aligned(std::ostream& out, const std::vector<std::vector<std::string>>& rows,
                   std::size_t label_columns = 1);

}  // namespace citepred::report
