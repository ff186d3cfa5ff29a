#include "citepred/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

#include "citepred/csv.hpp"
#include "citepred/error.hpp"

namespace citepred::report {

namespace {

constexpr std::size_t kResultColumns = 20;

std::string opt_field(const std::optional<double>& v) {
  return v ? csv::format_double(*v) : std::string();
}

std::string starred(const CoefficientTest& c, int digits) {
  return csv::format_fixed(c.estimate, digits) + std::string(c.stars);
}

std::string fixed_or(const std::optional<double>& v, int digits, std::string_view missing) {
  return v ? csv::format_fixed(*v, digits) : std::string(missing);
}

double field_double(const std::vector<std::string>& row, std::size_t i, std::size_t line) {
  const auto v = csv::parse_double(row[i]);
  if (!v) {
    static constexpr std::array<std::string_view, kResultColumns> names{
        "subset", "variant", "t", "n", "b0", "se0", "p0", "stars0", "b1", "se1",
        "p1", "stars1", "b2", "se2", "p2", "stars2", "r2", "bp_stat", "bp_p", "skip_reason"};
    throw ParseError(line, std::string(names[i]), "invalid number '" + row[i] + "'");
  }
  return *v;
}

}  // namespace

void write_metadata(std::ostream& out, const Metadata& meta) {
  for (const auto& [key, value] : meta) out << "# " << key << ": " << value << '\n';
}

void write_results_csv(std::ostream& out, std::span<const FitResult> results) {
  out << kResultsHeader << '\n';
  for (const auto& r : results) {
    std::vector<std::string> row{r.subset, std::string(to_string(r.variant)), std::to_string(r.t),
                                 std::to_string(r.n)};
    for (std::size_t j = 0; j < 3; ++j) {
      const CoefficientTest* c = r.skipped() ? nullptr : r.coefficient(j);
      if (c == nullptr) {
        row.insert(row.end(), 4, std::string());
        continue;
      }
      row.push_back(csv::format_double(c->estimate));
      row.push_back(csv::format_double(c->std_error));
      row.push_back(csv::format_double(c->p_value));
      row.emplace_back(c->stars);
    }
    if (r.skipped()) {
      row.insert(row.end(), 3, std::string());
    } else {
      row.push_back(csv::format_double(r.r2));
      row.push_back(csv::format_double(r.bp.statistic));
      row.push_back(csv::format_double(r.bp.p_value));
    }
    row.push_back(r.skip_reason);
    csv::write_row(out, row);
  }
}

std::vector<FitResult> read_results_csv(std::istream& in) {
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header) throw ParseError(reader.line(), "header", "empty results file");
  {
    std::string joined;
    for (std::size_t i = 0; i < header->size(); ++i) joined += (i ? "," : "") + (*header)[i];
    if (joined != kResultsHeader) {
      throw ParseError(reader.line(), "header", "not a results file");
    }
  }
  std::vector<FitResult> out;
  while (auto row = reader.next()) {
    const std::size_t line = reader.line();
    if (row->size() != kResultColumns) {
      throw ParseError(line, "row", "expected " + std::to_string(kResultColumns) + " fields, got " +
                                        std::to_string(row->size()));
    }
    FitResult r;
    r.subset = (*row)[0];
    const auto variant = parse_variant((*row)[1]);
    if (!variant) throw ParseError(line, "variant", "unknown variant '" + (*row)[1] + "'");
    r.variant = *variant;
    const auto t = csv::parse_int((*row)[2]);
    const auto n = csv::parse_int((*row)[3]);
    if (!t || *t < 0 || *t >= kTrajectoryLength) throw ParseError(line, "t", "invalid window");
    if (!n || *n < 0) throw ParseError(line, "n", "invalid count");
    r.t = static_cast<int>(*t);
    r.n = static_cast<std::size_t>(*n);
    r.skip_reason = (*row)[19];
    if (!r.skipped()) {
      for (std::size_t j = 0; j < 3; ++j) {
        const std::size_t base = 4 + 4 * j;
        if ((*row)[base].empty()) break;
        CoefficientTest c;
        c.estimate = field_double(*row, base, line);
        c.std_error = field_double(*row, base + 1, line);
        c.p_value = field_double(*row, base + 2, line);
        c.t_stat = c.std_error > 0.0 ? c.estimate / c.std_error : 0.0;
        c.stars = stars(c.p_value);
        c.degenerate = c.std_error == 0.0 && c.estimate != 0.0;
        r.coefficients.push_back(c);
      }
      r.model = r.coefficients.size() == 2 ? Model::if_only : Model::full;
      r.r2 = field_double(*row, 16, line);
      r.bp.statistic = field_double(*row, 17, line);
      r.bp.p_value = field_double(*row, 18, line);
      r.bp.df = r.coefficients.empty() ? 0 : r.coefficients.size() - 1;
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_error_curves_csv(std::ostream& out, const ErrorSummary& summary) {
  out << kErrorCurveHeader << '\n';
  for (const auto& p : summary.points) {
    csv::write_row(out, {std::string(to_string(p.variant)), std::to_string(p.t),
                         p.bin == 0 ? std::string("overall") : std::to_string(p.bin),
                         std::to_string(p.n), p.n ? csv::format_double(p.median) : std::string()});
  }
}

void write_macro_areas_csv(std::ostream& out, std::span<const MacroAreaSummary> rows) {
  out << kMacroAreaHeader << '\n';
  for (const auto& s : rows) {
    auto if_field = [&](const std::optional<double>& v) {
      return s.n_if_significant == 0 ? std::string("-") : opt_field(v);
    };
    auto sd = [](const std::optional<double>& v) { return v ? csv::format_double(*v) : "n.a."; };
    csv::write_row(out, {std::string(to_string(s.variant)), std::to_string(s.t), s.area,
                         std::to_string(s.n_sc), std::to_string(s.n_if_significant),
                         if_field(s.if_min), if_field(s.if_max), if_field(s.if_mean),
                         s.n_if_significant == 0 ? std::string("-") : sd(s.if_sd),
                         opt_field(s.ec_min), opt_field(s.ec_max), opt_field(s.ec_mean),
                         sd(s.ec_sd), opt_field(s.r2_mean), sd(s.r2_sd)});
  }
}

void write_aligned(std::ostream& out, const std::vector<std::vector<std::string>>& rows,
                   std::size_t label_columns) {
  if (rows.empty()) return;
  // Cells past the header width are free-text notes and are not padded.
  const std::size_t columns = rows.front().size();
  std::vector<std::size_t> width(columns, 0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < std::min(columns, row.size()); ++i) {
      width[i] = std::max(width[i], row[i].size());
    }
  }
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i >= columns) {
        line += "  " + row[i];
        continue;
      }
      const std::size_t pad = width[i] - row[i].size();
      if (i < label_columns) {
        if (i > 0) line += "  ";
        line += row[i] + std::string(pad, ' ');
      } else {
        line += "  " + std::string(pad, ' ') + row[i];
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
}

void render_results(std::ostream& out, std::span<const FitResult> results, int digits) {
  std::vector<std::vector<std::string>> rows{
      {"Subject category", "Variant", "t", "Obs.", "Intercept", "Impact Factor", "Early citations",
       "R^2", "BP p"}};
  for (const auto& r : results) {
    if (r.skipped()) {
      rows.push_back({r.subset, std::string(to_string(r.variant)), std::to_string(r.t),
                      std::to_string(r.n), "-", "-", "-", "-", "-", "skipped: " + r.skip_reason});
      continue;
    }
    std::vector<std::string> row{r.subset, std::string(to_string(r.variant)),
                                 std::to_string(r.t), std::to_string(r.n)};
    for (std::size_t j = 0; j < 3; ++j) {
      const auto* c = r.coefficient(j);
      row.push_back(c ? starred(*c, digits) : "");
    }
    row.push_back(csv::format_fixed(r.r2, digits));
    row.push_back(csv::format_fixed(r.bp.p_value, digits));
    rows.push_back(std::move(row));
  }
  write_aligned(out, rows, 2);
  out << "\nStatistical significance: *p-value <0.1, **p-value <0.05, ***p-value <0.01.\n";
}

void render_strata(std::ostream& out, std::span<const FitResult> results, int digits) {
  // Grouped by variant and window with the strata in their natural order.
  std::vector<const FitResult*> order;
  for (const auto& r : results) order.push_back(&r);
  auto rank = [](const FitResult* r) {
    if (r->subset == kAllSubset) return std::numeric_limits<long long>::max();
    return r->subset.size() > 1 ? csv::parse_int(r->subset.substr(1)).value_or(0) : 0;
  };
  std::stable_sort(order.begin(), order.end(), [&](const FitResult* a, const FitResult* b) {
    if (a->variant != b->variant) return to_string(a->variant) > to_string(b->variant);
    if (a->t != b->t) return a->t < b->t;
    return rank(a) < rank(b);
  });
  std::vector<std::vector<std::string>> rows{
      {"Variant", "t", "Citedness", "Obs.", "Intercept", "Impact Factor", "Early citations", "R^2"}};
  for (const FitResult* r : order) {
    std::vector<std::string> row{std::string(to_string(r->variant)), std::to_string(r->t),
                                 r->subset, std::to_string(r->n)};
    if (r->skipped()) {
      row.insert(row.end(), {"-", "-", "-", "-", "skipped: " + r->skip_reason});
    } else {
      for (std::size_t j = 0; j < 3; ++j) {
        const auto* c = r->coefficient(j);
        row.push_back(c ? starred(*c, digits) : "");
      }
      row.push_back(csv::format_fixed(r->r2, digits));
    }
    rows.push_back(std::move(row));
  }
  write_aligned(out, rows, 1);
  out << "\nStatistical significance: *p-value <0.1, **p-value <0.05, ***p-value <0.01.\n";
}

void render_uncited(std::ostream& out, std::span<const FitResult> results, int digits) {
  std::vector<std::vector<std::string>> rows{
      {"Subset", "Variant", "t", "Obs.", "Intercept", "Impact Factor", "R^2"}};
  for (const auto& r : results) {
    std::vector<std::string> row{r.subset, std::string(to_string(r.variant)), std::to_string(r.t),
                                 std::to_string(r.n)};
    if (r.skipped()) {
      row.insert(row.end(), {"-", "-", "-", "skipped: " + r.skip_reason});
    } else {
      for (std::size_t j = 0; j < 2; ++j) {
        const auto* c = r.coefficient(j);
        row.push_back(c ? starred(*c, digits) : "");
      }
      row.push_back(csv::format_fixed(r.r2, digits));
    }
    rows.push_back(std::move(row));
  }
  write_aligned(out, rows, 2);
  out << "\nStatistical significance: *p-value <0.1, **p-value <0.05, ***p-value <0.01.\n";
}

void render_error_curves(std::ostream& out, const ErrorSummary& summary, int digits) {
  // One row per (variant, t), one column per bin, overall last.
  std::map<std::pair<std::string, int>, std::map<int, std::string>> grid;
  int max_bin = 0;
  for (const auto& p : summary.points) {
    grid[{std::string(to_string(p.variant)), p.t}][p.bin] =
        p.n ? csv::format_fixed(p.median, digits) : "-";
    max_bin = std::max(max_bin, p.bin);
  }
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head{"Variant", "t"};
  for (int b = 1; b <= max_bin; ++b) head.push_back("bin " + std::to_string(b));
  head.push_back("overall");
  rows.push_back(head);
  for (const auto& [key, bins] : grid) {
    std::vector<std::string> row{key.first, std::to_string(key.second)};
    for (int b = 1; b <= max_bin; ++b) {
      const auto it = bins.find(b);
      row.push_back(it == bins.end() ? "" : it->second);
    }
    const auto it = bins.find(0);
    row.push_back(it == bins.end() ? "" : it->second);
    rows.push_back(std::move(row));
  }
  write_aligned(out, rows, 1);
}

void render_macro_areas(std::ostream& out, std::span<const MacroAreaSummary> rows_in, int digits) {
  std::vector<std::vector<std::string>> rows{
      {"Variant", "Macro-area", "SCs", "With IF p-value < 0.1", "IF min", "IF max", "IF mean",
       "IF st.dev", "EC min", "EC max", "EC mean", "EC st.dev", "R^2 mean", "R^2 st.dev"}};
  for (const auto& s : rows_in) {
    const bool has_if = s.n_if_significant > 0;
    auto iff = [&](const std::optional<double>& v, std::string_view missing) {
      return has_if ? fixed_or(v, digits, missing) : std::string("-");
    };
    rows.push_back({std::string(to_string(s.variant)), s.area, std::to_string(s.n_sc),
                    std::to_string(s.n_if_significant), iff(s.if_min, "-"), iff(s.if_max, "-"),
                    iff(s.if_mean, "-"), iff(s.if_sd, "n.a."), fixed_or(s.ec_min, digits, "-"),
                    fixed_or(s.ec_max, digits, "-"), fixed_or(s.ec_mean, digits, "-"),
                    fixed_or(s.ec_sd, digits, "n.a."), fixed_or(s.r2_mean, digits, "-"),
                    fixed_or(s.r2_sd, digits, "n.a.")});
  }
  write_aligned(out, rows, 2);
  out << "\nIF statistics consider only SCs with IF coefficient p-values lower than 0.1.\n";
}

}  // namespace citepred::report
