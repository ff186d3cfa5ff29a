#include "citepred/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "citepred/csv.hpp"
#include "citepred/error.hpp"
#include "citepred/parallel.hpp"

namespace citepred {

bool result_order(const FitResult& a, const FitResult& b) {
  return std::forward_as_tuple(a.subset, to_string(a.variant), a.t) <
         std::forward_as_tuple(b.subset, to_string(b.variant), b.t);
}

FitResult fit_samples(std::string subset, std::span<const RegressionSample> samples,
                      Variant variant, int t, Model model) {
  FitResult r;
  r.subset = std::move(subset);
  r.variant = variant;
  r.t = t;
  r.n = samples.size();
  r.model = model;
  try {
    const auto design = DesignMatrix::from_samples(samples, model);
    const auto fit = fit_ols(design);
    auto summary = robust_summary(fit, design);
    r.coefficients = std::move(summary.coefficients);
    r.r2 = fit.r2;
    r.bp = summary.bp;
    r.degenerate_response = fit.degenerate_response;
  } catch (const ComputationError& e) {
    r.skip_reason = e.what();
  }
  return r;
}

namespace {

FitResult skipped(std::string subset, Variant variant, int t, std::size_t n, Model model,
                  std::string reason) {
  FitResult r;
  r.subset = std::move(subset);
  r.variant = variant;
  r.t = t;
  r.n = n;
  r.model = model;
  r.skip_reason = std::move(reason);
  return r;
}

FitResult fit_observations(std::string subset, std::span<const Observation> obs,
                           const BaselineTable& table, Variant variant, int t,
                           const TransformOptions& opts) {
  auto set = build_samples(obs, table, variant, t, opts);
  if (set.rejected > 0) {
    return skipped(std::move(subset), variant, t, set.samples.size() + set.rejected,
                   Model::full, set.first_rejection);
  }
  return fit_samples(std::move(subset), set.samples, variant, t, Model::full);
}

void check_range(int t_min, int t_max, const TransformOptions& opts) {
  if (t_min < 0 || t_max < t_min || t_max >= opts.long_window) {
    throw ValidationError("window range [" + std::to_string(t_min) + ", " +
                          std::to_string(t_max) + "] must lie within [0, " +
                          std::to_string(opts.long_window - 1) + "]");
  }
}

}  // namespace

std::vector<FitResult> run_sc_sweep(const ScGroups& groups, const BaselineTable& table,
                                    Variant variant, int t_min, int t_max,
                                    const AnalysisOptions& opts) {
  check_range(t_min, t_max, opts.transform);
  struct Task {
    const std::string* sc;
    const std::vector<Observation>* obs;
    int t;
  };
  std::vector<Task> tasks;
  for (const auto& [sc, obs] : groups) {
    for (int t = t_min; t <= t_max; ++t) tasks.push_back({&sc, &obs, t});
  }
  std::vector<FitResult> results(tasks.size());
  parallel_for(tasks.size(), opts.workers, [&](std::size_t i) {
    const auto& task = tasks[i];
    results[i] = fit_observations(*task.sc, *task.obs, table, variant, task.t, opts.transform);
  });
  std::sort(results.begin(), results.end(), result_order);
  return results;
}

// ---------------------------------------------------------------------------

AreaMap read_area_map(std::istream& in) {
  csv::Reader reader(in);
  AreaMap map;
  bool first = true;
  while (auto row = reader.next()) {
    if (first && row->size() == 2 && (*row)[0] == "sc" && (*row)[1] == "macro_area") {
      first = false;
      continue;
    }
    first = false;
    if (row->size() != 2) {
      throw ParseError(reader.line(), "*", "area map rows need exactly 2 columns");
    }
    const auto& [sc, area] = std::tie((*row)[0], (*row)[1]);
    if (sc.empty() || area.empty()) throw ParseError(reader.line(), "sc", "empty value");
    auto [it, inserted] = map.emplace(sc, area);
    if (!inserted && it->second != area) {
      throw ParseError(reader.line(), "macro_area",
                       "SC '" + sc + "' mapped to both '" + it->second + "' and '" + area + "'");
    }
  }
  return map;
}

namespace {

struct Moments {
  std::optional<double> min, max, mean, sd;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  if (v.empty()) return m;
  m.min = *std::min_element(v.begin(), v.end());
  m.max = *std::max_element(v.begin(), v.end());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  m.mean = mean;
  if (v.size() >= 2) {
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    m.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return m;
}

}  // namespace

std::vector<MacroAreaSummary> summarize_macro_areas(std::span<const FitResult> fits,
                                                    const AreaMap& sc_to_area) {
  if (fits.empty()) return {};
  for (const auto& f : fits) {
    if (f.t != fits.front().t) throw ValidationError("summary requires a single time window");
    if (f.variant != fits.front().variant) {
      throw ValidationError("summary requires a single variant");
    }
  }
  std::map<std::string, std::vector<const FitResult*>> by_area;
  for (const auto& f : fits) {
    const auto it = sc_to_area.find(f.subset);
    if (it == sc_to_area.end()) {
      throw ValidationError("subject category '" + f.subset + "' missing from area map");
    }
    by_area[it->second].push_back(&f);
  }

  std::vector<MacroAreaSummary> out;
  for (auto& [area, members] : by_area) {
    std::sort(members.begin(), members.end(),
              [](const FitResult* a, const FitResult* b) { return a->subset < b->subset; });
    MacroAreaSummary s;
    s.area = area;
    s.variant = fits.front().variant;
    s.t = fits.front().t;
    std::vector<double> if_coef, ec_coef, r2;
    for (const FitResult* f : members) {
      if (f->skipped()) continue;
      ++s.n_sc;
      r2.push_back(f->r2);
      if (const auto* c = f->coefficient(1); c != nullptr && c->p_value < kIfSignificance) {
        if_coef.push_back(c->estimate);
      }
      if (const auto* c = f->coefficient(2)) ec_coef.push_back(c->estimate);
    }
    s.n_if_significant = if_coef.size();
    const auto im = moments(if_coef);
    s.if_min = im.min;
    s.if_max = im.max;
    s.if_mean = im.mean;
    s.if_sd = im.sd;
    const auto em = moments(ec_coef);
    s.ec_min = em.min;
    s.ec_max = em.max;
    s.ec_mean = em.mean;
    s.ec_sd = em.sd;
    const auto rm = moments(r2);
    s.r2_mean = rm.mean;
    s.r2_sd = rm.sd;
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<Observation> uncited_subset(std::span<const Observation> obs, int t) {
  if (t < 0 || t >= kTrajectoryLength) throw ValidationError("window out of range");
  std::vector<Observation> out;
  for (const auto& o : obs) {
    if (o.citations(t) == 0) out.push_back(o);
  }
  return out;
}

FitResult uncited_regression(std::string subset, std::span<const Observation> obs,
                             const BaselineTable& table, Variant variant, int t,
                             std::size_t min_obs, const TransformOptions& opts) {
  const auto uncited = uncited_subset(obs, t);
  auto set = build_samples(uncited, table, variant, t, opts, /*need_early=*/false);
  if (set.rejected > 0) {
    return skipped(std::move(subset), variant, t, set.samples.size() + set.rejected,
                   Model::if_only, set.first_rejection);
  }
  if (set.samples.size() <= min_obs) {
    return skipped(std::move(subset), variant, t, set.samples.size(), Model::if_only,
                   "too few uncited observations (" + std::to_string(set.samples.size()) +
                       ", need more than " + std::to_string(min_obs) + ")");
  }
  return fit_samples(std::move(subset), set.samples, variant, t, Model::if_only);
}

// ---------------------------------------------------------------------------

StratumAssignment assign_citedness_quantiles(std::span<const Observation> obs, int t, int q) {
  if (q < 2) throw ValidationError("quantile count must be at least 2");
  if (t < 0 || t >= kTrajectoryLength) throw ValidationError("window out of range");
  StratumAssignment a;
  a.t = t;
  a.q = q;
  a.bin.assign(obs.size(), 0);
  std::vector<std::size_t> cited;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (obs[i].citations(t) >= 1) {
      cited.push_back(i);
    } else {
      a.uncited.push_back(i);
    }
  }
  if (cited.size() < static_cast<std::size_t>(q)) {
    throw InsufficientDataError("only " + std::to_string(cited.size()) +
                                " cited observations at t=" + std::to_string(t) + " for " +
                                std::to_string(q) + " quantiles");
  }
  std::sort(cited.begin(), cited.end(), [&](std::size_t i, std::size_t j) {
    return std::make_tuple(obs[i].citations(t), obs[i].pub_id(), obs[i].sc) <
           std::make_tuple(obs[j].citations(t), obs[j].pub_id(), obs[j].sc);
  });
  const std::size_t n = cited.size();
  const auto uq = static_cast<std::size_t>(q);
  a.bin_sizes.assign(uq, 0);
  std::size_t lo = 0;
  for (std::size_t j = 1; j <= uq; ++j) {
    const std::size_t hi = (j * n + uq - 1) / uq;  // ceil(j n / q)
    for (std::size_t r = lo; r < hi; ++r) a.bin[cited[r]] = static_cast<int>(j);
    a.bin_sizes[j - 1] = hi - lo;
    lo = hi;
  }
  return a;
}

std::vector<FitResult> stratified_regressions(const StratumAssignment& assignment,
                                              std::span<const Observation> obs,
                                              const BaselineTable& table, Variant variant,
                                              const TransformOptions& opts) {
  if (assignment.bin.size() != obs.size()) {
    throw ValidationError("stratum assignment was computed for a different observation set");
  }
  std::vector<std::vector<Observation>> strata(static_cast<std::size_t>(assignment.q));
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (assignment.bin[i] > 0) strata[static_cast<std::size_t>(assignment.bin[i] - 1)].push_back(obs[i]);
  }
  std::vector<FitResult> out;
  for (std::size_t j = 0; j < strata.size(); ++j) {
    out.push_back(fit_observations("Q" + std::to_string(j + 1), strata[j], table, variant,
                                   assignment.t, opts));
  }
  out.push_back(fit_observations(std::string(kAllSubset), obs, table, variant, assignment.t, opts));
  return out;
}

// ---------------------------------------------------------------------------

std::optional<double> prediction_error(const RegressionSample& sample, const FitResult& fit) {
  if (sample.variant != fit.variant || sample.t != fit.t) {
    throw ValidationError("sample and fit differ in variant or window");
  }
  if (fit.skipped()) throw ValidationError("cannot predict from a skipped fit");
  if (!(sample.y_long > 0)) return std::nullopt;
  double pred = fit.coefficients.at(0).estimate + fit.coefficients.at(1).estimate * sample.x;
  if (fit.model == Model::full) pred += fit.coefficients.at(2).estimate * sample.y_t;
  return std::abs(sample.y_long - pred) / sample.y_long;
}

double median(std::vector<double> values) {
  if (values.empty()) throw ValidationError("median of an empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

int default_error_quantiles(Variant variant) { return variant == Variant::rescaled ? 10 : 5; }

namespace {

std::vector<ErrorCurvePoint> error_points_at(std::span<const Observation> obs,
                                             const BaselineTable& table, Variant variant, int t,
                                             int q, const TransformOptions& opts) {
  std::vector<std::size_t> index;  // sample k comes from obs[index[k]]
  std::vector<RegressionSample> samples;
  samples.reserve(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (!obs[i].pub->impact_factor) continue;
    if (auto reason = sample_unavailable(obs[i], table, variant, t, opts)) {
      throw BaselineUnavailableError("pooled fit at t=" + std::to_string(t) + ": " + *reason);
    }
    samples.push_back(to_sample(obs[i], table, variant, t, opts));
    index.push_back(i);
  }
  const auto fit = fit_samples(std::string(kAllSubset), samples, variant, t, Model::full);
  if (fit.skipped()) {
    throw ComputationError("pooled fit at t=" + std::to_string(t) + " failed: " + fit.skip_reason);
  }

  std::vector<std::optional<double>> error(obs.size());
  for (std::size_t k = 0; k < samples.size(); ++k) error[index[k]] = prediction_error(samples[k], fit);

  std::vector<double> overall;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (obs[i].citations(t) >= 1 && error[i]) overall.push_back(*error[i]);
  }

  std::vector<ErrorCurvePoint> points;
  std::size_t cited = 0;
  for (const auto& o : obs) cited += o.citations(t) >= 1 ? 1 : 0;
  const bool binned = !(variant == Variant::log && t < kLogBinnedMinWindow) &&
                      cited >= static_cast<std::size_t>(q);
  if (binned) {
    const auto assignment = assign_citedness_quantiles(obs, t, q);
    std::vector<std::vector<double>> per_bin(static_cast<std::size_t>(q));
    for (std::size_t i = 0; i < obs.size(); ++i) {
      if (assignment.bin[i] > 0 && error[i]) {
        per_bin[static_cast<std::size_t>(assignment.bin[i] - 1)].push_back(*error[i]);
      }
    }
    for (int j = 1; j <= q; ++j) {
      auto& v = per_bin[static_cast<std::size_t>(j - 1)];
      ErrorCurvePoint p{variant, t, j, v.size()};
      if (!v.empty()) p.median = median(std::move(v));
      points.push_back(p);
    }
  }
  ErrorCurvePoint total{variant, t, 0, overall.size()};
  if (!overall.empty()) total.median = median(std::move(overall));
  points.push_back(total);
  return points;
}

}  // namespace

ErrorSummary median_error_curves(std::span<const Observation> obs, const BaselineTable& table,
                                 Variant variant, int t_min, int t_max, int q,
                                 const AnalysisOptions& opts) {
  check_range(t_min, t_max, opts.transform);
  if (q < 2) throw ValidationError("quantile count must be at least 2");
  const auto windows = static_cast<std::size_t>(t_max - t_min + 1);
  std::vector<std::vector<ErrorCurvePoint>> per_t(windows);
  parallel_for(windows, opts.workers, [&](std::size_t k) {
    per_t[k] = error_points_at(obs, table, variant, t_min + static_cast<int>(k), q, opts.transform);
  });
  ErrorSummary summary;
  for (auto& pts : per_t) summary.points.insert(summary.points.end(), pts.begin(), pts.end());
  return summary;
}

}  // namespace citepred
