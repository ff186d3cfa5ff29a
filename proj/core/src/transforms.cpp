#include "citepred/transforms.hpp"

#include <cmath>

#include "citepred/csv.hpp"
#include "citepred/error.hpp"

namespace citepred {

std::string_view to_string(Variant v) { return v == Variant::rescaled ? "rescaled" : "log"; }

std::optional<Variant> parse_variant(std::string_view text) {
  if (text == "rescaled") return Variant::rescaled;
  if (text == "log") return Variant::log;
  return std::nullopt;
}

BaselineTable BaselineTable::compute(std::span<const Observation> obs) {
  struct Accumulator {
    std::array<double, kTrajectoryLength> sum{};
    std::array<std::size_t, kTrajectoryLength> count{};
    std::map<std::string_view, std::pair<double, std::size_t>> journals;
  };
  std::map<BaselineKey, Accumulator> acc;
  for (const auto& o : obs) {
    auto& a = acc[BaselineKey{o.pub->year, std::string(o.sc)}];
    for (int t = 0; t < kTrajectoryLength; ++t) {
      const auto c = o.pub->citations[t];
      if (c >= 1) {
        a.sum[t] += static_cast<double>(c);
        ++a.count[t];
      }
    }
    if (o.pub->impact_factor) {
      auto& j = a.journals[o.pub->journal_id];
      j.first += *o.pub->impact_factor;
      ++j.second;
    }
  }

  BaselineTable table;
  for (auto& [key, a] : acc) {
    Baseline b;
    for (int t = 0; t < kTrajectoryLength; ++t) {
      b.n_cited[t] = a.count[t];
      if (a.count[t] > 0) b.cbar[t] = a.sum[t] / static_cast<double>(a.count[t]);
    }
    double if_sum = 0.0;
    for (const auto& [journal, s] : a.journals) if_sum += s.first / static_cast<double>(s.second);
    b.n_journals = a.journals.size();
    if (b.n_journals > 0) {
      const double mean = if_sum / static_cast<double>(b.n_journals);
      if (mean > 0) b.ifbar = mean;
    }
    table.cells_.emplace(key, b);
  }
  return table;
}

const Baseline* BaselineTable::find(int year, std::string_view sc) const {
  const auto it = cells_.find(BaselineKey{year, std::string(sc)});
  return it == cells_.end() ? nullptr : &it->second;
}

void BaselineTable::write_csv(std::ostream& out) const {
  out << "year,sc,t,cbar,n_cited,ifbar,n_journals\n";
  for (const auto& [key, b] : cells_) {
    for (int t = 0; t < kTrajectoryLength; ++t) {
      csv::write_row(out, {std::to_string(key.year), key.sc, std::to_string(t),
                           b.cbar[t] ? csv::format_double(*b.cbar[t]) : "",
                           std::to_string(b.n_cited[t]),
                           b.ifbar ? csv::format_double(*b.ifbar) : "",
                           std::to_string(b.n_journals)});
    }
  }
}

namespace {

void check_window(int t, const TransformOptions& opts) {
  if (opts.long_window < 1 || opts.long_window >= kTrajectoryLength) {
    throw ValidationError("long-term window must lie in [1, " +
                          std::to_string(kTrajectoryLength - 1) + "]");
  }
  if (t < 0 || t >= opts.long_window) {
    throw ValidationError("window t=" + std::to_string(t) + " outside [0, " +
                          std::to_string(opts.long_window - 1) + "]");
  }
}

std::string cell_name(const Observation& obs, int t) {
  return "(year=" + std::to_string(obs.pub->year) + ", sc=" + std::string(obs.sc) +
         ", t=" + std::to_string(t) + ")";
}

}  // namespace

std::optional<std::string> sample_unavailable(const Observation& obs, const BaselineTable& table,
                                              Variant variant, int t,
                                              const TransformOptions& opts, bool need_early) {
  check_window(t, opts);
  if (!obs.pub->impact_factor) return "missing impact factor for " + std::string(obs.pub_id());
  const bool needs_ifbar = variant == Variant::rescaled || !opts.raw_if_for_log;
  const Baseline* b = table.find(obs.pub->year, obs.sc);
  if (b == nullptr) {
    if (variant == Variant::log && !needs_ifbar) return std::nullopt;
    return "no baseline cell " + cell_name(obs, t);
  }
  if (needs_ifbar && !b->ifbar) return "IF baseline unavailable " + cell_name(obs, t);
  if (variant == Variant::rescaled) {
    const bool early_ok = b->cbar[t] || (!need_early && obs.pub->citations[t] == 0);
    if (!early_ok) return "baseline unavailable " + cell_name(obs, t);
    if (!b->cbar[opts.long_window]) {
      return "baseline unavailable " + cell_name(obs, opts.long_window);
    }
  }
  return std::nullopt;
}

namespace {

RegressionSample make_sample(const Observation& obs, const BaselineTable& table, Variant variant,
                             int t, const TransformOptions& opts, bool need_early) {
  if (auto reason = sample_unavailable(obs, table, variant, t, opts, need_early)) {
    if (!obs.pub->impact_factor) throw ValidationError(*reason);
    throw BaselineUnavailableError(*reason);
  }
  const Baseline* b = table.find(obs.pub->year, obs.sc);
  const double impact = *obs.pub->impact_factor;
  const auto c_t = obs.pub->citations[t];
  const auto c_long = obs.pub->citations[opts.long_window];

  RegressionSample s;
  s.pub_id = obs.pub->id;
  s.sc = obs.sc;
  s.c_t = c_t;
  s.variant = variant;
  s.t = t;
  if (variant == Variant::rescaled) {
    s.x = impact / *b->ifbar;
    s.y_t = c_t == 0 ? 0.0 : static_cast<double>(c_t) / *b->cbar[t];
    s.y_long = c_long == 0 ? 0.0 : static_cast<double>(c_long) / *b->cbar[opts.long_window];
  } else {
    s.x = opts.raw_if_for_log ? impact : impact / *b->ifbar;
    s.y_t = std::log1p(static_cast<double>(c_t));
    s.y_long = std::log1p(static_cast<double>(c_long));
  }
  return s;
}

}  // namespace

RegressionSample to_rescaled_sample(const Observation& obs, const BaselineTable& table, int t,
                                    const TransformOptions& opts) {
  return make_sample(obs, table, Variant::rescaled, t, opts, true);
}

RegressionSample to_log_sample(const Observation& obs, const BaselineTable& table, int t,
                               const TransformOptions& opts) {
  return make_sample(obs, table, Variant::log, t, opts, true);
}

RegressionSample to_sample(const Observation& obs, const BaselineTable& table, Variant variant,
                           int t, const TransformOptions& opts) {
  return make_sample(obs, table, variant, t, opts, true);
}

SampleSet build_samples(std::span<const Observation> obs, const BaselineTable& table,
                        Variant variant, int t, const TransformOptions& opts, bool need_early) {
  check_window(t, opts);
  SampleSet set;
  set.samples.reserve(obs.size());
  for (const auto& o : obs) {
    if (!o.pub->impact_factor) {
      ++set.missing_if;
      continue;
    }
    if (auto reason = sample_unavailable(o, table, variant, t, opts, need_early)) {
      if (set.rejected++ == 0) set.first_rejection = std::move(*reason);
      continue;
    }
    set.samples.push_back(make_sample(o, table, variant, t, opts, need_early));
  }
  return set;
}

}  // namespace citepred
