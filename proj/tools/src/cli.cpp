#include "citepred/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <thread>

#if __has_include("CLI11.hpp")
#include "CLI11.hpp"
#else
#include <CLI/CLI.hpp>
#endif
#include "citepred/csv.hpp"
#include "citepred/error.hpp"
#include "citepred/parallel.hpp"
#include "citepred/synth.hpp"

#ifndef CITEPRED_SOURCE_AREA_MAP
#define CITEPRED_SOURCE_AREA_MAP ""
#endif
#ifndef CITEPRED_INSTALLED_AREA_MAP
#define CITEPRED_INSTALLED_AREA_MAP ""
#endif

namespace citepred::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv(std::uint64_t& h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

unsigned effective_workers(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

class Output {
 public:
  Output(const RunConfig& config, std::string name) : path_(config.out / std::move(name)) {}

  std::ostream& stream() { return buffer_; }

  // Files are written whole so a failed run never leaves a half-written table.
  fs::path commit() {
    std::error_code ec;
    fs::create_directories(path_.parent_path(), ec);
    std::ofstream out(path_, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write '" + path_.string() + "'");
    const std::string text = buffer_.str();
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw ValidationError("write failed for '" + path_.string() + "'");
    return path_;
  }

 private:
  fs::path path_;
  std::ostringstream buffer_;
};

struct Corpus {
  std::vector<Publication> pubs;
  std::vector<Observation> obs;
  BaselineTable table;
};

std::vector<Publication> load_publications(const RunConfig& config) {
  if (config.inputs.empty()) throw ValidationError("no --input given");
  std::vector<Publication> pubs;
  std::set<std::string, std::less<>> seen;
  for (const auto& path : config.inputs) {
    auto part = read_publications(path);
    for (auto& p : part) {
      if (!seen.insert(p.id).second) {
        throw ValidationError(path.string() + ": duplicate pub_id '" + p.id + "'");
      }
      pubs.push_back(std::move(p));
    }
  }
  return pubs;
}

// The observations hold pointers into `pubs`, so the corpus is built in place.
void load_corpus(const RunConfig& config, Corpus& corpus) {
  corpus.pubs = load_publications(config);
  corpus.obs = expand_by_sc(corpus.pubs);
  corpus.table = BaselineTable::compute(corpus.obs);
}

std::vector<fs::path> write_results(const RunConfig& config, std::string_view command,
                                    std::string name, std::vector<FitResult> results,
                                    void (*render)(std::ostream&, std::span<const FitResult>, int)) {
  std::sort(results.begin(), results.end(), result_order);
  const auto meta = metadata(config, command);
  Output csv_out(config, name + ".csv");
  report::write_metadata(csv_out.stream(), meta);
  report::write_results_csv(csv_out.stream(), results);
  Output txt_out(config, name + ".txt");
  report::write_metadata(txt_out.stream(), meta);
  render(txt_out.stream(), results, config.digits);
  return {csv_out.commit(), txt_out.commit()};
}

std::string quote_message(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  return out;
}

int report_error(std::ostream& err, std::string_view kind, int code, std::string_view message) {
  err << "citepred: error: kind=" << kind << " code=" << code << " message=\""
      << quote_message(message) << "\"\n";
  return code;
}

}  // namespace

std::vector<Variant> RunConfig::variants() const {
  if (variant == "both") return {Variant::rescaled, Variant::log};
  if (const auto v = parse_variant(variant)) return {*v};
  throw ValidationError("unknown variant '" + variant + "' (expected rescaled, log or both)");
}

TransformOptions RunConfig::transform() const {
  TransformOptions t;
  t.long_window = long_window;
  t.raw_if_for_log = raw_if_log;
  return t;
}

AnalysisOptions RunConfig::analysis() const {
  return AnalysisOptions{transform(), effective_workers(workers)};
}

void validate(const RunConfig& config) {
  (void)config.variants();
  if (config.long_window < 1 || config.long_window > kLongWindow) {
    throw ValidationError("long-term window must lie in [1, " + std::to_string(kLongWindow) + "]");
  }
  const int t_max = config.last_window();
  if (config.t_min < 0 || t_max < config.t_min || t_max > config.long_window - 1) {
    throw ValidationError("t range [" + std::to_string(config.t_min) + ", " +
                          std::to_string(t_max) + "] must lie within [0, " +
                          std::to_string(config.long_window - 1) + "]");
  }
  if (config.sc_threshold < 1) throw ValidationError("SC threshold must be at least 1");
  if (config.uncited_threshold < 1) throw ValidationError("uncited threshold must be at least 1");
  if (config.quantiles && *config.quantiles < 2) {
    throw ValidationError("quantile count must be at least 2");
  }
  if (config.digits < 0 || config.digits > 17) throw ValidationError("digits must lie in [0, 17]");
  if (config.n_sc < 1) throw ValidationError("number of SCs must be at least 1");
  if (config.pubs_per_sc < 1) throw ValidationError("publications per SC must be at least 1");
  if (config.multi_category < 0.0 || config.multi_category > 1.0) {
    throw ValidationError("multi-category fraction must lie in [0, 1]");
  }
}

std::uint64_t config_hash(const RunConfig& config, std::string_view command) {
  std::ostringstream canon;
  canon << "command=" << command << "\nvariant=" << config.variant << "\nt_min=" << config.t_min
        << "\nt_max=" << config.last_window() << "\nlong_window=" << config.long_window
        << "\nsc_threshold=" << config.sc_threshold
        << "\nuncited_threshold=" << config.uncited_threshold
        << "\nquantiles=" << (config.quantiles ? std::to_string(*config.quantiles) : "default")
        << "\ndigits=" << config.digits << "\nraw_if_log=" << config.raw_if_log
        << "\nseed=" << config.seed << "\npresets=";
  for (const auto& p : config.presets) canon << p << ';';
  auto opt = [&](std::string_view key, const auto& v) {
    canon << '\n' << key << '=';
    if (v) canon << csv::format_double(static_cast<double>(*v));
  };
  canon << "\nn_sc=" << config.n_sc << "\npubs_per_sc=" << config.pubs_per_sc;
  opt("mu", config.mu);
  opt("sigma", config.sigma);
  opt("rho", config.rho);
  opt("journal_share", config.journal_share);
  opt("journals", config.journals);
  canon << "\nmulti_category=" << csv::format_double(config.multi_category) << '\n';

  std::uint64_t h = kFnvOffset;
  fnv(h, canon.str());
  // Input contents rather than paths, so relocating a corpus keeps the hash.
  for (const auto& path : config.inputs) {
    fnv(h, "input\n");
    fnv(h, read_file(path));
  }
  if (command == "summarize") {
    fnv(h, "area_map\n");
    fnv(h, read_file(config.area_map.empty() ? default_area_map() : config.area_map));
  }
  return h;
}

report::Metadata metadata(const RunConfig& config, std::string_view command) {
  report::Metadata m{
      {"tool", "citepred " + std::string(kVersion)},
      {"command", std::string(command)},
      {"config_hash", hex64(config_hash(config, command))},
      {"variant", config.variant},
      {"t_range", std::to_string(config.t_min) + ".." + std::to_string(config.last_window())},
      {"long_window", std::to_string(config.long_window)},
      {"log_base", "e (y = ln(1 + c))"},
      {"if_regressor_log", config.raw_if_log ? "raw IF" : "IF / IFbar"},
      {"baselines", "global per (year, SC); cbar_t over c_t >= 1; IFbar over distinct journals"},
      {"covariance", "HC3"},
      {"p_values", "two-sided Student-t, df = n - p"},
      {"breusch_pagan", "LM n*R^2 of e^2 on the model regressors (not studentized)"},
      {"tie_rule", "cited observations ranked by (c_t, pub_id, sc); bin j ends at rank ceil(j*n/q)"},
  };
  if (command == "fit" || command == "uncited") {
    m.emplace_back("sc_threshold", std::to_string(config.sc_threshold));
  }
  if (command == "uncited") {
    m.emplace_back("uncited_threshold", std::to_string(config.uncited_threshold));
  }
  if (command == "synth") m.emplace_back("seed", std::to_string(config.seed));
  return m;
}

fs::path default_area_map() {
  for (const char* candidate : {CITEPRED_INSTALLED_AREA_MAP, CITEPRED_SOURCE_AREA_MAP}) {
    std::error_code ec;
    if (*candidate != '\0' && fs::exists(candidate, ec)) return candidate;
  }
  throw ValidationError("default area map not found; pass --area-map");
}

std::vector<fs::path> cmd_fit(const RunConfig& config) {
  validate(config);
  Corpus corpus;
  load_corpus(config, corpus);
  const ScGroups groups = filter_sc_min_count(corpus.obs, config.sc_threshold);
  const auto opts = config.analysis();

  std::vector<FitResult> results;
  for (Variant v : config.variants()) {
    auto part = run_sc_sweep(groups, corpus.table, v, config.t_min, config.last_window(), opts);
    std::move(part.begin(), part.end(), std::back_inserter(results));
  }
  auto written = write_results(config, "fit", "results", std::move(results), report::render_results);

  const auto meta = metadata(config, "fit");
  Output baselines(config, "baselines.csv");
  report::write_metadata(baselines.stream(), meta);
  corpus.table.write_csv(baselines.stream());
  written.push_back(baselines.commit());

  const IngestReport rep = make_ingest_report(corpus.pubs, corpus.obs, groups);
  Output ingest(config, "ingest_report.csv");
  report::write_metadata(ingest.stream(), meta);
  ingest.stream() << "metric,value\n"
                  << "publications," << rep.publications << '\n'
                  << "observations," << rep.observations << '\n'
                  << "publications_missing_if," << rep.missing_if << '\n'
                  << "scs_total," << rep.scs_total << '\n'
                  << "scs_retained," << rep.scs_retained << '\n';
  written.push_back(ingest.commit());

  Output skipped(config, "skipped_scs.csv");
  report::write_metadata(skipped.stream(), meta);
  skipped.stream() << "sc,n_obs,threshold\n";
  for (const auto& [sc, n] : count_by_sc(corpus.obs)) {
    if (groups.contains(sc)) continue;
    csv::write_row(skipped.stream(),
                   {sc, std::to_string(n), std::to_string(config.sc_threshold)});
  }
  written.push_back(skipped.commit());
  return written;
}

std::vector<fs::path> cmd_summarize(const RunConfig& config) {
  validate(config);
  if (config.inputs.empty()) throw ValidationError("no --input results file given");
  std::vector<FitResult> fits;
  for (const auto& path : config.inputs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open results file '" + path.string() + "'");
    try {
      auto part = report::read_results_csv(in);
      std::move(part.begin(), part.end(), std::back_inserter(fits));
    } catch (const ParseError& e) {
      throw ValidationError(path.string() + ": " + e.what());
    }
  }
  const fs::path map_path = config.area_map.empty() ? default_area_map() : config.area_map;
  AreaMap areas;
  {
    std::ifstream in(map_path, std::ios::binary);
    if (!in) throw ValidationError("cannot open area map '" + map_path.string() + "'");
    try {
      areas = read_area_map(in);
    } catch (const ParseError& e) {
      throw ValidationError(map_path.string() + ": " + e.what());
    }
  }

  std::vector<MacroAreaSummary> rows;
  for (Variant v : config.variants()) {
    std::vector<FitResult> selected;
    for (const auto& f : fits) {
      if (f.variant == v && f.t >= config.t_min && f.t <= config.last_window()) {
        selected.push_back(f);
      }
    }
    auto part = summarize_macro_areas(selected, areas);
    std::move(part.begin(), part.end(), std::back_inserter(rows));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.area != b.area) return a.area < b.area;
    return to_string(a.variant) < to_string(b.variant);
  });

  const auto meta = metadata(config, "summarize");
  Output csv_out(config, "macro_areas.csv");
  report::write_metadata(csv_out.stream(), meta);
  report::write_macro_areas_csv(csv_out.stream(), rows);
  Output txt_out(config, "macro_areas.txt");
  report::write_metadata(txt_out.stream(), meta);
  report::render_macro_areas(txt_out.stream(), rows, config.digits);
  return {csv_out.commit(), txt_out.commit()};
}

std::vector<fs::path> cmd_uncited(const RunConfig& config) {
  validate(config);
  Corpus corpus;
  load_corpus(config, corpus);
  const ScGroups groups = filter_sc_min_count(corpus.obs, config.sc_threshold);
  const auto opts = config.analysis();

  struct Task {
    std::string subset;
    std::span<const Observation> obs;
    Variant variant;
    int t;
  };
  std::vector<Task> tasks;
  for (Variant v : config.variants()) {
    for (int t = config.t_min; t <= config.last_window(); ++t) {
      tasks.push_back({std::string(kAllSubset), corpus.obs, v, t});
      for (const auto& [sc, members] : groups) tasks.push_back({sc, members, v, t});
    }
  }
  std::vector<FitResult> results(tasks.size());
  parallel_for(tasks.size(), opts.workers, [&](std::size_t i) {
    const Task& task = tasks[i];
    results[i] = uncited_regression(task.subset, task.obs, corpus.table, task.variant, task.t,
                                    config.uncited_threshold, opts.transform);
  });
  return write_results(config, "uncited", "uncited", std::move(results), report::render_uncited);
}

std::vector<fs::path> cmd_strata(const RunConfig& config) {
  validate(config);
  Corpus corpus;
  load_corpus(config, corpus);
  const int q = config.quantiles.value_or(4);
  const auto opts = config.analysis();

  std::vector<std::pair<Variant, int>> tasks;
  for (Variant v : config.variants()) {
    for (int t = config.t_min; t <= config.last_window(); ++t) tasks.emplace_back(v, t);
  }
  std::vector<std::vector<FitResult>> parts(tasks.size());
  parallel_for(tasks.size(), opts.workers, [&](std::size_t i) {
    const auto [v, t] = tasks[i];
    try {
      const auto assignment = assign_citedness_quantiles(corpus.obs, t, q);
      parts[i] = stratified_regressions(assignment, corpus.obs, corpus.table, v, opts.transform);
    } catch (const InsufficientDataError& e) {
      for (int j = 1; j <= q + 1; ++j) {
        FitResult r;
        r.subset = j <= q ? "Q" + std::to_string(j) : std::string(kAllSubset);
        r.variant = v;
        r.t = t;
        r.skip_reason = e.what();
        parts[i].push_back(std::move(r));
      }
    }
  });
  std::vector<FitResult> results;
  for (auto& p : parts) std::move(p.begin(), p.end(), std::back_inserter(results));
  return write_results(config, "strata", "strata", std::move(results), report::render_strata);
}

std::vector<fs::path> cmd_errors(const RunConfig& config) {
  validate(config);
  Corpus corpus;
  load_corpus(config, corpus);
  const auto opts = config.analysis();

  ErrorSummary summary;
  for (Variant v : config.variants()) {
    const int q = config.quantiles.value_or(default_error_quantiles(v));
    auto part = median_error_curves(corpus.obs, corpus.table, v, config.t_min,
                                    config.last_window(), q, opts);
    std::move(part.points.begin(), part.points.end(), std::back_inserter(summary.points));
  }
  const auto meta = metadata(config, "errors");
  Output csv_out(config, "error_curves.csv");
  report::write_metadata(csv_out.stream(), meta);
  report::write_error_curves_csv(csv_out.stream(), summary);
  Output txt_out(config, "error_curves.txt");
  report::write_metadata(txt_out.stream(), meta);
  report::render_error_curves(txt_out.stream(), summary, config.digits);
  return {csv_out.commit(), txt_out.commit()};
}

std::vector<fs::path> cmd_synth(const RunConfig& config) {
  validate(config);
  auto gen = synth::preset_config(config.presets, config.n_sc, config.pubs_per_sc, config.seed);
  for (auto& p : gen.profiles) {
    if (config.mu) p.mu = *config.mu;
    if (config.sigma) p.sigma = *config.sigma;
    if (config.rho) p.rho = *config.rho;
    if (config.journal_share) p.journal_share = *config.journal_share;
    if (config.journals) p.journals = *config.journals;
  }
  gen.multi_category_fraction = config.multi_category;
  synth::validate(gen);
  const auto pubs = synth::generate_corpus(gen, effective_workers(config.workers));

  const auto meta = metadata(config, "synth");
  Output corpus_out(config, "corpus.csv");
  report::write_metadata(corpus_out.stream(), meta);
  write_publications(corpus_out.stream(), pubs);
  Output areas_out(config, "sc_areas.csv");
  report::write_metadata(areas_out.stream(), meta);
  areas_out.stream() << "sc,macro_area\n";
  for (const auto& [sc, area] : synth::area_map(gen)) csv::write_row(areas_out.stream(), {sc, area});
  return {corpus_out.commit(), areas_out.commit()};
}

namespace {

constexpr std::string_view kResultsColumnsHelp =
    "Columns: subset,variant,t,n,b0,se0,p0,stars0,b1,se1,p1,stars1,b2,se2,p2,stars2,r2,"
    "bp_stat,bp_p,skip_reason. b0 intercept, b1 impact factor, b2 early citations; se are HC3 "
    "standard errors, p two-sided Student-t p-values, bp the Breusch-Pagan LM statistic.";

// INI reader that files top-level keys under the subcommand being run, so a
// config file can say `variant = log` instead of `fit.variant = log`.
class CommandConfig : public CLI::ConfigINI {
 public:
  explicit CommandConfig(std::string command) : command_(std::move(command)) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigINI::from_config(input);
    if (command_.empty()) return items;
    for (auto& item : items) {
      if (item.parents.empty() && item.name != "++" && item.name != "--") {
        item.parents.push_back(command_);
      }
    }
    return items;
  }

 private:
  std::string command_;
};

void add_input(CLI::App& sub, RunConfig& c, std::string_view what) {
  sub.add_option("-i,--input", c.inputs, std::string(what))->required()->check(CLI::ExistingFile);
}

void add_out(CLI::App& sub, RunConfig& c) {
  sub.add_option("-o,--out", c.out, "Output directory")->capture_default_str();
}

void add_window(CLI::App& sub, RunConfig& c) {
  sub.add_option("--variant", c.variant, "rescaled, log or both")
      ->check(CLI::IsMember({"rescaled", "log", "both"}))
      ->capture_default_str();
  sub.add_option("--t-min", c.t_min, "First citation window")->capture_default_str();
  sub.add_option("--t-max", c.t_max, "Last citation window (default long-window - 1)");
  sub.add_option("--long-window", c.long_window, "Index of the long-term citation count")
      ->capture_default_str();
  sub.add_flag("--raw-if-log", c.raw_if_log, "Use the raw IF as regressor in the log variant");
}

void add_common(CLI::App& sub, RunConfig& c) {
  sub.add_option("--workers", c.workers, "Worker threads, 0 for one per core")
      ->capture_default_str();
  sub.add_option("--digits", c.digits, "Decimals in the aligned text tables")
      ->capture_default_str();
  add_out(sub, c);
  sub.fallthrough();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Long-term citation impact prediction from early citations and journal IF",
               "citepred"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.allow_config_extras(CLI::config_extras_mode::error);

  auto* fit = app.add_subcommand("fit", "Per-SC regressions over every citation window");
  add_input(*fit, config, "Corpus CSV file(s)");
  add_window(*fit, config);
  fit->add_option("--sc-threshold", config.sc_threshold, "Keep SCs with more observations")
      ->capture_default_str();
  add_common(*fit, config);
  fit->footer("Writes results.csv, results.txt, baselines.csv, ingest_report.csv and "
              "skipped_scs.csv.\nresults.csv " + std::string(kResultsColumnsHelp) +
              "\nbaselines.csv columns: year,sc,t,cbar,n_cited,ifbar,n_journals."
              "\nskipped_scs.csv columns: sc,n_obs,threshold.");

  auto* summarize = app.add_subcommand("summarize", "Macro-area statistics of per-SC fits");
  add_input(*summarize, config, "results.csv from fit");
  add_window(*summarize, config);
  summarize->add_option("--area-map", config.area_map, "CSV sc,macro_area (default: shipped map)")
      ->check(CLI::ExistingFile);
  add_common(*summarize, config);
  summarize->footer("Select a single window with --t-min/--t-max. Writes macro_areas.csv and "
                    "macro_areas.txt.\nColumns: " + std::string(report::kMacroAreaHeader) +
                    ". IF statistics use only SCs with IF p < 0.1 ('-' when there are none); "
                    "standard deviations over fewer than two SCs are 'n.a.'.");

  auto* uncited = app.add_subcommand("uncited", "IF-only regressions on uncited publications");
  add_input(*uncited, config, "Corpus CSV file(s)");
  add_window(*uncited, config);
  uncited->add_option("--sc-threshold", config.sc_threshold, "Per-SC rows for SCs above this size")
      ->capture_default_str();
  uncited->add_option("--uncited-threshold", config.uncited_threshold,
                      "Fit only subsets with more uncited observations")
      ->capture_default_str();
  add_common(*uncited, config);
  uncited->footer("Writes uncited.csv and uncited.txt, one ALL row and one row per SC for each "
                  "(variant, t).\nuncited.csv " + std::string(kResultsColumnsHelp) +
                  " b2 columns are empty.");

  auto* strata = app.add_subcommand("strata", "Regressions by citedness quantile");
  add_input(*strata, config, "Corpus CSV file(s)");
  add_window(*strata, config);
  strata->add_option("--quantiles", config.quantiles, "Number of citedness bins (default 4)");
  add_common(*strata, config);
  strata->footer("Writes strata.csv and strata.txt with subsets Q1..Qq (cited publications only) "
                 "and ALL (every publication) per (variant, t).\nstrata.csv " +
                 std::string(kResultsColumnsHelp));

  auto* errors = app.add_subcommand("errors", "Median prediction error by citedness bin");
  add_input(*errors, config, "Corpus CSV file(s)");
  add_window(*errors, config);
  errors->add_option("--quantiles", config.quantiles,
                     "Bins (default 10 for rescaled, 5 for log)");
  add_common(*errors, config);
  errors->footer("Writes error_curves.csv and error_curves.txt.\nColumns: " +
                 std::string(report::kErrorCurveHeader) +
                 ". bin is 1..q from least to most cited, or 'overall'. E = |y - yhat| / y.");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth->add_option("--seed", config.seed, "Random seed")->capture_default_str();
  synth->add_option("--preset", config.presets, "fast-peak or slow, cycled over SCs")
      ->check(CLI::IsMember({"fast-peak", "slow"}))
      ->delimiter(',');
  synth->add_option("--n-sc", config.n_sc, "Number of SCs")->capture_default_str();
  synth->add_option("--pubs-per-sc", config.pubs_per_sc, "Publications per SC")
      ->capture_default_str();
  synth->add_option("--mu", config.mu, "Log-mean of the lifetime count");
  synth->add_option("--sigma", config.sigma, "Log-sd of the lifetime count");
  synth->add_option("--rho", config.rho, "Weight of journal quality in the IF");
  synth->add_option("--journal-share", config.journal_share,
                    "Share of log-lifetime variance explained by the journal");
  synth->add_option("--journals", config.journals, "Journals per SC");
  synth->add_option("--multi-category", config.multi_category,
                    "Fraction of journals also listed in the next SC")
      ->capture_default_str();
  add_common(*synth, config);
  synth->footer("Writes corpus.csv (pub_id,year,journal_id,if,sc,c0..c9) and sc_areas.csv "
                "(sc,macro_area).");

  std::string command;
  for (int i = 1; i < argc && command.empty(); ++i) {
    for (const auto* sub : app.get_subcommands({})) {
      if (sub->get_name() == argv[i]) command = argv[i];
    }
  }
  app.set_config("--config", "", "Key-value config file (key = value per line, keys are flag "
                                 "names); command-line flags take precedence");
  app.config_formatter(std::make_shared<CommandConfig>(command));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return report_error(err, "usage", kValidation, e.what());
  }

  try {
    std::vector<fs::path> written;
    if (*fit) written = cmd_fit(config);
    if (*summarize) written = cmd_summarize(config);
    if (*uncited) written = cmd_uncited(config);
    if (*strata) written = cmd_strata(config);
    if (*errors) written = cmd_errors(config);
    if (*synth) written = cmd_synth(config);
    for (const auto& p : written) out << p.string() << '\n';
    return kSuccess;
  } catch (const ParseError& e) {
    return report_error(err, "parse", kValidation, e.what());
  } catch (const ValidationError& e) {
    return report_error(err, "validation", kValidation, e.what());
  } catch (const ComputationError& e) {
    return report_error(err, "computation", kDegenerate, e.what());
  } catch (const std::exception& e) {
    return report_error(err, "internal", kInternal, e.what());
  }
}

}  // namespace citepred::cli
