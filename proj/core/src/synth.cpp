#include "citepred/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "citepred/error.hpp"
#include "citepred/parallel.hpp"

namespace citepred::synth {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Stream::Stream(std::uint64_t seed, std::uint64_t stream_index)
    : engine_(splitmix64(splitmix64(seed) ^ splitmix64(~stream_index))) {}

double Stream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Stream::uniform_open() {
  for (;;) {
    const double u = uniform();
    if (u > 0.0) return u;
  }
}

double Stream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

std::uint64_t Stream::below(std::uint64_t n) {
  const auto k = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
  return std::min(k, n - 1);
}

AccrualProfile fast_peak_accrual() {
  return {0.04, 0.16, 0.20, 0.16, 0.12, 0.09, 0.08, 0.06, 0.05, 0.04};
}

AccrualProfile slow_accrual() {
  return {0.01, 0.04, 0.07, 0.09, 0.11, 0.13, 0.14, 0.14, 0.14, 0.13};
}

void validate(const GeneratorConfig& config) {
  auto fail = [](const std::string& what) { throw ValidationError("generator config: " + what); };
  if (config.pubs_per_sc < 1) fail("pubs_per_sc must be >= 1");
  if (config.profiles.empty()) fail("at least one SC profile is required");
  if (config.years.empty()) fail("at least one publication year is required");
  if (!(config.multi_category_fraction >= 0.0 && config.multi_category_fraction <= 1.0)) {
    fail("multi_category_fraction must lie in [0, 1]");
  }
  std::set<std::string> codes;
  for (const auto& p : config.profiles) {
    const std::string where = "profile '" + p.sc + "': ";
    if (p.sc.empty() || p.sc.find_first_of(",;\"") != std::string::npos) {
      fail(where + "SC code must be nonempty without ',', ';' or quotes");
    }
    if (!codes.insert(p.sc).second) fail(where + "duplicate SC code");
    if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) fail(where + "sigma must be > 0");
    if (!std::isfinite(p.mu)) fail(where + "mu must be finite");
    if (!(p.rho >= 0.0 && p.rho <= 1.0)) fail(where + "rho must lie in [0, 1]");
    if (!(p.journal_share >= 0.0 && p.journal_share <= 1.0)) {
      fail(where + "journal_share must lie in [0, 1]");
    }
    if (p.journals < 1) fail(where + "journals must be >= 1");
    if (!(p.if_offset >= 0.0) || !(p.if_slope >= 0.0) || !(p.if_sigma >= 0.0)) {
      fail(where + "IF parameters must be nonnegative");
    }
    double total = 0.0;
    for (double f : p.accrual) {
      if (!(f >= 0.0)) fail(where + "accrual fractions must be nonnegative");
      total += f;
    }
    if (std::abs(total - 1.0) > 1e-12) fail(where + "accrual fractions must sum to 1");
  }
}

ScProfile preset_profile(std::string_view preset, std::string sc) {
  ScProfile p;
  p.sc = std::move(sc);
  if (preset == "fast-peak") {
    p.macro_area = "Clinical medicine";
    p.accrual = fast_peak_accrual();
  } else if (preset == "slow") {
    p.macro_area = "Mathematics";
    p.accrual = slow_accrual();
  } else {
    throw ValidationError("unknown preset '" + std::string(preset) +
                          "' (expected fast-peak or slow)");
  }
  return p;
}

GeneratorConfig preset_config(const std::vector<std::string>& presets, int n_sc,
                              int pubs_per_sc, std::uint64_t seed) {
  if (presets.empty()) throw ValidationError("at least one preset is required");
  if (n_sc < 1) throw ValidationError("number of SCs must be >= 1");
  GeneratorConfig config;
  config.seed = seed;
  config.pubs_per_sc = pubs_per_sc;
  for (int i = 0; i < n_sc; ++i) {
    const auto& name = presets[static_cast<std::size_t>(i) % presets.size()];
    std::string tag;
    for (char ch : name) {
      if (std::isalnum(static_cast<unsigned char>(ch))) {
        tag.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
      }
    }
    char code[64];
    std::snprintf(code, sizeof code, "SYN.%s.%02d", tag.c_str(), i + 1);
    config.profiles.push_back(preset_profile(name, code));
  }
  validate(config);
  return config;
}

namespace {

// Lifetime counts above this are clamped; the log-normal tail never gets
// there for the shipped presets.
constexpr std::int64_t kMaxLifetime = 5'000'000;

std::vector<Publication> generate_sc(const GeneratorConfig& config, std::size_t index) {
  const ScProfile& profile = config.profiles[index];
  Stream rng(config.seed, index);

  struct Journal {
    std::string id;
    double latent;
    double impact_factor;
    bool multi;
  };
  std::vector<Journal> journals;
  journals.reserve(static_cast<std::size_t>(profile.journals));
  const bool can_share = config.profiles.size() > 1;
  for (int j = 0; j < profile.journals; ++j) {
    const double u = rng.normal();
    const double v = rng.normal();
    const double raw_if =
        profile.if_offset +
        profile.if_slope * std::exp(profile.if_sigma * (profile.rho * u + (1.0 - profile.rho) * v));
    const bool multi = rng.uniform() < config.multi_category_fraction && can_share;
    char id[64];
    std::snprintf(id, sizeof id, "S%03zuJ%03d", index + 1, j + 1);
    journals.push_back({id, u, std::round(raw_if * 1000.0) / 1000.0, multi});
  }

  std::array<double, kTrajectoryLength> cumulative{};
  std::partial_sum(profile.accrual.begin(), profile.accrual.end(), cumulative.begin());

  const double journal_weight = std::sqrt(profile.journal_share);
  const double own_weight = std::sqrt(1.0 - profile.journal_share);
  const std::string& secondary = config.profiles[(index + 1) % config.profiles.size()].sc;

  std::vector<Publication> pubs;
  pubs.reserve(static_cast<std::size_t>(config.pubs_per_sc));
  for (int k = 0; k < config.pubs_per_sc; ++k) {
    const auto& journal = journals[rng.below(journals.size())];
    Publication pub;
    char id[64];
    std::snprintf(id, sizeof id, "S%03zuP%07d", index + 1, k + 1);
    pub.id = id;
    pub.year = config.years[rng.below(config.years.size())];
    pub.journal_id = journal.id;
    pub.impact_factor = journal.impact_factor;
    pub.sc_ids.push_back(profile.sc);
    if (journal.multi) pub.sc_ids.push_back(secondary);

    const double latent =
        profile.mu + profile.sigma * (journal_weight * journal.latent + own_weight * rng.normal());
    const auto lifetime =
        std::min<std::int64_t>(kMaxLifetime, std::llround(std::exp(std::min(latent, 40.0))));

    std::array<std::int64_t, kTrajectoryLength> yearly{};
    for (std::int64_t c = 0; c < lifetime; ++c) {
      const double u = rng.uniform();
      int year = kTrajectoryLength - 1;
      for (int t = 0; t < kTrajectoryLength - 1; ++t) {
        if (u < cumulative[t]) {
          year = t;
          break;
        }
      }
      ++yearly[year];
    }
    std::partial_sum(yearly.begin(), yearly.end(), pub.citations.begin());
    pubs.push_back(std::move(pub));
  }
  return pubs;
}

}  // namespace

std::vector<Publication> generate_corpus(const GeneratorConfig& config, unsigned workers) {
  validate(config);
  std::vector<std::vector<Publication>> per_sc(config.profiles.size());
  parallel_for(per_sc.size(), workers, [&](std::size_t i) { per_sc[i] = generate_sc(config, i); });
  std::vector<Publication> out;
  out.reserve(config.profiles.size() * static_cast<std::size_t>(config.pubs_per_sc));
  for (auto& block : per_sc) {
    std::move(block.begin(), block.end(), std::back_inserter(out));
  }
  return out;
}

AreaMap area_map(const GeneratorConfig& config) {
  AreaMap map;
  for (const auto& p : config.profiles) map.emplace(p.sc, p.macro_area);
  return map;
}

std::vector<RegressionSample> generate_model_samples(const LinearModelConfig& config) {
  if (config.n < 4) throw ValidationError("model sample needs at least 4 rows");
  if (!(config.noise_sd >= 0.0) || !(config.hetero >= 0.0)) {
    throw ValidationError("noise parameters must be nonnegative");
  }
  Stream rng(config.seed, 0);
  std::vector<RegressionSample> out(config.n);
  for (auto& s : out) {
    s.x = std::exp(0.5 * rng.normal());
    s.y_t = std::exp(rng.normal());
    const double sd = config.noise_sd * (1.0 + config.hetero * s.x);
    s.y_long = config.b0 + config.b1 * s.x + config.b2 * s.y_t + sd * rng.normal();
  }
  return out;
}

}  // namespace citepred::synth
