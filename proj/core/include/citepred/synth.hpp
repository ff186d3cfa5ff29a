#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "citepred/analysis.hpp"
#include "citepred/corpus.hpp"
#include "citepred/transforms.hpp"

namespace citepred::synth {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Portable variates on top of std::mt19937_64 (whose bit stream is fixed by
/// the standard, unlike the std:: distributions).
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_index);

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform in (0, 1).
  double uniform_open();
  /// Standard normal (Marsaglia polar method).
  double normal();
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

using AccrualProfile = std::array<double, kTrajectoryLength>;

/// Citation-arrival profiles. "fast-peak" peaks in the second year after
/// publication; "slow" accrues steadily over the whole horizon.
AccrualProfile fast_peak_accrual();
AccrualProfile slow_accrual();

/// Generative parameters of one subject category.
///
/// Lifetime citations of publication i in journal j are
///   L_i = round(exp(mu + sigma * (sqrt(w) u_j + sqrt(1 - w) e_i)))
/// with u_j, e_i standard normal and w = journal_share. The journal IF is
///   IF_j = if_offset + if_slope * exp(if_sigma * (rho u_j + (1 - rho) v_j))
/// with v_j independent of everything else, so rho = 0 makes IF carry no
/// information about impact. Each of the L_i citations lands in year t with
/// probability accrual[t]; the trajectory is the running sum.
struct ScProfile {
  std::string sc;
  std::string macro_area;
  double mu = 3.0;
  double sigma = 1.0;
  double journal_share = 0.3;
  AccrualProfile accrual = fast_peak_accrual();
  double rho = 0.8;
  int journals = 25;
  double if_offset = 0.3;
  double if_slope = 1.5;
  double if_sigma = 0.6;
};

struct GeneratorConfig {
  std::uint64_t seed = 1;
  int pubs_per_sc = 1000;
  std::vector<ScProfile> profiles;
  std::vector<int> years{2004, 2005, 2006};
  /// Share of journals that are also listed under the next SC in `profiles`.
  double multi_category_fraction = 0.0;
};

/// Throws ValidationError describing the first invalid field.
void validate(const GeneratorConfig& config);

/// Named preset profile: "fast-peak" (clinical-medicine-like) or "slow"
/// (mathematics-like).
ScProfile preset_profile(std::string_view preset, std::string sc);

/// `n_sc` SCs cycling through `presets`, codes SYN.<PRESET>.<nn>.
GeneratorConfig preset_config(const std::vector<std::string>& presets, int n_sc,
                              int pubs_per_sc, std::uint64_t seed);

/// Deterministic given the config; SCs are generated on independent streams
/// so the output does not depend on `workers`.
std::vector<Publication> generate_corpus(const GeneratorConfig& config, unsigned workers = 1);

/// SC -> macro area for the generated profiles.
AreaMap area_map(const GeneratorConfig& config);

/// Direct draw from the regression model: responses
///   y = b0 + b1 x + b2 y_t + eps,  sd(eps) = noise_sd * (1 + hetero * x)
/// with x, y_t log-normal regressors.
struct LinearModelConfig {
  std::uint64_t seed = 1;
  std::size_t n = 1000;
  double b0 = 0.2;
  double b1 = 0.5;
  double b2 = 1.1;
  double noise_sd = 0.3;
  double hetero = 1.0;
};

std::vector<RegressionSample> generate_model_samples(const LinearModelConfig& config);

}  // namespace citepred::synth
