#ifndef CPSBL_EXPERIMENT_HPP
#define CPSBL_EXPERIMENT_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cpsbl/channel_model.hpp"
#include "cpsbl/cross_predictive.hpp"
#include "cpsbl/esbl.hpp"
#include "cpsbl/measurement_model.hpp"

namespace cpsbl {

/// Full scenario description. Noise variance is fixed to 1 and the transmit
/// power carries the SNR.
struct SystemConfig {
  int num_antennas = 256;
  int pilot_length = 20;
  int num_users = 5;
  int num_paths = 5;
  double snr_db = 10.0;
  double wavelength = 0.0025;  // 120 GHz
  std::optional<int> num_angle_bins;  // defaults to num_antennas
  double coherence_beta = 1.2;
  double min_distance_frac = 0.1;  // of the Fraunhofer distance
  EsblHyper esbl_hyper;
  int esbl_iters = 50;
  double esbl_tol = 1e-6;
  AdamParams adam;
  int cpsbl_iters = 50;
  std::uint64_t master_seed = 1;
  int num_trials = 100;
  bool on_grid = false;  // plant paths on dictionary columns

  double noise_variance() const noexcept { return 1.0; }
  double transmit_power() const;
  double fraunhofer_distance() const;
  int angle_bins() const noexcept { return num_angle_bins.value_or(num_antennas); }
  ArrayGeometry geometry() const;
  PolarGridConfig grid_config() const;

  /// Throws ConfigError naming the first offending key.
  void validate() const;
};

/// M=256, N=20, K=5, L=5, SNR 10 dB, d_F = 81.92 m.
SystemConfig full_preset();

/// M=32, N=8, K=2, L=3, 32 angle bins, d_F = 81.92 m.
SystemConfig desk_preset();

enum class Estimator : std::size_t { kEsbl = 0, kCpsbl = 1 };
inline constexpr std::size_t kNumEstimators = 2;
inline constexpr std::array<Estimator, kNumEstimators> kAllEstimators = {Estimator::kEsbl,
                                                                          Estimator::kCpsbl};

/// Column header used in results tables: "E_SBL" / "CP_SBL".
std::string_view estimator_name(Estimator estimator);

struct EstimatorOutcome {
  bool valid = false;
  double squared_error = 0.0;  // ||H_hat - H||_F^2
  double wall_time = 0.0;      // seconds
  std::string failure;
};

struct TrialOutcome {
  std::array<EstimatorOutcome, kNumEstimators> estimators;
  double channel_energy = 0.0;  // ||H||_F^2

  const EstimatorOutcome& operator[](Estimator e) const {
    return estimators[static_cast<std::size_t>(e)];
  }
  EstimatorOutcome& operator[](Estimator e) { return estimators[static_cast<std::size_t>(e)]; }
};

/// Deterministic per-config pieces shared by every trial.
struct TrialContext {
  SystemConfig config;
  ArrayGeometry geometry;
  PolarDictionary dictionary;
  PilotMatrix pilots;
};

TrialContext make_trial_context(const SystemConfig& config);

/// Everything one trial produced before estimation; useful for inspection.
struct TrialData {
  ChannelRealization channels;
  LinearModel model;
};

/// Channels and the assembled linear model for a trial, drawn from streams
/// that depend only on (master_seed, trial_index).
TrialData simulate_trial_data(const TrialContext& context, std::uint64_t trial_index);

/// H_hat = F * reshape(u_hat, Q, K), column-major.
CMatrix reconstruct_channels(const PolarDictionary& dictionary, const CVector& estimate,
                             Index num_users);

TrialOutcome run_trial(const TrialContext& context, std::uint64_t trial_index);
TrialOutcome run_trial(const SystemConfig& config, std::uint64_t trial_index);

/// Ratio of summed errors to summed channel energies over the valid trials.
/// NaN when no trial is valid for this estimator.
double nmse(std::span<const TrialOutcome> outcomes, Estimator estimator);

enum class SweepVariable { kSnrDb, kNumAntennas, kPilotLength, kNumPaths };

/// Accepts "snr_db"/"snr", "num_antennas"/"m", "pilot_length"/"n", "num_paths"/"l".
SweepVariable parse_sweep_variable(std::string_view name);
std::string_view sweep_variable_name(SweepVariable variable);
/// Results-table header: "snr", "M", "N", "L".
std::string_view sweep_column_header(SweepVariable variable);

/// Copy of `base` with one variable replaced. Sweeping M rescales the
/// wavelength so the Fraunhofer distance of `base` is preserved.
SystemConfig apply_sweep_value(const SystemConfig& base, SweepVariable variable, double value);

struct SweepResult {
  SweepVariable variable = SweepVariable::kSnrDb;
  std::vector<double> values;
  std::vector<std::array<double, kNumEstimators>> nmse;
  std::vector<std::array<int, kNumEstimators>> valid_trials;
  int num_trials = 0;
  SystemConfig config;
  std::vector<std::vector<TrialOutcome>> outcomes;  // [point][trial]
};

/// Runs config.num_trials trials per sweep point. threads = 0 uses the
/// hardware concurrency; the result does not depend on the thread count.
SweepResult run_sweep(const SystemConfig& config, SweepVariable variable,
                      std::span<const double> values, unsigned threads = 1);

}  // namespace cpsbl

#endif  // CPSBL_EXPERIMENT_HPP
