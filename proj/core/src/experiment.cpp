#include "cpsbl/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace cpsbl {
namespace {

constexpr double kFraunhoferDistance = 81.92;

void require(bool ok, const char* key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

bool is_integral(double v) { return std::isfinite(v) && v == std::floor(v); }

// Runs fn(i) for i in [0, count) on up to `threads` workers.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

template <typename Fn>
EstimatorOutcome timed_estimate(Fn&& estimate, const TrialContext& ctx, const CMatrix& truth) {
  EstimatorOutcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    const CVector u_hat = estimate();
    const CMatrix h_hat = reconstruct_channels(ctx.dictionary, u_hat, truth.cols());
    out.squared_error = (h_hat - truth).squaredNorm();
    out.valid = std::isfinite(out.squared_error);
    if (!out.valid) out.failure = "non-finite estimate";
  } catch (const std::exception& e) {
    out.valid = false;
    out.failure = e.what();
  }
  out.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace

double SystemConfig::transmit_power() const { return std::pow(10.0, snr_db / 10.0); }

double SystemConfig::fraunhofer_distance() const {
  return cpsbl::fraunhofer_distance(geometry());
}

ArrayGeometry SystemConfig::geometry() const { return {num_antennas, wavelength}; }

PolarGridConfig SystemConfig::grid_config() const {
  return {angle_bins(), coherence_beta, min_distance_frac * fraunhofer_distance()};
}

void SystemConfig::validate() const {
  require(num_antennas >= 1, "m", "must be >= 1");
  require(pilot_length >= 1, "n", "must be >= 1");
  require(num_users >= 1, "k", "must be >= 1");
  require(num_users <= pilot_length, "k", "must not exceed the pilot length n");
  require(num_paths >= 1, "l", "must be >= 1");
  require(std::isfinite(snr_db), "snr_db", "must be finite");
  require(wavelength > 0.0 && std::isfinite(wavelength), "wavelength", "must be positive");
  require(!num_angle_bins || *num_angle_bins >= 1, "num_angle_bins", "must be >= 1");
  require(coherence_beta > 0.0 && std::isfinite(coherence_beta), "coherence_beta",
          "must be positive");
  require(min_distance_frac > 0.0 && std::isfinite(min_distance_frac), "min_distance_frac",
          "must be positive");
  require(esbl_hyper.nu > 0.0, "esbl_nu", "must be positive");
  require(esbl_hyper.shape > 0.0, "esbl_shape", "must be positive");
  require(esbl_hyper.scale > 0.0, "esbl_scale", "must be positive");
  require(esbl_iters >= 1, "esbl_iters", "must be >= 1");
  require(esbl_tol >= 0.0, "esbl_tol", "must be nonnegative");
  require(adam.step_size > 0.0 && std::isfinite(adam.step_size), "cpsbl_step",
          "must be positive");
  require(cpsbl_iters >= 1, "cpsbl_iters", "must be >= 1");
  require(num_trials >= 1, "trials", "must be >= 1");
  require(static_cast<long long>(num_antennas) * pilot_length >= 2, "n",
          "need at least two measurements (m * n >= 2)");
}

SystemConfig full_preset() { return SystemConfig{}; }

SystemConfig desk_preset() {
  SystemConfig c;
  c.num_antennas = 32;
  c.pilot_length = 8;
  c.num_users = 2;
  c.num_paths = 3;
  // num_angle_bins left unset: follows M (32 here) and tracks M sweeps.
  c.wavelength = 2.0 * kFraunhoferDistance / (32.0 * 32.0);
  return c;
}

std::string_view estimator_name(Estimator estimator) {
  switch (estimator) {
    case Estimator::kEsbl:
      return "E_SBL";
    case Estimator::kCpsbl:
      return "CP_SBL";
  }
  return "unknown";
}

TrialContext make_trial_context(const SystemConfig& config) {
  config.validate();
  const ArrayGeometry geometry = config.geometry();
  return {config, geometry, build_polar_dictionary(geometry, config.grid_config()),
          dft_pilot_matrix(config.pilot_length, config.num_users)};
}

TrialData simulate_trial_data(const TrialContext& ctx, std::uint64_t trial_index) {
  const SystemConfig& cfg = ctx.config;
  RandomStream channel_rng = make_stream(cfg.master_seed, trial_index, StreamTag::kChannel);
  RandomStream noise_rng = make_stream(cfg.master_seed, trial_index, StreamTag::kNoise);

  TrialData data;
  data.channels.channels.resize(cfg.num_antennas, cfg.num_users);
  for (int k = 0; k < cfg.num_users; ++k) {
    UserChannel user = cfg.on_grid
                           ? generate_on_grid_channel(ctx.dictionary, cfg.num_paths, channel_rng)
                           : generate_multipath_channel(ctx.geometry, cfg.num_paths, channel_rng);
    data.channels.channels.col(k) = user.h;
    data.channels.paths.push_back(std::move(user.paths));
  }

  const CMatrix received = simulate_observation(data.channels.channels, ctx.pilots,
                                                cfg.transmit_power(), cfg.noise_variance(),
                                                noise_rng);
  data.model = assemble_linear_model(received, ctx.pilots, ctx.dictionary, cfg.transmit_power(),
                                     cfg.noise_variance());
  return data;
}

CMatrix reconstruct_channels(const PolarDictionary& dictionary, const CVector& estimate,
                             Index num_users) {
  const Index q = dictionary.num_columns();
  if (estimate.size() != q * num_users) {
    throw std::invalid_argument("estimate length must equal Q * K");
  }
  return dictionary.matrix * estimate.reshaped(q, num_users);
}

TrialOutcome run_trial(const TrialContext& ctx, std::uint64_t trial_index) {
  const SystemConfig& cfg = ctx.config;
  const TrialData data = simulate_trial_data(ctx, trial_index);
  const CMatrix& truth = data.channels.channels;

  TrialOutcome outcome;
  outcome.channel_energy = truth.squaredNorm();

  outcome[Estimator::kEsbl] = timed_estimate(
      [&] {
        EsblOptions opts;
        opts.hyper = cfg.esbl_hyper;
        opts.max_iters = cfg.esbl_iters;
        opts.tol = cfg.esbl_tol;
        return run_esbl(data.model, opts).estimate;
      },
      ctx, truth);

  outcome[Estimator::kCpsbl] = timed_estimate(
      [&] {
        CpsblOptions opts;
        opts.adam = cfg.adam;
        opts.num_iters = cfg.cpsbl_iters;
        RandomStream rng = make_stream(cfg.master_seed, trial_index, StreamTag::kCrossPredictive);
        return run_cpsbl(data.model, opts, rng).estimate;
      },
      ctx, truth);

  return outcome;
}

TrialOutcome run_trial(const SystemConfig& config, std::uint64_t trial_index) {
  return run_trial(make_trial_context(config), trial_index);
}

double nmse(std::span<const TrialOutcome> outcomes, Estimator estimator) {
  if (outcomes.empty()) {
    throw std::invalid_argument("nmse needs at least one trial");
  }
  double error = 0.0;
  double energy = 0.0;
  bool any = false;
  for (const auto& t : outcomes) {
    const auto& e = t[estimator];
    if (!e.valid) continue;
    error += e.squared_error;
    energy += t.channel_energy;
    any = true;
  }
  if (!any) return std::numeric_limits<double>::quiet_NaN();
  if (!(energy > 0.0)) {
    throw std::invalid_argument("total channel energy is zero");
  }
  return error / energy;
}

SweepVariable parse_sweep_variable(std::string_view name) {
  if (name == "snr_db" || name == "snr") return SweepVariable::kSnrDb;
  if (name == "num_antennas" || name == "m" || name == "M") return SweepVariable::kNumAntennas;
  if (name == "pilot_length" || name == "n" || name == "N") return SweepVariable::kPilotLength;
  if (name == "num_paths" || name == "l" || name == "L") return SweepVariable::kNumPaths;
  throw std::invalid_argument("unknown sweep variable '" + std::string(name) + "'");
}

std::string_view sweep_variable_name(SweepVariable variable) {
  switch (variable) {
    case SweepVariable::kSnrDb:
      return "snr_db";
    case SweepVariable::kNumAntennas:
      return "num_antennas";
    case SweepVariable::kPilotLength:
      return "pilot_length";
    case SweepVariable::kNumPaths:
      return "num_paths";
  }
  return "unknown";
}

std::string_view sweep_column_header(SweepVariable variable) {
  switch (variable) {
    case SweepVariable::kSnrDb:
      return "snr";
    case SweepVariable::kNumAntennas:
      return "M";
    case SweepVariable::kPilotLength:
      return "N";
    case SweepVariable::kNumPaths:
      return "L";
  }
  return "unknown";
}

SystemConfig apply_sweep_value(const SystemConfig& base, SweepVariable variable, double value) {
  SystemConfig c = base;
  const auto as_count = [&](const char* what) {
    if (!is_integral(value) || value < 1.0 || value > 1e6) {
      throw std::invalid_argument(std::string(what) + " sweep values must be positive integers");
    }
    return static_cast<int>(value);
  };
  switch (variable) {
    case SweepVariable::kSnrDb:
      if (!std::isfinite(value)) throw std::invalid_argument("SNR sweep values must be finite");
      c.snr_db = value;
      break;
    case SweepVariable::kNumAntennas: {
      const double d_f = base.fraunhofer_distance();
      c.num_antennas = as_count("antenna");
      c.wavelength = 2.0 * d_f / (static_cast<double>(c.num_antennas) * c.num_antennas);
      break;
    }
    case SweepVariable::kPilotLength:
      c.pilot_length = as_count("pilot length");
      break;
    case SweepVariable::kNumPaths:
      c.num_paths = as_count("path count");
      break;
  }
  c.validate();
  return c;
}

SweepResult run_sweep(const SystemConfig& config, SweepVariable variable,
                      std::span<const double> values, unsigned threads) {
  config.validate();
  if (values.empty()) {
    throw std::invalid_argument("sweep needs at least one value");
  }

  SweepResult result;
  result.variable = variable;
  result.values.assign(values.begin(), values.end());
  result.num_trials = config.num_trials;
  result.config = config;

  std::vector<TrialContext> contexts;
  contexts.reserve(values.size());
  for (double v : values) contexts.push_back(make_trial_context(apply_sweep_value(config, variable, v)));

  const auto trials = static_cast<std::size_t>(config.num_trials);
  result.outcomes.assign(values.size(), std::vector<TrialOutcome>(trials));
  parallel_for(values.size() * trials, threads, [&](std::size_t job) {
    const std::size_t point = job / trials;
    const std::size_t trial = job % trials;
    result.outcomes[point][trial] = run_trial(contexts[point], trial);
  });

  for (const auto& point : result.outcomes) {
    std::array<double, kNumEstimators> row{};
    std::array<int, kNumEstimators> valid{};
    for (Estimator e : kAllEstimators) {
      const auto i = static_cast<std::size_t>(e);
      row[i] = nmse(point, e);
      valid[i] = static_cast<int>(
          std::count_if(point.begin(), point.end(), [e](const auto& t) { return t[e].valid; }));
    }
    result.nmse.push_back(row);
    result.valid_trials.push_back(valid);
  }
  return result;
}

}  // namespace cpsbl
