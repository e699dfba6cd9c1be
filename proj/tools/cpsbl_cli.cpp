// Command-line runner: sweeps, single trials, gradient checks and
// dictionary inspection.
//
// Exit status: 0 success, 1 unexpected failure, 2 configuration or usage
// error, 3 I/O error, 4 numerical check failed. Every failure prints one
// line starting with "cpsbl: error[<kind>]:".

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cpsbl/cpsbl.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kUnexpected = 1,
  kConfigError = 2,
  kIoError = 3,
  kCheckFailed = 4,
};

constexpr double kGradientTolerance = 1e-5;

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string preset = "full";
  std::optional<std::uint64_t> seed;
};

struct SweepOptions {
  std::string variable = "snr_db";
  std::vector<double> values;
  std::string output;
  unsigned threads = 1;
};

int fail(std::string_view kind, std::string_view message, int code) {
  std::cerr << "cpsbl: error[" << kind << "]: " << message << '\n';
  return code;
}

cpsbl::SystemConfig resolve_config(const CommonOptions& opts) {
  cpsbl::SystemConfig base;
  if (opts.preset == "desk") {
    base = cpsbl::desk_preset();
  } else if (opts.preset == "full") {
    base = cpsbl::full_preset();
  } else {
    throw cpsbl::ConfigError("preset", "expected 'full' or 'desk'");
  }
  auto config = cpsbl::parse_config(opts.config_path, opts.overrides, base);
  if (opts.seed) config.master_seed = *opts.seed;
  return config;
}

int run_sweep_command(const CommonOptions& common, const SweepOptions& sweep) {
  const auto config = resolve_config(common);
  cpsbl::SweepVariable variable{};
  try {
    variable = cpsbl::parse_sweep_variable(sweep.variable);
  } catch (const std::invalid_argument& e) {
    return fail("config", e.what(), kConfigError);
  }
  std::vector<double> values = sweep.values;
  if (values.empty()) values = {config.snr_db};
  cpsbl::SweepResult result;
  try {
    result = cpsbl::run_sweep(config, variable, values, sweep.threads);
  } catch (const std::invalid_argument& e) {
    return fail("config", e.what(), kConfigError);
  }
  cpsbl::write_results_table(result, sweep.output);
  cpsbl::write_sweep_snapshot(result, cpsbl::snapshot_path_for(sweep.output));

  std::cout << cpsbl::sweep_column_header(variable);
  for (auto e : cpsbl::kAllEstimators) std::cout << '\t' << cpsbl::estimator_name(e);
  std::cout << '\n';
  for (std::size_t i = 0; i < result.values.size(); ++i) {
    std::cout << cpsbl::format_decimal(result.values[i]);
    for (auto e : cpsbl::kAllEstimators) {
      std::cout << '\t' << cpsbl::format_decimal(result.nmse[i][static_cast<std::size_t>(e)]);
    }
    std::cout << '\n';
  }
  std::cout << "wrote " << sweep.output << '\n';
  return kOk;
}

int run_trial_command(const CommonOptions& common, std::uint64_t index) {
  const auto config = resolve_config(common);
  const auto outcome = cpsbl::run_trial(config, index);
  std::cout << "trial " << index << "  channel_energy " << cpsbl::format_decimal(outcome.channel_energy)
            << '\n';
  for (auto e : cpsbl::kAllEstimators) {
    const auto& r = outcome[e];
    std::cout << cpsbl::estimator_name(e) << '\t';
    if (r.valid) {
      std::cout << "nmse " << cpsbl::format_decimal(r.squared_error / outcome.channel_energy);
    } else {
      std::cout << "invalid (" << r.failure << ")";
    }
    std::cout << "\ttime_s " << std::fixed << std::setprecision(4) << r.wall_time
              << std::defaultfloat << '\n';
  }
  return kOk;
}

int run_gradcheck_command(const CommonOptions& common, int instances, double step) {
  const auto config = resolve_config(common);
  const auto report = cpsbl::random_gradient_check(instances, config.master_seed, step);
  std::cout << "random instances: " << report.instances
            << "  max relative error: " << report.max_relative_error << '\n';

  const auto ctx = cpsbl::make_trial_context(config);
  const auto data = cpsbl::simulate_trial_data(ctx, 0);
  auto rng = cpsbl::make_stream(config.master_seed, 0, cpsbl::StreamTag::kGradCheck);
  const double model_error = cpsbl::model_gradient_check(data.model, rng, step);
  std::cout << "config model (D=" << data.model.num_unknowns()
            << ")  max relative error: " << model_error << '\n';

  const double worst = std::max(report.max_relative_error, model_error);
  std::cout << "max relative error: " << worst << '\n';
  if (!(worst < kGradientTolerance)) {
    std::ostringstream msg;
    msg << "gradient check failed: " << worst << " >= " << kGradientTolerance;
    return fail("check", msg.str(), kCheckFailed);
  }
  return kOk;
}

int run_dict_info_command(const CommonOptions& common) {
  const auto config = resolve_config(common);
  const auto geometry = config.geometry();
  const auto grid = config.grid_config();
  const auto dict = cpsbl::build_polar_dictionary(geometry, grid);
  std::cout << "M " << config.num_antennas << '\n'
            << "wavelength " << config.wavelength << '\n'
            << "fraunhofer_distance " << cpsbl::fraunhofer_distance(geometry) << '\n'
            << "min_distance " << grid.min_distance << '\n'
            << "num_angle_bins " << grid.num_angle_bins << '\n'
            << "Q " << dict.num_columns() << '\n'
            << "D " << dict.num_columns() * config.num_users << '\n'
            << "rings_per_angle";
  for (int r : dict.rings_per_angle) std::cout << ' ' << r;
  std::cout << '\n';
  return kOk;
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("-c,--config", opts.config_path, "Flat key = value config file");
  cmd->add_option("-s,--set", opts.overrides, "Override a config key (key=value), repeatable");
  cmd->add_option("--preset", opts.preset, "Base values: full or desk")
      ->check(CLI::IsMember({"full", "desk"}));
  cmd->add_option("--seed", opts.seed, "Master seed override");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-predictive sparse Bayesian learning: channel estimation experiments"};
  app.require_subcommand(1);

  CommonOptions common;
  SweepOptions sweep;
  std::uint64_t trial_index = 0;
  int gradcheck_instances = 20;
  double gradcheck_step = 1e-5;

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep and write an NMSE table");
  add_common(sweep_cmd, common);
  sweep_cmd->add_option("--var", sweep.variable, "snr_db | num_antennas | pilot_length | num_paths");
  sweep_cmd->add_option("--values", sweep.values, "Sweep values (comma separated)")
      ->delimiter(',');
  sweep_cmd->add_option("-o,--out", sweep.output, "Results table path")->required();
  sweep_cmd->add_option("-j,--threads", sweep.threads, "Worker threads (0 = all cores)");

  auto* trial_cmd = app.add_subcommand("trial", "Run one Monte Carlo trial");
  add_common(trial_cmd, common);
  trial_cmd->add_option("--index", trial_index, "Trial index");

  auto* grad_cmd = app.add_subcommand("gradcheck", "Compare the analytic gradient with finite differences");
  add_common(grad_cmd, common);
  grad_cmd->add_option("--instances", gradcheck_instances, "Random instances")
      ->check(CLI::PositiveNumber);
  grad_cmd->add_option("--step", gradcheck_step, "Central-difference step")
      ->check(CLI::PositiveNumber);

  auto* dict_cmd = app.add_subcommand("dict-info", "Describe the polar dictionary");
  add_common(dict_cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kConfigError);
  }

  try {
    if (*sweep_cmd) return run_sweep_command(common, sweep);
    if (*trial_cmd) return run_trial_command(common, trial_index);
    if (*grad_cmd) return run_gradcheck_command(common, gradcheck_instances, gradcheck_step);
    if (*dict_cmd) return run_dict_info_command(common);
  } catch (const cpsbl::ConfigError& e) {
    return fail("config", e.what(), kConfigError);
  } catch (const cpsbl::IoError& e) {
    return fail("io", e.what(), kIoError);
  } catch (const cpsbl::NumericalError& e) {
    return fail("numerical", e.what(), kCheckFailed);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), kUnexpected);
  }
  return kUnexpected;
}
