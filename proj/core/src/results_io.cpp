#include "cpsbl/results_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace cpsbl {
namespace {

nlohmann::ordered_json config_json(const SystemConfig& c) {
  nlohmann::ordered_json j;
  j["m"] = c.num_antennas;
  j["n"] = c.pilot_length;
  j["k"] = c.num_users;
  j["l"] = c.num_paths;
  j["snr_db"] = c.snr_db;
  j["wavelength"] = c.wavelength;
  j["num_angle_bins"] = c.angle_bins();
  j["coherence_beta"] = c.coherence_beta;
  j["min_distance_frac"] = c.min_distance_frac;
  j["esbl_nu"] = c.esbl_hyper.nu;
  j["esbl_shape"] = c.esbl_hyper.shape;
  j["esbl_scale"] = c.esbl_hyper.scale;
  j["esbl_iters"] = c.esbl_iters;
  j["esbl_tol"] = c.esbl_tol;
  j["cpsbl_step"] = c.adam.step_size;
  j["cpsbl_iters"] = c.cpsbl_iters;
  j["adam_beta1"] = c.adam.beta1;
  j["adam_beta2"] = c.adam.beta2;
  j["adam_epsilon"] = c.adam.epsilon;
  j["trials"] = c.num_trials;
  j["seed"] = c.master_seed;
  j["on_grid"] = c.on_grid;
  j["noise_variance"] = c.noise_variance();
  j["fraunhofer_distance"] = c.fraunhofer_distance();
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out << text;
  out.flush();
  if (!out) {
    throw IoError("failed writing '" + path.string() + "'");
  }
}

}  // namespace

std::string format_decimal(double value, int significant) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == std::floor(value) && std::abs(value) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", value);
    return buf;
  }
  const int magnitude = static_cast<int>(std::floor(std::log10(std::abs(value))));
  const int decimals = std::max(0, significant - 1 - magnitude);
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

void write_results_table(const SweepResult& result, const std::filesystem::path& path) {
  std::ostringstream os;
  os << sweep_column_header(result.variable);
  for (Estimator e : kAllEstimators) os << '\t' << estimator_name(e);
  os << '\n';
  for (std::size_t i = 0; i < result.values.size(); ++i) {
    os << format_decimal(result.values[i]);
    for (Estimator e : kAllEstimators) {
      os << '\t' << format_decimal(result.nmse[i][static_cast<std::size_t>(e)]);
    }
    os << '\n';
  }
  write_text(path, os.str());
}

ResultsTable read_results_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  ResultsTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string field;
    if (first) {
      while (std::getline(fields, field, '\t')) table.header.push_back(field);
      first = false;
      continue;
    }
    std::vector<double> row;
    while (std::getline(fields, field, '\t')) {
      try {
        row.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw IoError("unparsable value '" + field + "' in '" + path.string() + "'");
      }
    }
    if (row.size() != table.header.size()) {
      throw IoError("ragged row in '" + path.string() + "'");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string config_to_json(const SystemConfig& config, int indent) {
  return config_json(config).dump(indent);
}

void write_sweep_snapshot(const SweepResult& result, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["config"] = config_json(result.config);
  j["sweep_variable"] = sweep_variable_name(result.variable);
  j["sweep_values"] = result.values;
  j["trials_per_point"] = result.num_trials;
  for (Estimator e : kAllEstimators) {
    auto& counts = j["valid_trials"][std::string(estimator_name(e))];
    counts = nlohmann::ordered_json::array();
    for (const auto& v : result.valid_trials) counts.push_back(v[static_cast<std::size_t>(e)]);
  }
  write_text(path, j.dump(2) + "\n");
}

std::filesystem::path snapshot_path_for(const std::filesystem::path& table_path) {
  return std::filesystem::path(table_path.string() + ".config.json");
}

}  // namespace cpsbl
