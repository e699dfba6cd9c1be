#ifndef CPSBL_RESULTS_IO_HPP
#define CPSBL_RESULTS_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "cpsbl/experiment.hpp"

namespace cpsbl {

/// Plain decimal notation (never scientific) with at least `significant`
/// significant digits. Integral values print without a fraction.
std::string format_decimal(double value, int significant = 8);

/// Tab-separated table: sweep column ("snr", "M", "N" or "L"), then one
/// column per estimator ("E_SBL", "CP_SBL"), one row per sweep point.
/// Points where an estimator had no valid trial print "nan".
void write_results_table(const SweepResult& result, const std::filesystem::path& path);

struct ResultsTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

ResultsTable read_results_table(const std::filesystem::path& path);

/// JSON object with every resolved SystemConfig field plus the derived
/// Fraunhofer distance.
std::string config_to_json(const SystemConfig& config, int indent = 2);

/// Config snapshot plus sweep axis, trial counts and per-point valid counts.
void write_sweep_snapshot(const SweepResult& result, const std::filesystem::path& path);

/// "<table>.config.json" next to a results table.
std::filesystem::path snapshot_path_for(const std::filesystem::path& table_path);

}  // namespace cpsbl

#endif  // CPSBL_RESULTS_IO_HPP
