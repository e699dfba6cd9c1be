#ifndef CPSBL_CONFIG_HPP
#define CPSBL_CONFIG_HPP

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cpsbl/experiment.hpp"

namespace cpsbl {

/// Flat `key = value` documents; '#' starts a comment. Recognized keys:
///   m n k l snr_db wavelength num_angle_bins coherence_beta min_distance_frac
///   esbl_nu esbl_shape esbl_scale esbl_iters esbl_tol cpsbl_step cpsbl_iters
///   trials seed on_grid
std::span<const std::string_view> config_keys();

/// Sets one key. Throws ConfigError for unknown keys or unparsable values.
void apply_config_value(SystemConfig& config, std::string_view key, std::string_view value);

/// Parses "key=value".
std::pair<std::string, std::string> split_override(std::string_view text);

/// Applies the document on top of `base`, then `overrides`, then validates.
SystemConfig parse_config_text(std::string_view text, std::span<const std::string> overrides = {},
                               const SystemConfig& base = full_preset());

/// Same as parse_config_text for a file; an empty path means "defaults only".
/// Throws IoError if the file cannot be read.
SystemConfig parse_config(const std::filesystem::path& path,
                          std::span<const std::string> overrides = {},
                          const SystemConfig& base = full_preset());

}  // namespace cpsbl

#endif  // CPSBL_CONFIG_HPP
