#include "cpsbl/config.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace cpsbl {
namespace {

constexpr std::array<std::string_view, 19> kKeys = {
    "m",          "n",          "k",          "l",          "snr_db",
    "wavelength", "num_angle_bins", "coherence_beta", "min_distance_frac", "esbl_nu",
    "esbl_shape", "esbl_scale", "esbl_iters", "esbl_tol",   "cpsbl_step",
    "cpsbl_iters", "trials",    "seed",       "on_grid"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(std::string(key), "cannot parse '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw ConfigError(std::string(key), "expected a boolean, got '" + std::string(text) + "'");
}

}  // namespace

std::span<const std::string_view> config_keys() { return kKeys; }

void apply_config_value(SystemConfig& c, std::string_view key, std::string_view raw) {
  const std::string_view v = trim(raw);
  const auto integer = [&] { return parse_number<int>(key, v); };
  const auto real = [&] { return parse_number<double>(key, v); };

  if (key == "m") c.num_antennas = integer();
  else if (key == "n") c.pilot_length = integer();
  else if (key == "k") c.num_users = integer();
  else if (key == "l") c.num_paths = integer();
  else if (key == "snr_db") c.snr_db = real();
  else if (key == "wavelength") c.wavelength = real();
  else if (key == "num_angle_bins") c.num_angle_bins = integer();
  else if (key == "coherence_beta") c.coherence_beta = real();
  else if (key == "min_distance_frac") c.min_distance_frac = real();
  else if (key == "esbl_nu") c.esbl_hyper.nu = real();
  else if (key == "esbl_shape") c.esbl_hyper.shape = real();
  else if (key == "esbl_scale") c.esbl_hyper.scale = real();
  else if (key == "esbl_iters") c.esbl_iters = integer();
  else if (key == "esbl_tol") c.esbl_tol = real();
  else if (key == "cpsbl_step") c.adam.step_size = real();
  else if (key == "cpsbl_iters") c.cpsbl_iters = integer();
  else if (key == "trials") c.num_trials = integer();
  else if (key == "seed") c.master_seed = parse_number<std::uint64_t>(key, v);
  else if (key == "on_grid") c.on_grid = parse_bool(key, v);
  else throw ConfigError(std::string(key), "unknown configuration key");
}

std::pair<std::string, std::string> split_override(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(std::string(trim(text)), "override must have the form key=value");
  }
  return {std::string(trim(text.substr(0, eq))), std::string(trim(text.substr(eq + 1)))};
}

SystemConfig parse_config_text(std::string_view text, std::span<const std::string> overrides,
                               const SystemConfig& base) {
  SystemConfig config = base;
  std::istringstream lines{std::string(text)};
  std::string line;
  while (std::getline(lines, line)) {
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) {
      body = body.substr(0, hash);
    }
    body = trim(body);
    if (body.empty()) continue;
    const auto [key, value] = split_override(body);
    apply_config_value(config, key, value);
  }
  for (const auto& o : overrides) {
    const auto [key, value] = split_override(o);
    apply_config_value(config, key, value);
  }
  config.validate();
  return config;
}

SystemConfig parse_config(const std::filesystem::path& path,
                          std::span<const std::string> overrides, const SystemConfig& base) {
  if (path.empty()) return parse_config_text({}, overrides, base);
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot read config file '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), overrides, base);
}

}  // namespace cpsbl
