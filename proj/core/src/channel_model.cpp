#include "cpsbl/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cpsbl {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleSlack = 1e-12;

void check_angle(double angle) {
  if (!std::isfinite(angle) || std::abs(angle) > kPi / 2.0 + kAngleSlack) {
    throw std::invalid_argument("angle must lie in [-pi/2, pi/2], got " + std::to_string(angle));
  }
}

}  // namespace

ArrayGeometry::ArrayGeometry(int num_antennas, double wavelength)
    : num_antennas_(num_antennas), wavelength_(wavelength) {
  if (num_antennas < 1) {
    throw std::invalid_argument("num_antennas must be >= 1");
  }
  if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
    throw std::invalid_argument("wavelength must be positive and finite");
  }
}

double fraunhofer_distance(const ArrayGeometry& geometry) {
  const double m = geometry.num_antennas();
  return geometry.wavelength() / 2.0 * m * m;
}

CVector steering_vector(const ArrayGeometry& geometry, double angle, double distance) {
  check_angle(angle);
  if (!(distance > 0.0)) {
    throw std::invalid_argument("distance must be positive");
  }
  if (std::isinf(distance)) {
    return far_field_steering_vector(geometry, angle);
  }
  const int m_count = geometry.num_antennas();
  const double k = 2.0 * kPi / geometry.wavelength();
  const double sin_angle = std::sin(angle);
  CVector a(m_count);
  for (int m = 0; m < m_count; ++m) {
    const double d = geometry.element_offset_index(m) * geometry.element_spacing();
    // r_m - r, written to avoid cancellation at large r.
    const double numer = d * d - 2.0 * distance * d * sin_angle;
    const double r_m = std::sqrt(distance * distance + numer);
    const double delta = numer / (r_m + distance);
    a(m) = std::polar(1.0, -k * delta);
  }
  return a;
}

CVector far_field_steering_vector(const ArrayGeometry& geometry, double angle) {
  check_angle(angle);
  const int m_count = geometry.num_antennas();
  const double sin_angle = std::sin(angle);
  CVector a(m_count);
  for (int m = 0; m < m_count; ++m) {
    a(m) = std::polar(1.0, kPi * geometry.element_offset_index(m) * sin_angle);
  }
  return a;
}

CVector steering_vector(const ArrayGeometry& geometry, const GridPoint& point) {
  return point.far_field() ? far_field_steering_vector(geometry, point.angle)
                           : steering_vector(geometry, point.angle, point.distance);
}

std::vector<double> ring_distances(const ArrayGeometry& geometry, const PolarGridConfig& config,
                                   double angle) {
  const double m = geometry.num_antennas();
  const double lambda = geometry.wavelength();
  const double half = lambda / 2.0;
  const double cos_angle = std::cos(angle);
  const double base = m * m * half * half * cos_angle * cos_angle /
                      (2.0 * config.coherence_beta * config.coherence_beta * lambda);
  std::vector<double> rings;
  for (int s = 1;; ++s) {
    const double r = base / s;
    if (!(r >= config.min_distance)) break;
    rings.push_back(r);
  }
  return rings;
}

PolarDictionary build_polar_dictionary(const ArrayGeometry& geometry,
                                       const PolarGridConfig& config) {
  if (config.num_angle_bins < 1) {
    throw std::invalid_argument("num_angle_bins must be >= 1");
  }
  if (!(config.coherence_beta > 0.0) || !(config.min_distance > 0.0)) {
    throw std::invalid_argument("coherence_beta and min_distance must be positive");
  }

  PolarDictionary dict;
  const int bins = config.num_angle_bins;
  for (int i = 0; i < bins; ++i) {
    const double sin_angle = (2.0 * i - bins + 1.0) / bins;
    const double angle = std::asin(sin_angle);
    const auto rings = ring_distances(geometry, config, angle);
    for (double r : rings) dict.grid.push_back({angle, r});
    dict.grid.push_back({angle, std::numeric_limits<double>::infinity()});
    dict.rings_per_angle.push_back(static_cast<int>(rings.size()));
  }
  if (dict.grid.empty()) {
    throw std::invalid_argument("polar grid configuration yields no columns");
  }

  dict.matrix.resize(geometry.num_antennas(), static_cast<Index>(dict.grid.size()));
  for (std::size_t q = 0; q < dict.grid.size(); ++q) {
    dict.matrix.col(static_cast<Index>(q)) = steering_vector(geometry, dict.grid[q]);
  }
  return dict;
}

CVector multipath_channel(const ArrayGeometry& geometry, const std::vector<PathParams>& paths) {
  if (paths.empty()) {
    throw std::invalid_argument("at least one path is required");
  }
  const double k = 2.0 * kPi / geometry.wavelength();
  CVector h = CVector::Zero(geometry.num_antennas());
  for (const auto& p : paths) {
    if (std::isinf(p.distance)) {
      h += p.gain * far_field_steering_vector(geometry, p.angle);
    } else {
      // Reduce the carrier phase modulo one wavelength before scaling.
      const double phase = -k * std::fmod(p.distance, geometry.wavelength());
      h += p.gain * std::polar(1.0, phase) * steering_vector(geometry, p.angle, p.distance);
    }
  }
  return h / std::sqrt(static_cast<double>(paths.size()));
}

UserChannel generate_multipath_channel(const ArrayGeometry& geometry, int num_paths,
                                       RandomStream& rng) {
  if (num_paths < 1) {
    throw std::invalid_argument("num_paths must be >= 1");
  }
  const double d_f = fraunhofer_distance(geometry);
  UserChannel out;
  out.paths.reserve(static_cast<std::size_t>(num_paths));
  for (int l = 0; l < num_paths; ++l) {
    PathParams p;
    p.gain = complex_normal(rng);
    p.angle = uniform(rng, -kPi / 4.0, kPi / 4.0);
    p.distance = uniform(rng, d_f / 8.0, d_f / 2.0);
    out.paths.push_back(p);
  }
  out.h = multipath_channel(geometry, out.paths);
  return out;
}

UserChannel generate_on_grid_channel(const PolarDictionary& dictionary, int num_paths,
                                     RandomStream& rng) {
  const Index q = dictionary.num_columns();
  if (num_paths < 1 || num_paths > q) {
    throw std::invalid_argument("num_paths must be in [1, Q]");
  }
  std::vector<Index> columns(static_cast<std::size_t>(q));
  std::iota(columns.begin(), columns.end(), Index{0});
  // Partial Fisher-Yates for distinct columns.
  for (int l = 0; l < num_paths; ++l) {
    std::uniform_int_distribution<Index> pick(l, q - 1);
    std::swap(columns[static_cast<std::size_t>(l)], columns[static_cast<std::size_t>(pick(rng))]);
  }

  UserChannel out;
  out.h = CVector::Zero(dictionary.matrix.rows());
  for (int l = 0; l < num_paths; ++l) {
    const Index j = columns[static_cast<std::size_t>(l)];
    const Complex g = complex_normal(rng);
    out.h += g * dictionary.matrix.col(j);
    const auto& label = dictionary.grid[static_cast<std::size_t>(j)];
    out.paths.push_back({g, label.angle, label.distance});
  }
  out.h /= std::sqrt(static_cast<double>(num_paths));
  return out;
}

}  // namespace cpsbl
