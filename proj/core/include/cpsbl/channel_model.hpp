#ifndef CPSBL_CHANNEL_MODEL_HPP
#define CPSBL_CHANNEL_MODEL_HPP

#include <limits>
#include <vector>

#include "cpsbl/random.hpp"
#include "cpsbl/types.hpp"

namespace cpsbl {

/// Half-wavelength uniform linear array centered at the origin.
///
/// Element m (m = 0..M-1) sits at offset delta_m * lambda/2 along the array
/// axis with delta_m = (2m - M + 1)/2.
class ArrayGeometry {
 public:
  ArrayGeometry(int num_antennas, double wavelength);

  int num_antennas() const noexcept { return num_antennas_; }
  double wavelength() const noexcept { return wavelength_; }
  double element_spacing() const noexcept { return wavelength_ / 2.0; }

  /// Symmetric element index delta_m.
  double element_offset_index(int m) const noexcept {
    return (2.0 * m - num_antennas_ + 1.0) / 2.0;
  }

 private:
  int num_antennas_;
  double wavelength_;
};

struct PathParams {
  Complex gain;
  double angle = 0.0;     // radians, [-pi/2, pi/2]
  double distance = 0.0;  // meters; +inf for a plane-wave (far-field) path
};

struct UserChannel {
  CVector h;
  std::vector<PathParams> paths;
};

struct ChannelRealization {
  CMatrix channels;  // M x K
  std::vector<std::vector<PathParams>> paths;
};

struct PolarGridConfig {
  int num_angle_bins = 1;
  double coherence_beta = 1.2;
  double min_distance = 1.0;  // meters
};

/// Column label of the polar dictionary.
struct GridPoint {
  double angle = 0.0;
  double distance = std::numeric_limits<double>::infinity();

  bool far_field() const noexcept { return distance == std::numeric_limits<double>::infinity(); }
};

struct PolarDictionary {
  CMatrix matrix;               // M x Q
  std::vector<GridPoint> grid;  // one label per column
  std::vector<int> rings_per_angle;

  Index num_columns() const noexcept { return matrix.cols(); }
};

/// (lambda/2) * M^2.
double fraunhofer_distance(const ArrayGeometry& geometry);

/// Near-field response exp(-i 2pi/lambda (r_m - r)) with the exact spherical
/// element distance r_m. Squared norm is M.
CVector steering_vector(const ArrayGeometry& geometry, double angle, double distance);

/// Plane-wave limit of steering_vector as distance -> infinity:
/// exp(+i pi delta_m sin(angle)).
CVector far_field_steering_vector(const ArrayGeometry& geometry, double angle);

/// Response for a grid label; dispatches on far_field().
CVector steering_vector(const ArrayGeometry& geometry, const GridPoint& point);

/// Distance rings r_s = M^2 (lambda/2)^2 cos^2(angle) / (2 beta^2 s lambda),
/// s = 1, 2, ..., kept while r_s >= min_distance.
std::vector<double> ring_distances(const ArrayGeometry& geometry, const PolarGridConfig& config,
                                   double angle);

/// Polar-domain dictionary: for each angle on a grid uniform in sin(angle),
/// all distance rings followed by one far-field column.
PolarDictionary build_polar_dictionary(const ArrayGeometry& geometry,
                                       const PolarGridConfig& config);

/// One user's clustered multipath channel
///   h = sqrt(1/L) sum_l g_l exp(-i 2pi r_l / lambda) a(theta_l, r_l)
/// with theta_l ~ U(-pi/4, pi/4), r_l ~ U(d_F/8, d_F/2), g_l ~ CN(0, 1).
/// E[||h||^2] = M.
UserChannel generate_multipath_channel(const ArrayGeometry& geometry, int num_paths,
                                       RandomStream& rng);

/// Same as above with caller-supplied paths (gains, angles, distances).
CVector multipath_channel(const ArrayGeometry& geometry, const std::vector<PathParams>& paths);

/// Channel whose paths lie exactly on distinct dictionary columns:
/// h = sqrt(1/L) sum_l g_l F[:, j_l].
UserChannel generate_on_grid_channel(const PolarDictionary& dictionary, int num_paths,
                                     RandomStream& rng);

}  // namespace cpsbl

#endif  // CPSBL_CHANNEL_MODEL_HPP
