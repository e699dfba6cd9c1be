#include "cpsbl/measurement_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace cpsbl {

PilotMatrix dft_pilot_matrix(int num_pilots, int num_users) {
  if (num_users < 1 || num_pilots < 1) {
    throw std::invalid_argument("pilot length and user count must be >= 1");
  }
  if (num_users > num_pilots) {
    throw std::invalid_argument("num_users must not exceed pilot length");
  }
  PilotMatrix p;
  p.matrix.resize(num_users, num_pilots);
  for (int k = 0; k < num_users; ++k) {
    for (int n = 0; n < num_pilots; ++n) {
      // Reduce k*n mod N so the phase stays exact for large products.
      const long long kn = static_cast<long long>(k) * n % num_pilots;
      p.matrix(k, n) = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(kn) / num_pilots);
    }
  }
  return p;
}

CMatrix simulate_observation(const CMatrix& channels, const PilotMatrix& pilots,
                             double transmit_power, double noise_variance, RandomStream& rng) {
  if (channels.cols() != pilots.num_users()) {
    throw std::invalid_argument("channel matrix has " + std::to_string(channels.cols()) +
                                " columns but pilot matrix has " +
                                std::to_string(pilots.num_users()) + " rows");
  }
  if (!(transmit_power > 0.0) || noise_variance < 0.0) {
    throw std::invalid_argument("transmit power must be positive and noise variance nonnegative");
  }
  CMatrix y = std::sqrt(transmit_power) * channels * pilots.matrix;
  if (noise_variance > 0.0) {
    for (Index j = 0; j < y.cols(); ++j) {
      for (Index i = 0; i < y.rows(); ++i) {
        y(i, j) += complex_normal(rng, noise_variance);
      }
    }
  }
  return y;
}

CMatrix kronecker(const CMatrix& lhs, const CMatrix& rhs) {
  CMatrix out(lhs.rows() * rhs.rows(), lhs.cols() * rhs.cols());
  for (Index i = 0; i < lhs.rows(); ++i) {
    for (Index j = 0; j < lhs.cols(); ++j) {
      out.block(i * rhs.rows(), j * rhs.cols(), rhs.rows(), rhs.cols()) = lhs(i, j) * rhs;
    }
  }
  return out;
}

LinearModel assemble_linear_model(const CMatrix& received, const PilotMatrix& pilots,
                                  const PolarDictionary& dictionary, double transmit_power,
                                  double noise_variance) {
  const CMatrix& f = dictionary.matrix;
  if (received.rows() != f.rows() || received.cols() != pilots.num_pilots()) {
    throw std::invalid_argument("received block must be M x N");
  }
  if (!(transmit_power > 0.0) || !(noise_variance > 0.0)) {
    throw std::invalid_argument("transmit power and noise variance must be positive");
  }
  LinearModel model;
  model.sensing_matrix = std::sqrt(transmit_power) * kronecker(pilots.matrix.transpose(), f);
  model.observation = received.reshaped();
  model.noise_variance = noise_variance;
  model.dims = {f.rows(), pilots.num_pilots(), pilots.num_users(), f.cols()};
  return model;
}

HalfSplit random_half_split(Index total, RandomStream& rng) {
  if (total < 2) {
    throw std::invalid_argument("half split needs at least two measurements");
  }
  std::vector<Index> perm(static_cast<std::size_t>(total));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);

  const auto first_size = static_cast<std::ptrdiff_t>((total + 1) / 2);
  HalfSplit split;
  split.first.assign(perm.begin(), perm.begin() + first_size);
  split.second.assign(perm.begin() + first_size, perm.end());
  std::sort(split.first.begin(), split.first.end());
  std::sort(split.second.begin(), split.second.end());
  return split;
}

SubModel restrict_model(const LinearModel& model, std::span<const Index> indices) {
  const Index rows = model.num_measurements();
  std::vector<bool> seen(static_cast<std::size_t>(rows), false);
  for (Index i : indices) {
    if (i < 0 || i >= rows) {
      throw std::out_of_range("measurement index " + std::to_string(i) + " out of range");
    }
    if (seen[static_cast<std::size_t>(i)]) {
      throw std::invalid_argument("duplicate measurement index " + std::to_string(i));
    }
    seen[static_cast<std::size_t>(i)] = true;
  }
  SubModel sub;
  sub.sensing_matrix.resize(static_cast<Index>(indices.size()), model.num_unknowns());
  sub.observation.resize(static_cast<Index>(indices.size()));
  for (std::size_t r = 0; r < indices.size(); ++r) {
    sub.sensing_matrix.row(static_cast<Index>(r)) = model.sensing_matrix.row(indices[r]);
    sub.observation(static_cast<Index>(r)) = model.observation(indices[r]);
  }
  return sub;
}

}  // namespace cpsbl
