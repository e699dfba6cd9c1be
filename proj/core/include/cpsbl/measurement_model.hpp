#ifndef CPSBL_MEASUREMENT_MODEL_HPP
#define CPSBL_MEASUREMENT_MODEL_HPP

#include <span>
#include <vector>

#include "cpsbl/channel_model.hpp"
#include "cpsbl/random.hpp"
#include "cpsbl/types.hpp"

namespace cpsbl {

/// K x N pilot block built from the first K rows of the N-point DFT matrix.
struct PilotMatrix {
  CMatrix matrix;

  Index num_users() const noexcept { return matrix.rows(); }
  Index num_pilots() const noexcept { return matrix.cols(); }
};

struct ModelDims {
  Index num_antennas = 0;  // M
  Index num_pilots = 0;    // N
  Index num_users = 0;     // K
  Index num_columns = 0;   // Q
};

/// y ~= A u + e, with sqrt(rho) folded into A. A is (M*N) x (K*Q).
struct LinearModel {
  CMatrix sensing_matrix;
  CVector observation;
  double noise_variance = 1.0;
  ModelDims dims;

  Index num_measurements() const noexcept { return sensing_matrix.rows(); }
  Index num_unknowns() const noexcept { return sensing_matrix.cols(); }
};

/// Disjoint partition of the measurement indices; both halves ascending.
struct HalfSplit {
  std::vector<Index> first;   // ceil(total/2)
  std::vector<Index> second;  // floor(total/2)
};

/// Row-restricted sensing matrix and observation.
struct SubModel {
  CMatrix sensing_matrix;
  CVector observation;
};

PilotMatrix dft_pilot_matrix(int num_pilots, int num_users);

/// Y = sqrt(rho) H P + E with E entries i.i.d. CN(0, noise_variance).
CMatrix simulate_observation(const CMatrix& channels, const PilotMatrix& pilots,
                             double transmit_power, double noise_variance, RandomStream& rng);

/// Column-major vec(Y) and A = sqrt(rho) (P^T kron F).
LinearModel assemble_linear_model(const CMatrix& received, const PilotMatrix& pilots,
                                  const PolarDictionary& dictionary, double transmit_power,
                                  double noise_variance);

/// Dense Kronecker product.
CMatrix kronecker(const CMatrix& lhs, const CMatrix& rhs);

HalfSplit random_half_split(Index total, RandomStream& rng);

/// Rows of A and entries of y at `indices`, in the given order.
SubModel restrict_model(const LinearModel& model, std::span<const Index> indices);

}  // namespace cpsbl

#endif  // CPSBL_MEASUREMENT_MODEL_HPP
