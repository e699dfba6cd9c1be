#ifndef CPSBL_GRADIENT_CHECK_HPP
#define CPSBL_GRADIENT_CHECK_HPP

#include <cstdint>

#include "cpsbl/cross_predictive.hpp"

namespace cpsbl {

/// max_j |exact_j - reference_j| / max_j |reference_j|.
double relative_gradient_error(const RVector& exact, const RVector& reference);

struct GradientCheckReport {
  int instances = 0;
  double max_relative_error = 0.0;
};

/// Random split models with D cycling through {2, 4, 8}, complex Gaussian
/// A and y, and r ~ U[-2, 2]^D; compares cp_gradient against central
/// differences with the given step.
GradientCheckReport random_gradient_check(int instances, std::uint64_t seed, double step = 1e-5);

/// One random half split of `model` at r ~ U[-2, 2]^D.
double model_gradient_check(const LinearModel& model, RandomStream& rng, double step = 1e-5);

}  // namespace cpsbl

#endif  // CPSBL_GRADIENT_CHECK_HPP
