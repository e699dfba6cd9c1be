#ifndef CPSBL_POSTERIOR_HPP
#define CPSBL_POSTERIOR_HPP

#include "cpsbl/types.hpp"

namespace cpsbl {

/// Circularly symmetric complex Gaussian N(mean, covariance).
struct GaussianPosterior {
  CVector mean;
  CMatrix covariance;  // Hermitian positive definite
};

/// Posterior of u under y = A u + e, e ~ CN(0, sigma^2 I), u_j ~ CN(0, 1/p_j):
///   Sigma = (A^H A / sigma^2 + Diag(p))^{-1},  mu = Sigma A^H y / sigma^2.
/// Throws std::invalid_argument on shape mismatch or non-positive precision,
/// NumericalError on non-finite input or a failed factorization.
GaussianPosterior gaussian_posterior(const CMatrix& sensing, const CVector& observation,
                                     double noise_variance, const RVector& prior_precision);

/// Same posterior from the sufficient statistics gram = A^H A and
/// correlation = A^H y. Lets iterative callers reuse A^H A.
GaussianPosterior gaussian_posterior_from_gram(const CMatrix& gram, const CVector& correlation,
                                               double noise_variance,
                                               const RVector& prior_precision);

/// Posterior mean only; solves with the Cholesky factor instead of forming Sigma.
CVector posterior_mean(const CMatrix& sensing, const CVector& observation, double noise_variance,
                       const RVector& prior_precision);

}  // namespace cpsbl

#endif  // CPSBL_POSTERIOR_HPP
