#include "cpsbl/posterior.hpp"

#include <cmath>
#include <stdexcept>

namespace cpsbl {
namespace {

void check_inputs(Index unknowns, double noise_variance, const RVector& prior_precision) {
  if (prior_precision.size() != unknowns) {
    throw std::invalid_argument("prior precision length does not match the number of unknowns");
  }
  if (!(noise_variance > 0.0) || !std::isfinite(noise_variance)) {
    throw std::invalid_argument("noise variance must be positive and finite");
  }
  if (!prior_precision.allFinite()) {
    throw NumericalError("prior precision has non-finite entries");
  }
  if ((prior_precision.array() <= 0.0).any()) {
    throw std::invalid_argument("prior precision entries must be positive");
  }
}

// Hermitian system matrix gram / sigma^2 + Diag(p).
CMatrix system_matrix(const CMatrix& gram, double noise_variance, const RVector& prior_precision) {
  CMatrix h = gram / noise_variance;
  h.diagonal() += prior_precision.cast<Complex>();
  return h;
}

Eigen::LLT<CMatrix> factorize(const CMatrix& h) {
  Eigen::LLT<CMatrix> llt(h);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("posterior precision matrix is not numerically positive definite");
  }
  return llt;
}

GaussianPosterior solve(const CMatrix& gram, const CVector& correlation, double noise_variance,
                        const RVector& prior_precision) {
  const Eigen::LLT<CMatrix> llt = factorize(system_matrix(gram, noise_variance, prior_precision));
  GaussianPosterior post;
  post.covariance = llt.solve(CMatrix::Identity(gram.rows(), gram.cols()));
  // Symmetrize away round-off so downstream code sees an exactly Hermitian matrix.
  post.covariance = (0.5 * (post.covariance + post.covariance.adjoint())).eval();
  post.mean = llt.solve(correlation) / noise_variance;
  if (!post.mean.allFinite() || !post.covariance.allFinite()) {
    throw NumericalError("posterior moments are not finite");
  }
  return post;
}

}  // namespace

GaussianPosterior gaussian_posterior_from_gram(const CMatrix& gram, const CVector& correlation,
                                               double noise_variance,
                                               const RVector& prior_precision) {
  if (gram.rows() != gram.cols() || correlation.size() != gram.rows()) {
    throw std::invalid_argument("gram matrix and correlation vector are not conformable");
  }
  check_inputs(gram.cols(), noise_variance, prior_precision);
  if (!gram.allFinite() || !correlation.allFinite()) {
    throw NumericalError("non-finite sufficient statistics");
  }
  return solve(gram, correlation, noise_variance, prior_precision);
}

GaussianPosterior gaussian_posterior(const CMatrix& sensing, const CVector& observation,
                                     double noise_variance, const RVector& prior_precision) {
  if (sensing.rows() != observation.size()) {
    throw std::invalid_argument("sensing matrix rows do not match observation length");
  }
  check_inputs(sensing.cols(), noise_variance, prior_precision);
  if (!sensing.allFinite() || !observation.allFinite()) {
    throw NumericalError("non-finite sensing matrix or observation");
  }
  return solve(sensing.adjoint() * sensing, sensing.adjoint() * observation, noise_variance,
               prior_precision);
}

CVector posterior_mean(const CMatrix& sensing, const CVector& observation, double noise_variance,
                       const RVector& prior_precision) {
  if (sensing.rows() != observation.size()) {
    throw std::invalid_argument("sensing matrix rows do not match observation length");
  }
  check_inputs(sensing.cols(), noise_variance, prior_precision);
  if (!sensing.allFinite() || !observation.allFinite()) {
    throw NumericalError("non-finite sensing matrix or observation");
  }
  const CMatrix gram = sensing.adjoint() * sensing;
  const auto llt = factorize(system_matrix(gram, noise_variance, prior_precision));
  CVector mean = llt.solve(sensing.adjoint() * observation) / noise_variance;
  if (!mean.allFinite()) {
    throw NumericalError("posterior mean is not finite");
  }
  return mean;
}

}  // namespace cpsbl
