#ifndef CPSBL_TESTS_ORACLES_HPP
#define CPSBL_TESTS_ORACLES_HPP

// Test-only reference computations. Nothing here calls the library's
// posterior or gradient code paths.

#include <cmath>
#include <random>
#include <utility>

#include <Eigen/Dense>

#include "cpsbl/types.hpp"

namespace cpsbl::oracle {

inline CMatrix random_cmatrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = {n(rng), n(rng)};
  return m;
}

inline CVector random_cvector(Index size, std::mt19937_64& rng) {
  return random_cmatrix(size, 1, rng).col(0);
}

inline RVector random_uniform(Index size, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  RVector v(size);
  for (Index i = 0; i < size; ++i) v(i) = u(rng);
  return v;
}

/// Posterior via the data-space (Woodbury) form with full-pivot LU:
///   mu = P^{-1} A^H (sigma^2 I + A P^{-1} A^H)^{-1} y
///   Sigma = P^{-1} - P^{-1} A^H (sigma^2 I + A P^{-1} A^H)^{-1} A P^{-1}
inline std::pair<CVector, CMatrix> woodbury_posterior(const CMatrix& a, const CVector& y,
                                                      double noise_variance,
                                                      const RVector& precision) {
  const CMatrix prior_cov = precision.cwiseInverse().cast<Complex>().asDiagonal();
  CMatrix data_cov = a * prior_cov * a.adjoint();
  data_cov.diagonal().array() += noise_variance;
  const Eigen::FullPivLU<CMatrix> lu(data_cov);
  const CVector mean = prior_cov * a.adjoint() * lu.solve(y);
  const CMatrix cov = prior_cov - prior_cov * a.adjoint() * lu.solve(a * prior_cov);
  return {mean, cov};
}

/// Posterior mean from the parameter-space normal equations, solved by
/// full-pivot LU on the non-Hermitian-aware general system.
inline CVector normal_equations_mean(const CMatrix& a, const CVector& y, double noise_variance,
                                     const RVector& precision) {
  CMatrix h = a.adjoint() * a / noise_variance;
  h.diagonal() += precision.cast<Complex>();
  return Eigen::FullPivLU<CMatrix>(h).solve(a.adjoint() * y / noise_variance);
}

/// Monte Carlo estimate of E||A2 u - y2||^2 with u ~ CN(mean, cov).
/// Returns (mean estimate, standard error).
inline std::pair<double, double> sampled_prediction_error(const CMatrix& a2, const CVector& y2,
                                                          const CVector& mean, const CMatrix& cov,
                                                          int samples, std::mt19937_64& rng) {
  const CMatrix l = Eigen::LLT<CMatrix>(cov).matrixL();
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  CVector z(mean.size());
  double sum = 0.0, sum_sq = 0.0;
  for (int s = 0; s < samples; ++s) {
    for (Index i = 0; i < z.size(); ++i) z(i) = {n(rng), n(rng)};
    const double v = (a2 * (mean + l * z) - y2).squaredNorm();
    sum += v;
    sum_sq += v * v;
  }
  const double m = sum / samples;
  const double var = (sum_sq - samples * m * m) / (samples - 1);
  return {m, std::sqrt(var / samples)};
}

/// Dictionary size by enumerating the ring condition independently of the
/// library: angle grid sin = (2i - B + 1)/B, rings r_s = d_F cos^2 / (4 beta^2 s)
/// kept while r_s >= min_distance, plus one far-field column per angle.
inline long count_polar_columns(int antennas, double wavelength, int bins, double beta,
                                double min_distance) {
  const double d_f = wavelength / 2.0 * antennas * antennas;
  long q = 0;
  for (int i = 0; i < bins; ++i) {
    const double s = (2.0 * i - bins + 1.0) / bins;
    const double cos2 = 1.0 - s * s;
    for (int ring = 1; d_f * cos2 / (4.0 * beta * beta * ring) >= min_distance; ++ring) ++q;
    ++q;
  }
  return q;
}

}  // namespace cpsbl::oracle

#endif  // CPSBL_TESTS_ORACLES_HPP
