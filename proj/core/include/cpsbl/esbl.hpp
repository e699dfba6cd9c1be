#ifndef CPSBL_ESBL_HPP
#define CPSBL_ESBL_HPP

#include <functional>

#include "cpsbl/measurement_model.hpp"
#include "cpsbl/posterior.hpp"
#include "cpsbl/types.hpp"

namespace cpsbl {

/// Inverse-gamma hyperparameters: w_j ~ IG(nu/2, nu/2), s_j ~ IG(shape, scale).
struct EsblHyper {
  double nu = 1.0;
  double shape = 1e-2;
  double scale = 1e-2;
};

/// E-SBL weights and scales. The prior variance of u_j is w_j * s_j, so the
/// precision entering the posterior is 1 / (w_j * s_j).
struct EsblState {
  RVector weights;
  RVector scales;
  EsblHyper hyper;

  /// w = s = 1.
  static EsblState initial(Index unknowns, const EsblHyper& hyper);

  RVector prior_variance() const { return weights.cwiseProduct(scales); }
  RVector prior_precision() const { return prior_variance().cwiseInverse(); }
};

/// One EM update. w is updated first and the s update uses the new w:
///   w_j <- (nu/2 + m_j / s_j) / (nu/2 + 2)
///   s_j <- (scale + m_j / w_j) / (shape + 2)
/// with m_j = |mu_j|^2 + Sigma_jj.
EsblState esbl_em_step(const EsblState& state, const GaussianPosterior& posterior);

struct EsblOptions {
  EsblHyper hyper;
  int max_iters = 50;
  double tol = 1e-6;  // on max relative change of w .* s
  /// Called with (iteration, state) for the initial state and after every update.
  std::function<void(int, const EsblState&)> observer;
};

struct EsblResult {
  CVector estimate;
  EsblState state;
  int iterations = 0;
};

EsblResult run_esbl(const LinearModel& model, const EsblOptions& options);

/// Log of the complex Gaussian evidence p(y | w, s) plus the log inverse-gamma
/// prior densities of w and s. EM never decreases it.
double esbl_log_objective(const LinearModel& model, const EsblState& state);

/// Log density of IG(shape, scale) at x.
double inverse_gamma_log_pdf(double x, double shape, double scale);

}  // namespace cpsbl

#endif  // CPSBL_ESBL_HPP
