#include "cpsbl/esbl.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cpsbl {
namespace {

void check_hyper(const EsblHyper& h) {
  if (!(h.nu > 0.0) || !(h.shape > 0.0) || !(h.scale > 0.0)) {
    throw std::invalid_argument("E-SBL hyperparameters must be positive");
  }
}

}  // namespace

EsblState EsblState::initial(Index unknowns, const EsblHyper& hyper) {
  check_hyper(hyper);
  return {RVector::Ones(unknowns), RVector::Ones(unknowns), hyper};
}

EsblState esbl_em_step(const EsblState& state, const GaussianPosterior& posterior) {
  const Index d = state.weights.size();
  if (posterior.mean.size() != d || posterior.covariance.rows() != d) {
    throw std::invalid_argument("posterior dimension does not match E-SBL state");
  }
  const RVector second_moment =
      posterior.mean.cwiseAbs2() + posterior.covariance.diagonal().real();
  if (!second_moment.allFinite()) {
    throw NumericalError("non-finite posterior second moments");
  }

  const EsblHyper& h = state.hyper;
  EsblState next = state;
  const double half_nu = h.nu / 2.0;
  next.weights = ((second_moment.array() / state.scales.array()) + half_nu) / (half_nu + 2.0);
  next.scales = ((second_moment.array() / next.weights.array()) + h.scale) / (h.shape + 2.0);
  return next;
}

EsblResult run_esbl(const LinearModel& model, const EsblOptions& options) {
  if (options.max_iters < 1) {
    throw std::invalid_argument("E-SBL needs at least one iteration");
  }
  const CMatrix gram = model.sensing_matrix.adjoint() * model.sensing_matrix;
  const CVector correlation = model.sensing_matrix.adjoint() * model.observation;

  EsblResult result;
  result.state = EsblState::initial(model.num_unknowns(), options.hyper);
  if (options.observer) options.observer(0, result.state);

  for (int it = 1; it <= options.max_iters; ++it) {
    const auto post = gaussian_posterior_from_gram(gram, correlation, model.noise_variance,
                                                   result.state.prior_precision());
    EsblState next = esbl_em_step(result.state, post);
    const RVector before = result.state.prior_variance();
    const double change =
        ((next.prior_variance() - before).cwiseAbs().array() / before.array()).maxCoeff();
    result.state = std::move(next);
    result.iterations = it;
    if (options.observer) options.observer(it, result.state);
    if (change < options.tol) break;
  }

  result.estimate = gaussian_posterior_from_gram(gram, correlation, model.noise_variance,
                                                 result.state.prior_precision())
                        .mean;
  return result;
}

double inverse_gamma_log_pdf(double x, double shape, double scale) {
  return shape * std::log(scale) - std::lgamma(shape) - (shape + 1.0) * std::log(x) - scale / x;
}

double esbl_log_objective(const LinearModel& model, const EsblState& state) {
  const CMatrix& a = model.sensing_matrix;
  const Index n = a.rows();
  CMatrix cov = a * state.prior_variance().cast<Complex>().asDiagonal() * a.adjoint();
  cov.diagonal().array() += model.noise_variance;

  const Eigen::LLT<CMatrix> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("evidence covariance is not positive definite");
  }
  const double log_det = 2.0 * llt.matrixLLT().diagonal().real().array().log().sum();
  const double quad = model.observation.dot(llt.solve(model.observation)).real();
  double value = -static_cast<double>(n) * std::log(std::numbers::pi) - log_det - quad;

  const EsblHyper& h = state.hyper;
  for (Index j = 0; j < state.weights.size(); ++j) {
    value += inverse_gamma_log_pdf(state.weights(j), h.nu / 2.0, h.nu / 2.0);
    value += inverse_gamma_log_pdf(state.scales(j), h.shape, h.scale);
  }
  return value;
}

}  // namespace cpsbl
