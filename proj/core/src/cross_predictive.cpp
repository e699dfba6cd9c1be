#include "cpsbl/cross_predictive.hpp"

#include <cmath>
#include <stdexcept>

namespace cpsbl {
namespace {

void check_split(const RVector& log_weights, const SplitModel& split) {
  const Index d = log_weights.size();
  if (split.a1.cols() != d || split.a2.cols() != d || split.a1.rows() != split.y1.size() ||
      split.a2.rows() != split.y2.size()) {
    throw std::invalid_argument("split model and log-weights are not conformable");
  }
  if (!log_weights.allFinite()) {
    throw NumericalError("non-finite log-weights");
  }
}

}  // namespace

SplitModel split_model(const LinearModel& model, const HalfSplit& split) {
  auto fit = restrict_model(model, split.first);
  auto held_out = restrict_model(model, split.second);
  return {std::move(fit.sensing_matrix), std::move(fit.observation),
          std::move(held_out.sensing_matrix), std::move(held_out.observation)};
}

CpEvaluation cp_evaluate(const RVector& log_weights, const SplitModel& split,
                         double noise_variance) {
  check_split(log_weights, split);
  const RVector w = log_weights.array().exp();
  const GaussianPosterior post = gaussian_posterior(split.a1, split.y1, noise_variance, w);

  // Z = A2 Sigma1; column j is A2 Sigma1 e_j.
  const CMatrix z = split.a2 * post.covariance;
  const CVector residual = split.a2 * post.mean - split.y2;
  const CVector v = z.adjoint() * residual;

  CpEvaluation out;
  const double trace = z.cwiseProduct(split.a2.conjugate()).sum().real();
  out.objective = residual.squaredNorm() + trace;
  out.gradient.resize(w.size());
  for (Index j = 0; j < w.size(); ++j) {
    const double cross = (std::conj(v(j)) * post.mean(j)).real();
    out.gradient(j) = -w(j) * (2.0 * cross + z.col(j).squaredNorm());
  }
  if (!std::isfinite(out.objective) || !out.gradient.allFinite()) {
    throw NumericalError("cross-predictive objective is not finite");
  }
  return out;
}

double cp_objective(const RVector& log_weights, const SplitModel& split, double noise_variance) {
  check_split(log_weights, split);
  const RVector w = log_weights.array().exp();
  const GaussianPosterior post = gaussian_posterior(split.a1, split.y1, noise_variance, w);
  const CMatrix z = split.a2 * post.covariance;
  const double trace = z.cwiseProduct(split.a2.conjugate()).sum().real();
  const double value = (split.a2 * post.mean - split.y2).squaredNorm() + trace;
  if (!std::isfinite(value)) {
    throw NumericalError("cross-predictive objective is not finite");
  }
  return value;
}

RVector cp_gradient(const RVector& log_weights, const SplitModel& split, double noise_variance) {
  return cp_evaluate(log_weights, split, noise_variance).gradient;
}

RVector finite_difference_gradient(const std::function<double(const RVector&)>& objective,
                                   const RVector& point, double step) {
  if (!(step > 0.0)) {
    throw std::invalid_argument("finite-difference step must be positive");
  }
  RVector grad(point.size());
  RVector probe = point;
  for (Index j = 0; j < point.size(); ++j) {
    probe(j) = point(j) + step;
    const double up = objective(probe);
    probe(j) = point(j) - step;
    const double down = objective(probe);
    probe(j) = point(j);
    grad(j) = (up - down) / (2.0 * step);
  }
  return grad;
}

RVector finite_difference_gradient(const RVector& log_weights, const SplitModel& split,
                                   double noise_variance, double step) {
  return finite_difference_gradient(
      [&](const RVector& r) { return cp_objective(r, split, noise_variance); }, log_weights, step);
}

CpsblState CpsblState::initial(Index unknowns, const AdamParams& adam) {
  if (!(adam.step_size > 0.0) || !(adam.epsilon > 0.0) || adam.beta1 < 0.0 || adam.beta1 >= 1.0 ||
      adam.beta2 < 0.0 || adam.beta2 >= 1.0) {
    throw std::invalid_argument("invalid Adam parameters");
  }
  return {RVector::Zero(unknowns), RVector::Zero(unknowns), RVector::Zero(unknowns), 0, adam};
}

CpsblState adam_step(const CpsblState& state, const RVector& gradient) {
  if (gradient.size() != state.log_weights.size()) {
    throw std::invalid_argument("gradient length does not match state");
  }
  if (!gradient.allFinite()) {
    throw NumericalError("non-finite gradient");
  }
  const AdamParams& p = state.adam;
  CpsblState next = state;
  next.step_count = state.step_count + 1;
  next.first_moment = p.beta1 * state.first_moment + (1.0 - p.beta1) * gradient;
  next.second_moment =
      p.beta2 * state.second_moment + (1.0 - p.beta2) * gradient.cwiseAbs2();

  const double t = static_cast<double>(next.step_count);
  const double bias1 = 1.0 - std::pow(p.beta1, t);
  const double bias2 = 1.0 - std::pow(p.beta2, t);
  const auto m_hat = next.first_moment.array() / bias1;
  const auto v_hat = next.second_moment.array() / bias2;
  next.log_weights = state.log_weights.array() - p.step_size * m_hat / (v_hat.sqrt() + p.epsilon);
  return next;
}

double split_rescale_factor(Index total) {
  if (total < 2) {
    throw std::invalid_argument("split needs at least two measurements");
  }
  return static_cast<double>(total) / static_cast<double>((total + 1) / 2);
}

CpsblResult run_cpsbl(const LinearModel& model, const CpsblOptions& options, RandomStream& rng) {
  if (options.num_iters < 1) {
    throw std::invalid_argument("CP-SBL needs at least one iteration");
  }
  const Index total = model.num_measurements();
  CpsblResult result;
  result.state = CpsblState::initial(model.num_unknowns(), options.adam);

  for (int it = 1; it <= options.num_iters; ++it) {
    const SplitModel split = split_model(model, random_half_split(total, rng));
    const CpEvaluation eval = cp_evaluate(result.state.log_weights, split, model.noise_variance);
    result.state = adam_step(result.state, eval.gradient);
    if (options.observer) options.observer(it, result.state, eval.objective);
  }

  const RVector precision = split_rescale_factor(total) * result.state.weights();
  result.estimate =
      posterior_mean(model.sensing_matrix, model.observation, model.noise_variance, precision);
  return result;
}

}  // namespace cpsbl
