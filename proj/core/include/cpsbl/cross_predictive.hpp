#ifndef CPSBL_CROSS_PREDICTIVE_HPP
#define CPSBL_CROSS_PREDICTIVE_HPP

#include <cstdint>
#include <functional>

#include "cpsbl/measurement_model.hpp"
#include "cpsbl/posterior.hpp"
#include "cpsbl/random.hpp"
#include "cpsbl/types.hpp"

namespace cpsbl {

/// Fit half (a1, y1) and held-out half (a2, y2) of one random split.
struct SplitModel {
  CMatrix a1;
  CVector y1;
  CMatrix a2;
  CVector y2;
};

SplitModel split_model(const LinearModel& model, const HalfSplit& split);

/// Objective value and its gradient with respect to the log-precisions r.
struct CpEvaluation {
  double objective = 0.0;
  RVector gradient;
};

/// Cross-predictive objective
///   CP(r) = ||A2 mu1 - y2||^2 + tr(A2 Sigma1 A2^H)
/// where (mu1, Sigma1) is the posterior fitted on (A1, y1) with prior
/// precision exp(r). This is E||A2 u - y2||^2 under that posterior.
double cp_objective(const RVector& log_weights, const SplitModel& split, double noise_variance);

/// Exact gradient of cp_objective. With w = exp(r), v = Sigma1 A2^H (A2 mu1 - y2):
///   dCP/dr_j = -w_j (2 Re(conj(v_j) mu1_j) + ||A2 Sigma1 e_j||^2).
RVector cp_gradient(const RVector& log_weights, const SplitModel& split, double noise_variance);

/// Objective and gradient from a single factorization.
CpEvaluation cp_evaluate(const RVector& log_weights, const SplitModel& split,
                         double noise_variance);

/// Central differences (f(x + h e_j) - f(x - h e_j)) / 2h for each coordinate.
RVector finite_difference_gradient(const std::function<double(const RVector&)>& objective,
                                   const RVector& point, double step);

RVector finite_difference_gradient(const RVector& log_weights, const SplitModel& split,
                                   double noise_variance, double step);

struct AdamParams {
  double step_size = 0.5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Unconstrained log-precisions plus Adam moments.
struct CpsblState {
  RVector log_weights;
  RVector first_moment;
  RVector second_moment;
  std::int64_t step_count = 0;
  AdamParams adam;

  /// r = 0 (unit precision), zero moments.
  static CpsblState initial(Index unknowns, const AdamParams& adam);

  RVector weights() const { return log_weights.array().exp(); }
};

/// Bias-corrected Adam update of the log-precisions.
CpsblState adam_step(const CpsblState& state, const RVector& gradient);

struct CpsblOptions {
  AdamParams adam;
  int num_iters = 50;
  /// Called with (iteration, state, objective) after every update.
  std::function<void(int, const CpsblState&, double)> observer;
};

struct CpsblResult {
  CVector estimate;
  CpsblState state;
};

/// total / ceil(total / 2): compensates the fit half holding only B1 of the rows.
double split_rescale_factor(Index total);

/// Trains r by Adam on freshly drawn half splits, then returns the posterior
/// mean on the full model with precision (MN/B1) exp(r).
CpsblResult run_cpsbl(const LinearModel& model, const CpsblOptions& options, RandomStream& rng);

}  // namespace cpsbl

#endif  // CPSBL_CROSS_PREDICTIVE_HPP
