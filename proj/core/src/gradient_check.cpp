#include "cpsbl/gradient_check.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace cpsbl {
namespace {

RVector uniform_vector(Index size, double lo, double hi, RandomStream& rng) {
  RVector v(size);
  for (Index i = 0; i < size; ++i) v(i) = uniform(rng, lo, hi);
  return v;
}

CMatrix gaussian_matrix(Index rows, Index cols, RandomStream& rng) {
  CMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = complex_normal(rng);
  return m;
}

}  // namespace

double relative_gradient_error(const RVector& exact, const RVector& reference) {
  if (exact.size() != reference.size() || exact.size() == 0) {
    throw std::invalid_argument("gradients must be nonempty and of equal length");
  }
  const double scale = reference.cwiseAbs().maxCoeff();
  const double diff = (exact - reference).cwiseAbs().maxCoeff();
  return scale > 0.0 ? diff / scale : diff;
}

GradientCheckReport random_gradient_check(int instances, std::uint64_t seed, double step) {
  constexpr std::array<Index, 3> kDims = {2, 4, 8};
  GradientCheckReport report;
  for (int i = 0; i < instances; ++i) {
    RandomStream rng = make_stream(seed, static_cast<std::uint64_t>(i), StreamTag::kGradCheck);
    const Index d = kDims[static_cast<std::size_t>(i) % kDims.size()];
    const Index total = d + 4 + static_cast<Index>(i % 5);

    LinearModel model;
    model.sensing_matrix = gaussian_matrix(total, d, rng);
    model.observation = gaussian_matrix(total, 1, rng).col(0);
    model.noise_variance = uniform(rng, 0.1, 2.0);
    report.max_relative_error =
        std::max(report.max_relative_error, model_gradient_check(model, rng, step));
    ++report.instances;
  }
  return report;
}

double model_gradient_check(const LinearModel& model, RandomStream& rng, double step) {
  const SplitModel split = split_model(model, random_half_split(model.num_measurements(), rng));
  const RVector r = uniform_vector(model.num_unknowns(), -2.0, 2.0, rng);
  const RVector exact = cp_gradient(r, split, model.noise_variance);
  const RVector reference = finite_difference_gradient(r, split, model.noise_variance, step);
  return relative_gradient_error(exact, reference);
}

}  // namespace cpsbl
