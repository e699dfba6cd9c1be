// Acceptance suite. Prints one PASS/FAIL line per criterion followed by
// indented detail lines; exits nonzero if any criterion fails.
//
// Each criterion also has a wall-clock budget; exceeding it is a failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>
#include <unistd.h>

#include "cpsbl/cpsbl.hpp"
#include "oracles.hpp"

namespace {

using namespace cpsbl;

struct Verdict {
  bool pass = true;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { details.push_back("     " + what); }
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<Verdict()> run;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double relative_error(const CMatrix& a, const CMatrix& ref) {
  return (a - ref).norm() / ref.norm();
}

// ---- property suites ------------------------------------------------------

Verdict gradient_correctness() {
  Verdict v;
  const auto report = random_gradient_check(24, 2024, 1e-5);
  v.require(report.instances >= 20, "instances = " + std::to_string(report.instances));
  v.require(report.max_relative_error < 1e-5,
            "max relative error " + fmt(report.max_relative_error) + " < 1e-5");
  return v;
}

Verdict posterior_oracle() {
  Verdict v;
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<int> dim(1, 16);
  double worst_mean = 0.0, worst_cov = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Index d = dim(gen);
    const Index rows = std::uniform_int_distribution<Index>(1, 24)(gen);
    const CMatrix a = oracle::random_cmatrix(rows, d, gen);
    const CVector y = oracle::random_cvector(rows, gen);
    const double sigma2 = oracle::random_uniform(1, 0.05, 3.0, gen)(0);
    const RVector p = oracle::random_uniform(d, -2.0, 2.0, gen).array().exp().matrix();

    const auto post = gaussian_posterior(a, y, sigma2, p);
    const CVector ref_mean = oracle::normal_equations_mean(a, y, sigma2, p);
    const auto [wb_mean, wb_cov] = oracle::woodbury_posterior(a, y, sigma2, p);
    worst_mean = std::max({worst_mean, relative_error(post.mean, ref_mean),
                           relative_error(post.mean, wb_mean)});
    worst_cov = std::max(worst_cov, relative_error(post.covariance, wb_cov));
  }
  v.require(worst_mean < 1e-10, "mean relative error " + fmt(worst_mean) + " < 1e-10");
  v.require(worst_cov < 1e-10, "covariance relative error " + fmt(worst_cov) + " < 1e-10");
  return v;
}

Verdict scalar_case() {
  Verdict v;
  const SplitModel s{CMatrix::Ones(1, 1), CVector::Ones(1), CMatrix::Ones(1, 1), CVector::Ones(1)};
  const double f = cp_objective(RVector::Zero(1), s, 1.0);
  const double g = cp_gradient(RVector::Zero(1), s, 1.0)(0);
  v.require(std::abs(f - 0.75) <= 1e-12, "objective " + fmt(f) + " = 0.75");
  v.require(std::abs(g) <= 1e-12, "gradient " + fmt(g) + " = 0");
  return v;
}

Verdict em_monotonicity() {
  Verdict v;
  std::mt19937_64 gen(11);
  double worst_drop = 0.0;
  int steps = 0;
  for (int i = 0; i < 10; ++i) {
    const Index d = 6 + i;  // 6..15
    const Index rows = 4 + (i * 3) % 14;
    LinearModel model;
    model.sensing_matrix = oracle::random_cmatrix(rows, d, gen);
    CVector u = CVector::Zero(d);
    u(i % d) = Complex(2.0, -1.0);
    u((3 * i + 1) % d) = Complex(-0.5, 1.5);
    model.noise_variance = oracle::random_uniform(1, 0.05, 1.0, gen)(0);
    model.observation = model.sensing_matrix * u +
                        std::sqrt(model.noise_variance) * oracle::random_cvector(rows, gen);

    EsblOptions opts;
    opts.max_iters = 50;
    opts.tol = 0.0;
    double last = std::numeric_limits<double>::quiet_NaN();
    opts.observer = [&](int, const EsblState& st) {
      const double f = esbl_log_objective(model, st);
      if (!std::isnan(last)) {
        worst_drop = std::max(worst_drop, last - f);
        ++steps;
      }
      last = f;
    };
    run_esbl(model, opts);
  }
  v.require(steps == 500, "steps checked = " + std::to_string(steps));
  v.require(worst_drop <= 1e-8, "largest decrease " + fmt(worst_drop) + " <= 1e-8");
  return v;
}

Verdict objective_expectation() {
  Verdict v;
  std::mt19937_64 gen(5);
  const SplitModel s{oracle::random_cmatrix(5, 4, gen), oracle::random_cvector(5, gen),
                     oracle::random_cmatrix(5, 4, gen), oracle::random_cvector(5, gen)};
  const double sigma2 = 0.7;
  const RVector r = oracle::random_uniform(4, -2.0, 2.0, gen);
  const auto [mean, cov] = oracle::woodbury_posterior(s.a1, s.y1, sigma2, r.array().exp().matrix());
  const auto [estimate, se] = oracle::sampled_prediction_error(s.a2, s.y2, mean, cov, 100000, gen);
  const double cp = cp_objective(r, s, sigma2);
  v.note("objective " + fmt(cp) + ", sampled " + fmt(estimate) + " +- " + fmt(se));
  v.require(std::abs(cp - estimate) <= 3.0 * se,
            "|difference| " + fmt(std::abs(cp - estimate)) + " <= 3 SE " + fmt(3.0 * se));
  return v;
}

Verdict on_grid_recovery() {
  Verdict v;
  auto config = desk_preset();
  config.num_paths = 2;
  config.on_grid = true;
  // noise_variance is fixed at 1, so SNR 60 dB is the same problem as
  // unit transmit power with sigma^2 = 1e-6.
  config.snr_db = 60.0;
  const auto ctx = make_trial_context(config);
  std::vector<TrialOutcome> trials;
  for (std::uint64_t t = 0; t < 10; ++t) trials.push_back(run_trial(ctx, t));
  for (auto e : kAllEstimators) {
    const double value = nmse(trials, e);
    v.require(value < 1e-3, std::string(estimator_name(e)) + " NMSE " + fmt(value) + " < 1e-3");
  }
  return v;
}

// ---- trend reproduction ---------------------------------------------------

// Linearized contribution of each trial to a ratio-of-sums NMSE, so that the
// difference between two sweep points on the same trial indices has a paired
// standard error.
std::vector<double> influence(const std::vector<TrialOutcome>& trials, Estimator e) {
  const double point = nmse(trials, e);
  double energy = 0.0;
  for (const auto& t : trials) energy += t.channel_energy;
  energy /= static_cast<double>(trials.size());
  std::vector<double> z;
  for (const auto& t : trials) z.push_back((t[e].squared_error - point * t.channel_energy) / energy);
  return z;
}

struct PairedDiff {
  double diff;
  double se;
};

PairedDiff paired_difference(const SweepResult& r, std::size_t from, std::size_t to, Estimator e) {
  const auto za = influence(r.outcomes[from], e);
  const auto zb = influence(r.outcomes[to], e);
  const auto n = static_cast<double>(za.size());
  double mean = 0.0;
  for (std::size_t t = 0; t < za.size(); ++t) mean += zb[t] - za[t];
  mean /= n;
  double var = 0.0;
  for (std::size_t t = 0; t < za.size(); ++t) var += std::pow(zb[t] - za[t] - mean, 2);
  var /= n - 1.0;
  return {nmse(r.outcomes[to], e) - nmse(r.outcomes[from], e), std::sqrt(var / n)};
}

bool all_valid(const SweepResult& r, Verdict& v) {
  bool ok = true;
  for (std::size_t p = 0; p < r.values.size(); ++p)
    for (auto e : kAllEstimators)
      ok = ok && r.valid_trials[p][static_cast<std::size_t>(e)] == r.num_trials;
  v.require(ok, "every trial valid for every estimator");
  return ok;
}

void print_table(const SweepResult& r, Verdict& v) {
  for (std::size_t p = 0; p < r.values.size(); ++p) {
    std::string line = std::string(sweep_column_header(r.variable)) + "=" + fmt(r.values[p]);
    for (auto e : kAllEstimators)
      line += "  " + std::string(estimator_name(e)) + " " + fmt(r.nmse[p][static_cast<std::size_t>(e)]);
    v.note(line);
  }
}

// sign = +1: non-increasing along the sweep; sign = -1: non-decreasing.
void check_trend(const SweepResult& r, double sign, Verdict& v) {
  for (auto e : kAllEstimators) {
    for (std::size_t p = 0; p + 1 < r.values.size(); ++p) {
      const auto d = paired_difference(r, p, p + 1, e);
      std::ostringstream os;
      os << estimator_name(e) << " " << fmt(r.values[p]) << " -> " << fmt(r.values[p + 1])
         << ": change " << fmt(d.diff) << ", 3 paired SE " << fmt(3.0 * d.se);
      v.require(sign * d.diff <= 3.0 * d.se, os.str());
    }
  }
}

constexpr int kTrendTrials = 100;

SweepResult desk_sweep(SweepVariable variable, std::vector<double> values) {
  auto config = desk_preset();
  config.num_trials = kTrendTrials;
  return run_sweep(config, variable, values, 0);
}

Verdict snr_trend() {
  Verdict v;
  const auto r = desk_sweep(SweepVariable::kSnrDb, {-10.0, 0.0, 10.0, 20.0});
  v.note("trials per point " + std::to_string(r.num_trials));
  print_table(r, v);
  all_valid(r, v);

  const auto& at10 = r.outcomes[2];
  const double e = nmse(at10, Estimator::kEsbl);
  const double cp = nmse(at10, Estimator::kCpsbl);
  double mean_e = 0.0, mean_cp = 0.0;
  for (const auto& t : at10) {
    mean_e += t[Estimator::kEsbl].squared_error / t.channel_energy;
    mean_cp += t[Estimator::kCpsbl].squared_error / t.channel_energy;
  }
  mean_e /= static_cast<double>(at10.size());
  mean_cp /= static_cast<double>(at10.size());
  v.note("per-trial average at 10 dB: E_SBL " + fmt(mean_e) + ", CP_SBL " + fmt(mean_cp));
  {
    const auto ze = influence(at10, Estimator::kEsbl);
    const auto zc = influence(at10, Estimator::kCpsbl);
    const auto n = static_cast<double>(ze.size());
    double mean = 0.0, var = 0.0;
    for (std::size_t t = 0; t < ze.size(); ++t) mean += zc[t] - ze[t];
    mean /= n;
    for (std::size_t t = 0; t < ze.size(); ++t) var += std::pow(zc[t] - ze[t] - mean, 2);
    v.note("CP_SBL - E_SBL at 10 dB: " + fmt(cp - e) + ", paired SE " +
           fmt(std::sqrt(var / (n - 1.0) / n)));
  }
  v.require(cp <= e, "CP_SBL NMSE " + fmt(cp) + " <= E_SBL NMSE " + fmt(e) + " at 10 dB");
  check_trend(r, +1.0, v);
  return v;
}

Verdict pilot_trend() {
  Verdict v;
  const auto r = desk_sweep(SweepVariable::kPilotLength, {4.0, 8.0, 16.0});
  print_table(r, v);
  all_valid(r, v);
  check_trend(r, +1.0, v);
  return v;
}

Verdict path_trend() {
  Verdict v;
  const auto r = desk_sweep(SweepVariable::kNumPaths, {2.0, 4.0, 8.0});
  print_table(r, v);
  all_valid(r, v);
  check_trend(r, -1.0, v);
  return v;
}

// ---- constants and determinism --------------------------------------------

Verdict exact_constants() {
  Verdict v;
  constexpr double kLightSpeed = 3e8;
  const std::vector<std::pair<int, double>> configs = {{64, 7.5e9}, {128, 30e9}, {256, 120e9}};
  for (const auto& [m, carrier] : configs) {
    const double d = fraunhofer_distance(ArrayGeometry(m, kLightSpeed / carrier));
    v.require(std::abs(d - 81.92) <= 1e-12 * 81.92,
              "M=" + std::to_string(m) + " at " + fmt(carrier / 1e9) + " GHz: d_F " + fmt(d));
  }

  const double eps = std::numeric_limits<double>::epsilon();
  double worst_orth = 0.0;
  for (auto [n, k] : std::vector<std::pair<int, int>>{{8, 2}, {20, 5}, {16, 16}, {7, 3}}) {
    const auto p = dft_pilot_matrix(n, k).matrix;
    const CMatrix gram = p * p.adjoint() - n * CMatrix::Identity(k, k);
    worst_orth = std::max(worst_orth, gram.cwiseAbs().maxCoeff() / n);
  }
  v.require(worst_orth <= 64 * eps, "P P^H = N I, largest deviation / N " + fmt(worst_orth));

  double worst_norm = 0.0;
  for (int m : {1, 32, 64, 256}) {
    const ArrayGeometry g(m, 2.0 * 81.92 / (m * m));
    for (double angle : {-1.2, -0.3, 0.0, 0.7}) {
      for (double dist : {2.0, 10.0, 40.0}) {
        worst_norm = std::max(worst_norm,
                              std::abs(steering_vector(g, angle, dist).squaredNorm() - m) / m);
      }
      worst_norm =
          std::max(worst_norm, std::abs(far_field_steering_vector(g, angle).squaredNorm() - m) / m);
    }
  }
  v.require(worst_norm <= 64 * eps, "||a||^2 = M, largest relative deviation " + fmt(worst_norm));

  bool factor_ok = true;
  for (Index total : {16, 64, 160, 1280}) factor_ok = factor_ok && split_rescale_factor(total) == 2.0;
  v.require(factor_ok, "MN/B1 = 2 for even MN");
  return v;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Verdict determinism() {
  Verdict v;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("cpsbl_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);

  auto config = desk_preset();
  config.num_trials = 12;
  config.master_seed = 99;
  const std::vector<double> values = {0.0, 10.0};

  struct Run {
    const char* name;
    unsigned threads;
  };
  const std::vector<Run> runs = {{"serial_a", 1}, {"serial_b", 1}, {"threads_4", 4}, {"auto", 0}};
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& run : runs) {
    const auto result = run_sweep(config, SweepVariable::kSnrDb, values, run.threads);
    const fs::path table = dir / (std::string(run.name) + ".tsv");
    write_results_table(result, table);
    write_sweep_snapshot(result, snapshot_path_for(table));
    files.emplace_back(slurp(table), slurp(snapshot_path_for(table)));
  }
  for (std::size_t i = 1; i < runs.size(); ++i) {
    v.require(files[i] == files[0], std::string(runs[i].name) + " identical to " + runs[0].name);
  }
  v.require(!files[0].first.empty(), "results table nonempty");
  fs::remove_all(dir);
  return v;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "gradient correctness", 10, gradient_correctness},
      {2, "posterior oracle", 5, posterior_oracle},
      {3, "scalar hand-derived case", 1, scalar_case},
      {4, "EM monotonicity", 30, em_monotonicity},
      {5, "objective-expectation consistency", 10, objective_expectation},
      {6, "noiseless on-grid recovery", 120, on_grid_recovery},
      {7, "SNR trend and CP_SBL <= E_SBL at 10 dB", 1200, snr_trend},
      {8, "pilot-length trend", 1200, pilot_trend},
      {9, "path-count trend", 1200, path_trend},
      {10, "exact constants", 1, exact_constants},
      {11, "determinism", 300, determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    v.require(seconds < c.budget_seconds,
              "runtime " + fmt(seconds) + " s < " + fmt(c.budget_seconds) + " s");
    if (!v.pass) ++failures;
    std::printf("%s  criterion %2d  %-42s %8.2f s\n", v.pass ? "PASS" : "FAIL", c.id,
                c.title.c_str(), seconds);
    for (const auto& d : v.details) std::printf("        %s\n", d.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
