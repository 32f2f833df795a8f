#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <stdexcept>
#include <string>
#include <vector>

#include "alasso/asymptotics.hpp"
#include "alasso/exact_dist.hpp"
#include "alasso/rng.hpp"

namespace alasso {

// Estimating the cdf of the centered/scaled estimate at a point t is
// intrinsically hard: as theta crosses -t/sqrt(n) the true cdf jumps by
// Phi(t + sqrt(n) mu) - Phi(t - sqrt(n) mu), and no estimator can track that
// jump.  This module provides two concrete estimators (pre-test plug-in and
// m-out-of-n bootstrap) and a worst-case experiment that measures their
// failure probability over a theta grid concentrated at the jump.

/// Oscillation of the cdf at t as theta crosses -t/sqrt(n):
/// Phi(t + sqrt(n) mu) - Phi(t - sqrt(n) mu).
inline double oscillation(std::int64_t n, double mu, double t) {
  if (n < 1 || !(mu > 0.0)) throw std::domain_error("oscillation: need n >= 1 and mu > 0");
  const double h = std::sqrt(static_cast<double>(n)) * mu;
  return phi_cdf(t + h) - phi_cdf(t - h);
}

/// Finite-delta version: |F at theta(-delta) - F at theta(delta)| with
/// theta(delta) = -(t + delta)/sqrt(n); converges to oscillation() as
/// delta decreases to 0.
inline double oscillation_finite_delta(std::int64_t n, double mu, double t, double delta) {
  if (!(delta > 0.0)) throw std::domain_error("oscillation_finite_delta: delta must be positive");
  const double sn = std::sqrt(static_cast<double>(n));
  const LocationModel lo(n, -(t - delta) / sn, mu);
  const LocationModel hi(n, -(t + delta) / sn, mu);
  return std::fabs(cdf_F(lo, t) - cdf_F(hi, t));
}

struct CdfEstimatorSpec {
  enum class Kind { pretest_plugin, m_out_of_n_bootstrap };
  Kind kind = Kind::pretest_plugin;
  double pretest_threshold_exponent = 0.25;  // reject theta = 0 when |y_bar| > n^(-1/4)
  std::int64_t subsample_size = 0;           // m < n (bootstrap only)
  int bootstrap_reps = 0;                    // (bootstrap only)

  static CdfEstimatorSpec pretest(double threshold_exponent = 0.25) {
    CdfEstimatorSpec s;
    s.kind = Kind::pretest_plugin;
    s.pretest_threshold_exponent = threshold_exponent;
    return s;
  }
  static CdfEstimatorSpec bootstrap(std::int64_t m, int reps) {
    if (m < 1) throw std::domain_error("CdfEstimatorSpec: subsample size must be positive");
    if (reps < 1) throw std::domain_error("CdfEstimatorSpec: bootstrap_reps must be positive");
    CdfEstimatorSpec s;
    s.kind = Kind::m_out_of_n_bootstrap;
    s.subsample_size = m;
    s.bootstrap_reps = reps;
    return s;
  }
};

/// Pre-test plug-in estimate of the cdf of sqrt(n)*(est - theta) at t: test
/// theta = 0 against |y_bar| > n^(-1/4) and return the pointwise limit
/// formula matching the outcome.  In the conservative branch the tuning
/// limit is replaced by its finite-n proxy sqrt(n)*mu_n.
inline double pretest_estimator(double sample_mean, std::int64_t n, double mu, double t, const TuningRegime& regime,
                                double threshold_exponent = 0.25) {
  const double nn = static_cast<double>(n);
  const double sn = std::sqrt(nn);
  const bool accept_zero = std::fabs(sample_mean) <= std::pow(nn, -threshold_exponent);
  if (regime.kind == TuningKind::consistent) {
    if (accept_zero) return t >= 0.0 ? 1.0 : 0.0;  // point mass at 0
    return phi_cdf(t + sn * mu * mu / sample_mean);
  }
  if (accept_zero)
    return LimitDistribution::conservative_mixture(0.0, sn * mu, "pretest accept branch").cdf(t);
  return phi_cdf(t);
}

/// Pre-test plug-in estimate of the cdf of (est - theta)/mu at t, built from
/// the rescaled point-mass limits with zeta replaced by y_bar/mu.
inline double pretest_estimator_rescaled(double sample_mean, std::int64_t n, double mu, double t,
                                         double threshold_exponent = 0.25) {
  const double nn = static_cast<double>(n);
  const bool accept_zero = std::fabs(sample_mean) <= std::pow(nn, -threshold_exponent);
  if (accept_zero) return t >= 0.0 ? 1.0 : 0.0;
  const double zeta_hat = sample_mean / mu;
  const double loc = std::fabs(zeta_hat) < 1.0 ? -zeta_hat : -1.0 / zeta_hat;
  return t >= loc ? 1.0 : 0.0;
}

/// m-out-of-n bootstrap estimate of the cdf of sqrt(n)*(est - theta) at t:
/// resample subsamples of size m with replacement, recompute the estimate
/// with the tuning value the rule gives at m, and return the empirical
/// fraction of sqrt(m)*(est_m - est_n) at or below t.
inline double bootstrap_estimator(const std::vector<double>& data, const CdfEstimatorSpec& spec,
                                  const PowerLawSequence& mu_rule, double t, std::uint64_t seed) {
  if (spec.kind != CdfEstimatorSpec::Kind::m_out_of_n_bootstrap)
    throw std::domain_error("bootstrap_estimator: spec is not a bootstrap spec");
  const std::int64_t n = static_cast<std::int64_t>(data.size());
  const std::int64_t m = spec.subsample_size;
  if (m >= n) throw std::domain_error("bootstrap_estimator: need subsample size m < n");
  const double mu_n = mu_rule.eval(static_cast<double>(n));
  const double mu_m = mu_rule.eval(static_cast<double>(m));

  double sum = 0.0;
  for (double v : data) sum += v;
  const double full_est = alasso_location(sum / static_cast<double>(n), mu_n);

  Rng rng(seed);
  const double sqrt_m = std::sqrt(static_cast<double>(m));
  int count = 0;
  for (int rep = 0; rep < spec.bootstrap_reps; ++rep) {
    double s = 0.0;
    for (std::int64_t i = 0; i < m; ++i) s += data[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n)))];
    const double sub_est = alasso_location(s / static_cast<double>(m), mu_m);
    if (sqrt_m * (sub_est - full_est) <= t) ++count;
  }
  return static_cast<double>(count) / spec.bootstrap_reps;
}

/// Bootstrap estimate of the rescaled cdf ((est - theta)/mu at t), using the
/// statistic (est_m - est_n)/mu_m.
inline double bootstrap_estimator_rescaled(const std::vector<double>& data, const CdfEstimatorSpec& spec,
                                           const PowerLawSequence& mu_rule, double t, std::uint64_t seed) {
  if (spec.kind != CdfEstimatorSpec::Kind::m_out_of_n_bootstrap)
    throw std::domain_error("bootstrap_estimator_rescaled: spec is not a bootstrap spec");
  const std::int64_t n = static_cast<std::int64_t>(data.size());
  const std::int64_t m = spec.subsample_size;
  if (m >= n) throw std::domain_error("bootstrap_estimator_rescaled: need subsample size m < n");
  const double mu_n = mu_rule.eval(static_cast<double>(n));
  const double mu_m = mu_rule.eval(static_cast<double>(m));

  double sum = 0.0;
  for (double v : data) sum += v;
  const double full_est = alasso_location(sum / static_cast<double>(n), mu_n);

  Rng rng(seed);
  int count = 0;
  for (int rep = 0; rep < spec.bootstrap_reps; ++rep) {
    double s = 0.0;
    for (std::int64_t i = 0; i < m; ++i) s += data[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n)))];
    const double sub_est = alasso_location(s / static_cast<double>(m), mu_m);
    if ((sub_est - full_est) / mu_m <= t) ++count;
  }
  return static_cast<double>(count) / spec.bootstrap_reps;
}

enum class CdfTarget { F, G };

struct WorstCaseConfig {
  CdfEstimatorSpec estimator;
  CdfTarget target = CdfTarget::F;
  std::int64_t n = 100;
  PowerLawSequence mu_rule;  // mu at sample size n is mu_rule.eval(n)
  double t = 0.0;
  double c = 1.0;        // grid spans (-c/sqrt(n), c/sqrt(n)) for F, (-c mu, c mu) for G
  double epsilon = 0.3;  // failure threshold; must be below the theory bound
  int grid_size = 41;
  int reps = 4000;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct WorstCaseReport {
  CdfTarget target = CdfTarget::F;
  std::string estimator_name;
  std::int64_t n = 0;
  double mu_at_n = 0.0;
  double t = 0.0;
  double c = 0.0;
  double epsilon = 0.0;
  std::int64_t subsample_size = 0;  // 0 for pretest
  int bootstrap_reps = 0;
  int reps = 0;
  std::uint64_t seed = 0;
  std::vector<double> theta_grid;
  std::vector<double> failure_prob_by_theta;
  double sup_failure_prob = 0.0;
  double theory_epsilon_bound = 0.0;
};

namespace detail {

/// grid_size points in the open interval (-radius, radius), concentrated
/// geometrically around `center` (where the cdf jump sits); includes the
/// center itself.
inline std::vector<double> oscillation_grid(double center, double radius, int grid_size) {
  std::vector<double> grid;
  grid.push_back(center);
  const int per_side = (grid_size - 1) / 2;
  const int extra = (grid_size - 1) - 2 * per_side;  // odd remainder goes right
  const double d_min = 1e-6 * radius;
  auto fill_side = [&](double sign, int count) {
    const double cap = sign > 0 ? radius - center : center + radius;
    const double d_max = 0.98 * cap;
    for (int j = 0; j < count; ++j) {
      const double frac = count == 1 ? 1.0 : static_cast<double>(j) / (count - 1);
      grid.push_back(center + sign * d_min * std::pow(d_max / d_min, frac));
    }
  };
  fill_side(-1.0, per_side);
  fill_side(+1.0, per_side + extra);
  std::sort(grid.begin(), grid.end());
  return grid;
}

}  // namespace detail

/// Monte Carlo worst-case failure experiment: for each theta on a grid
/// concentrated around the oscillation point, estimate
/// P(|estimate of cdf at t - true cdf at t| > epsilon) and report the grid
/// maximum next to the theoretical bound the failure range comes from.
inline WorstCaseReport worst_case_experiment(const WorstCaseConfig& cfg) {
  if (cfg.n < 2) throw std::domain_error("worst_case_experiment: n must be >= 2");
  if (!(cfg.c > std::fabs(cfg.t))) throw std::domain_error("worst_case_experiment: requires c > |t|");
  if (cfg.grid_size < 3) throw std::domain_error("worst_case_experiment: grid_size must be >= 3");
  if (cfg.reps < 1) throw std::domain_error("worst_case_experiment: reps must be positive");

  const double nn = static_cast<double>(cfg.n);
  const double sn = std::sqrt(nn);
  const double mu = cfg.mu_rule.eval(nn);

  double bound;
  if (cfg.target == CdfTarget::F) {
    bound = oscillation(cfg.n, mu, cfg.t) / 2.0;
  } else {
    bound = (phi_cdf(sn * mu * (cfg.t + 1.0)) - phi_cdf(sn * mu * (cfg.t - 1.0))) / 2.0;
  }
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < bound))
    throw std::domain_error("worst_case_experiment: epsilon outside (0, " + std::to_string(bound) +
                            "), the failure range the bound certifies");

  const bool is_f = cfg.target == CdfTarget::F;
  const double radius = is_f ? cfg.c / sn : cfg.c * mu;
  const double center = is_f ? -cfg.t / sn : -cfg.t * mu;
  const std::vector<double> grid = detail::oscillation_grid(center, radius, cfg.grid_size);

  const bool bootstrap = cfg.estimator.kind == CdfEstimatorSpec::Kind::m_out_of_n_bootstrap;
  if (bootstrap && cfg.estimator.subsample_size >= cfg.n)
    throw std::domain_error("worst_case_experiment: bootstrap subsample size must be below n");
  // Only the F-target pretest needs the tuning regime (its two accept-branch
  // formulas differ); classify lazily so flat tuning rules stay usable with
  // the other estimators.
  TuningRegime regime;
  if (!bootstrap && is_f) regime = classify_tuning(cfg.mu_rule);

  auto failure_prob_at = [&](std::size_t gi) {
    const double theta = grid[gi];
    const LocationModel model(cfg.n, theta, mu);
    const double truth = is_f ? cdf_F(model, cfg.t) : cdf_G(model, cfg.t);
    int failures = 0;
    std::vector<double> data(static_cast<std::size_t>(cfg.n));
    for (int rep = 0; rep < cfg.reps; ++rep) {
      const std::uint64_t rep_seed = derive_seed(cfg.seed, gi * static_cast<std::size_t>(cfg.reps) + rep);
      Rng rng(rep_seed);
      double sum = 0.0;
      for (auto& v : data) {
        v = theta + rng.normal();
        sum += v;
      }
      const double y_bar = sum / nn;
      double est;
      if (bootstrap) {
        const std::uint64_t boot_seed = derive_seed(rep_seed, 1);
        est = is_f ? bootstrap_estimator(data, cfg.estimator, cfg.mu_rule, cfg.t, boot_seed)
                   : bootstrap_estimator_rescaled(data, cfg.estimator, cfg.mu_rule, cfg.t, boot_seed);
      } else {
        est = is_f ? pretest_estimator(y_bar, cfg.n, mu, cfg.t, regime, cfg.estimator.pretest_threshold_exponent)
                   : pretest_estimator_rescaled(y_bar, cfg.n, mu, cfg.t, cfg.estimator.pretest_threshold_exponent);
      }
      if (std::fabs(est - truth) > cfg.epsilon) ++failures;
    }
    return static_cast<double>(failures) / cfg.reps;
  };

  std::vector<double> probs(grid.size(), 0.0);
  const int threads = std::max(1, cfg.threads);
  if (threads == 1) {
    for (std::size_t gi = 0; gi < grid.size(); ++gi) probs[gi] = failure_prob_at(gi);
  } else {
    std::vector<std::future<void>> futures;
    std::size_t chunk = (grid.size() + static_cast<std::size_t>(threads) - 1) / static_cast<std::size_t>(threads);
    for (int w = 0; w < threads; ++w) {
      const std::size_t lo = static_cast<std::size_t>(w) * chunk;
      const std::size_t hi = std::min(grid.size(), lo + chunk);
      if (lo >= hi) break;
      futures.push_back(std::async(std::launch::async, [&, lo, hi]() {
        for (std::size_t gi = lo; gi < hi; ++gi) probs[gi] = failure_prob_at(gi);
      }));
    }
    for (auto& f : futures) f.get();
  }

  WorstCaseReport report;
  report.target = cfg.target;
  report.estimator_name = bootstrap ? "m_out_of_n_bootstrap" : "pretest_plugin";
  report.n = cfg.n;
  report.mu_at_n = mu;
  report.t = cfg.t;
  report.c = cfg.c;
  report.epsilon = cfg.epsilon;
  report.subsample_size = bootstrap ? cfg.estimator.subsample_size : 0;
  report.bootstrap_reps = bootstrap ? cfg.estimator.bootstrap_reps : 0;
  report.reps = cfg.reps;
  report.seed = cfg.seed;
  report.theta_grid = grid;
  report.failure_prob_by_theta = probs;
  report.sup_failure_prob = *std::max_element(probs.begin(), probs.end());
  report.theory_epsilon_bound = bound;
  return report;
}

}  // namespace alasso
