#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "alasso/cdf_estimation.hpp"
#include "alasso/rng.hpp"
#include "oracles.hpp"

using namespace alasso;

TEST_CASE("oscillation closed form and small-mu degeneracy") {
  CHECK_THAT(oscillation(100, 0.1, 0.0), Catch::Matchers::WithinAbs(0.6826894921370859, 1e-12));
  CHECK(oscillation(100, 1e-8, 0.0) <= 1e-7);
  CHECK_THROWS_AS(oscillation(0, 0.1, 0.0), std::domain_error);
}

TEST_CASE("finite-delta oscillation converges to the closed form") {
  const std::int64_t n = 100;
  const double mu = 0.1, t = 0.0;
  const double closed = oscillation(n, mu, t);
  CHECK_THAT(oscillation_finite_delta(n, mu, t, 1e-6), Catch::Matchers::WithinAbs(closed, 1e-4));
  double prev_err = 1e300;
  for (double delta : {1e-2, 1e-4, 1e-6}) {
    const double err = std::fabs(oscillation_finite_delta(n, mu, t, delta) - closed);
    CHECK(err < prev_err);
    prev_err = err;
  }
  // also at a noncentral t
  const double closed2 = oscillation(n, mu, 0.7);
  CHECK_THAT(oscillation_finite_delta(n, mu, 0.7, 1e-6), Catch::Matchers::WithinAbs(closed2, 1e-4));
}

TEST_CASE("pretest estimator returns the matching pointwise limit") {
  const PowerLawSequence mu_cbrt(1.0, 1.0 / 3.0);
  const TuningRegime consistent = classify_tuning(mu_cbrt);
  const double mu100 = mu_cbrt.eval(100.0);

  // accept branch, consistent: point mass at zero
  CHECK(pretest_estimator(0.0, 100, mu100, 0.5, consistent) == 1.0);
  CHECK(pretest_estimator(0.0, 100, mu100, -0.5, consistent) == 0.0);

  // reject branch, consistent: plug-in shift
  CHECK_THAT(pretest_estimator(3.0, 100, mu100, 0.0, consistent),
             Catch::Matchers::WithinAbs(0.5614788222054572, 1e-12));

  // conservative proxy sqrt(n) mu = 1
  const PowerLawSequence mu_half(1.0, 0.5);
  const TuningRegime conservative = classify_tuning(mu_half);
  CHECK_THAT(pretest_estimator(0.0, 100, 0.1, 0.0, conservative),
             Catch::Matchers::WithinAbs(0.8413447460685429, 1e-12));
  // reject branch, conservative: plain standard normal
  CHECK_THAT(pretest_estimator(2.0, 100, 0.1, 0.3, conservative),
             Catch::Matchers::WithinAbs(phi_cdf(0.3), 1e-15));
}

TEST_CASE("bootstrap estimator degenerates to a step function on constant data") {
  const std::vector<double> zeros(50, 0.0);
  const CdfEstimatorSpec spec = CdfEstimatorSpec::bootstrap(10, 1);
  const PowerLawSequence rule(1.0, 1.0 / 3.0);
  CHECK(bootstrap_estimator(zeros, spec, rule, 0.5, 7) == 1.0);
  CHECK(bootstrap_estimator(zeros, spec, rule, 0.0, 7) == 1.0);
  CHECK(bootstrap_estimator(zeros, spec, rule, -0.5, 7) == 0.0);
  CHECK_THROWS_AS(bootstrap_estimator(zeros, CdfEstimatorSpec::bootstrap(50, 1), rule, 0.0, 7), std::domain_error);
}

TEST_CASE("bootstrap estimator is consistent far from the selection boundary") {
  const std::int64_t n = 100;
  const double theta = 3.0;
  const PowerLawSequence rule(1.0, 1.0 / 3.0);
  const double mu_n = rule.eval(static_cast<double>(n));
  const CdfEstimatorSpec spec = CdfEstimatorSpec::bootstrap(25, 2000);
  const LocationModel model(n, theta, mu_n);

  Rng rng(60001);
  std::vector<double> data(n);
  for (double& v : data) v = theta + rng.normal();
  for (double t : {-1.0, 0.0, 1.0}) {
    const double est = bootstrap_estimator(data, spec, rule, t, 60002);
    CHECK_THAT(est, Catch::Matchers::WithinAbs(cdf_F(model, t), 0.05));
  }
}

TEST_CASE("worst-case experiment validates its parameters") {
  WorstCaseConfig cfg;
  cfg.estimator = CdfEstimatorSpec::pretest();
  cfg.n = 100;
  cfg.mu_rule = PowerLawSequence(1.0, 0.5);  // mu = 0.1 at n = 100
  cfg.t = 0.0;
  cfg.c = 1.0;
  cfg.reps = 10;

  cfg.epsilon = 0.9;  // above the theory bound 0.3413...
  CHECK_THROWS_AS(worst_case_experiment(cfg), std::domain_error);
  cfg.epsilon = -0.1;
  CHECK_THROWS_AS(worst_case_experiment(cfg), std::domain_error);
  cfg.epsilon = 0.3;
  cfg.c = 0.0;  // needs c > |t| to bracket the oscillation point
  CHECK_THROWS_AS(worst_case_experiment(cfg), std::domain_error);
}

TEST_CASE("pretest estimator fails near the oscillation point") {
  WorstCaseConfig cfg;
  cfg.estimator = CdfEstimatorSpec::pretest();
  cfg.target = CdfTarget::F;
  cfg.n = 100;
  cfg.mu_rule = PowerLawSequence(1.0, 0.5);  // mu = 0.1 at n = 100
  cfg.t = 0.0;
  cfg.c = 1.0;
  cfg.epsilon = 0.3;
  cfg.grid_size = 41;
  cfg.reps = 1000;
  cfg.seed = 424242;

  const WorstCaseReport report = worst_case_experiment(cfg);
  CHECK(report.sup_failure_prob >= 0.45);
  CHECK(report.theory_epsilon_bound == oscillation(cfg.n, 0.1, cfg.t) / 2.0);
  CHECK(report.theta_grid.size() == 41);
  CHECK(report.failure_prob_by_theta.size() == 41);
  double max_prob = 0.0;
  for (double p : report.failure_prob_by_theta) max_prob = std::max(max_prob, p);
  CHECK(report.sup_failure_prob == max_prob);
  const double radius = cfg.c / 10.0;
  for (double theta : report.theta_grid) {
    CHECK(theta > -radius);
    CHECK(theta < radius);
  }
}

TEST_CASE("bootstrap estimator fails near the oscillation point") {
  WorstCaseConfig cfg;
  cfg.estimator = CdfEstimatorSpec::bootstrap(25, 300);
  cfg.target = CdfTarget::F;
  cfg.n = 100;
  cfg.mu_rule = PowerLawSequence(1.0, 0.5);
  cfg.t = 0.0;
  cfg.c = 1.0;
  cfg.epsilon = 0.3;
  cfg.grid_size = 21;
  cfg.reps = 400;
  cfg.seed = 5150;

  const WorstCaseReport report = worst_case_experiment(cfg);
  CHECK(report.sup_failure_prob >= 0.45);
  CHECK(report.subsample_size == 25);
  CHECK(report.n == 100);  // m/n reportable from the record
}

TEST_CASE("rescaled-cdf estimators fail near the rescaled oscillation point") {
  WorstCaseConfig cfg;
  cfg.estimator = CdfEstimatorSpec::pretest();
  cfg.target = CdfTarget::G;
  cfg.n = 100;
  cfg.mu_rule = PowerLawSequence(1.0, 1.0 / 3.0);  // consistent tuning
  cfg.t = 0.0;
  cfg.c = 1.0;
  cfg.epsilon = 0.4;
  cfg.grid_size = 41;
  cfg.reps = 1000;
  cfg.seed = 99;

  const WorstCaseReport report = worst_case_experiment(cfg);
  CHECK(report.sup_failure_prob >= 0.45);
  const double mu_n = cfg.mu_rule.eval(100.0);
  const double sn = 10.0;
  CHECK_THAT(report.theory_epsilon_bound,
             Catch::Matchers::WithinAbs((phi_cdf(sn * mu_n) - phi_cdf(-sn * mu_n)) / 2.0, 1e-15));
  for (double theta : report.theta_grid) {
    CHECK(theta > -cfg.c * mu_n);
    CHECK(theta < cfg.c * mu_n);
  }
}

TEST_CASE("rescaled cdf has trivially estimable tails beyond |t| = 1") {
  const PowerLawSequence mu(1.0, 1.0 / 3.0);
  for (double t : {1.25, -1.25}) {
    double prev_sup = 1e300;
    for (std::int64_t n : {100, 10000, 1000000}) {
      const double mu_n = mu.eval(static_cast<double>(n));
      double sup = 0.0;
      for (int i = 0; i <= 600; ++i) {
        const double theta = -3.0 + 0.01 * i;
        const LocationModel m(n, theta, mu_n);
        const double g = cdf_G(m, t);
        sup = std::max(sup, t > 1.0 ? std::fabs(g - 1.0) : std::fabs(g));
      }
      CHECK(sup < prev_sup);
      prev_sup = sup;
    }
    CHECK(prev_sup <= 0.02);
  }
}
