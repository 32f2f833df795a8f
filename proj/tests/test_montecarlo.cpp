#include <catch2/catch_amalgamated.hpp>
#include <algorithm>
#include <cmath>
#include <vector>

#include "alasso/exact_dist.hpp"
#include "alasso/montecarlo.hpp"
#include "oracles.hpp"

using namespace alasso;

TEST_CASE("build_design stacks scaled Cholesky blocks with X'X = n Omega") {
  // identity correlation: every block is sqrt(k) * I
  const Eigen::MatrixXd X0 = build_design(12, 4, 0.0);
  CHECK((X0.topRows(4) - 2.0 * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(((X0.transpose() * X0) - 12.0 * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);

  // rho = 0.5: the lower Cholesky factor of the 4x4 Toeplitz matrix has the
  // hand-computed rows (0.5, sqrt(3)/2, 0, 0) and (0.25, sqrt(3)/4, sqrt(3)/2, 0)
  const Eigen::MatrixXd X = build_design(100, 4, 0.5);
  const Eigen::MatrixXd L = (X.topRows(4) / 2.0).transpose();
  CHECK_THAT(L(1, 0), Catch::Matchers::WithinAbs(0.5, 1e-14));
  CHECK_THAT(L(1, 1), Catch::Matchers::WithinAbs(0.8660254037844386, 1e-14));
  CHECK(L(1, 2) == 0.0);
  CHECK(L(1, 3) == 0.0);
  CHECK_THAT(L(2, 0), Catch::Matchers::WithinAbs(0.25, 1e-14));
  CHECK_THAT(L(2, 1), Catch::Matchers::WithinAbs(0.4330127018922193, 1e-14));
  CHECK_THAT(L(2, 2), Catch::Matchers::WithinAbs(0.8660254037844386, 1e-14));

  const Eigen::MatrixXd omega = toeplitz_correlation(4, 0.5);
  CHECK(((X.transpose() * X) - 100.0 * omega).cwiseAbs().maxCoeff() < 1e-10 * 100.0);

  CHECK_THROWS_AS(build_design(10, 4, 0.5), std::domain_error);   // k does not divide n
  CHECK_THROWS_AS(build_design(12, 4, 1.0), std::domain_error);   // not positive definite
  CHECK_THROWS_AS(build_design(12, 4, -1.0), std::domain_error);
}

TEST_CASE("scaling constants reproduce the hand-computed values") {
  const Eigen::VectorXd s = scaling_constants(100, 4, 0.5);
  CHECK_THAT(s(0), Catch::Matchers::WithinAbs(std::sqrt(75.0), 1e-10));
  CHECK_THAT(s(1), Catch::Matchers::WithinAbs(std::sqrt(60.0), 1e-10));
  CHECK_THAT(s(2), Catch::Matchers::WithinAbs(std::sqrt(60.0), 1e-10));
  CHECK_THAT(s(3), Catch::Matchers::WithinAbs(std::sqrt(75.0), 1e-10));
  CHECK_THAT(3.0 * s(0), Catch::Matchers::WithinAbs(25.98076211353316, 1e-10));
  CHECK_THAT(1.5 * s(1), Catch::Matchers::WithinAbs(11.61895003862225, 1e-10));
  CHECK_THAT(s(2) / 10.0, Catch::Matchers::WithinAbs(0.7745966692414834, 1e-10));
  CHECK_THAT(s(3) / 10.0, Catch::Matchers::WithinAbs(0.8660254037844387, 1e-10));

  const Eigen::VectorXd id = scaling_constants(100, 4, 0.0);
  for (int j = 0; j < 4; ++j) CHECK_THAT(id(j), Catch::Matchers::WithinAbs(10.0, 1e-12));
}

TEST_CASE("kde_smooth validates input and recovers a known density") {
  CHECK_THROWS_AS(kde_smooth({}, 1.0), std::domain_error);
  CHECK_THROWS_AS(kde_smooth(std::vector<double>(10, 1.7), 1.0), std::domain_error);
  CHECK_THROWS_AS(kde_smooth({2.5}, 1.0), std::domain_error);

  Rng rng(808);
  std::vector<double> sample(10000);
  for (double& v : sample) v = rng.normal();
  const KdeGrid kde = kde_smooth(sample, 1.0);
  REQUIRE(kde.x.size() == 512);
  // density at 0 close to the standard normal value
  std::size_t nearest = 0;
  for (std::size_t i = 1; i < kde.x.size(); ++i)
    if (std::fabs(kde.x[i]) < std::fabs(kde.x[nearest])) nearest = i;
  CHECK_THAT(kde.density[nearest], Catch::Matchers::WithinAbs(0.3989422804014327, 0.05));

  // trapezoid mass close to the mass scale
  auto trapezoid = [](const KdeGrid& g) {
    double total = 0.0;
    for (std::size_t i = 1; i < g.x.size(); ++i)
      total += 0.5 * (g.density[i] + g.density[i - 1]) * (g.x[i] - g.x[i - 1]);
    return total;
  };
  CHECK_THAT(trapezoid(kde), Catch::Matchers::WithinAbs(1.0, 1e-3));

  const KdeGrid half = kde_smooth(sample, 0.5);
  for (std::size_t i = 0; i < half.density.size(); ++i)
    CHECK(half.density[i] == 0.5 * kde.density[i]);
}

TEST_CASE("fixed-tuning study finds the zero components with high frequency") {
  StudyConfig cfg;
  cfg.gamma = 0.0;
  cfg.tuning = TuningChoice::fixed_rule(PowerLawSequence(1.0, 1.0 / 3.0));
  cfg.replications = 1000;
  cfg.seed = 20240101;
  const StudyResult r = run_study(cfg);
  CHECK(r.solver_errors == 0);
  REQUIRE(r.marginals.size() == 4);
  CHECK(r.marginals[2].zero_frequency >= 0.95);
  CHECK(r.marginals[3].zero_frequency >= 0.95);
  // the large components are never zeroed out
  CHECK(r.marginals[0].zero_frequency == 0.0);
  CHECK(r.marginals[1].zero_frequency == 0.0);
  for (int j = 0; j < 4; ++j) {
    CHECK_THAT(r.marginals[static_cast<std::size_t>(j)].atom_location,
               Catch::Matchers::WithinAbs(-r.scaling(j) * r.theta[static_cast<std::size_t>(j)], 1e-12));
    // zero_frequency * replications is an exact count
    const double count = r.marginals[static_cast<std::size_t>(j)].zero_frequency * cfg.replications;
    CHECK_THAT(count, Catch::Matchers::WithinAbs(std::round(count), 1e-9));
  }
  // kde mass matches the nonzero fraction
  for (const auto& m : r.marginals) {
    if (m.kde.x.empty()) continue;
    double total = 0.0;
    for (std::size_t i = 1; i < m.kde.x.size(); ++i)
      total += 0.5 * (m.kde.density[i] + m.kde.density[i - 1]) * (m.kde.x[i] - m.kde.x[i - 1]);
    CHECK_THAT(total, Catch::Matchers::WithinAbs(1.0 - m.zero_frequency, 1e-3));
  }
}

TEST_CASE("cross-validated tuning zeroes the small components less often") {
  StudyConfig fixed;
  fixed.gamma = 0.0;
  fixed.tuning = TuningChoice::fixed_rule(PowerLawSequence(1.0, 1.0 / 3.0));
  fixed.replications = 300;
  fixed.seed = 555;
  fixed.with_kde = false;
  const StudyResult rf = run_study(fixed);

  StudyConfig cv = fixed;
  cv.tuning = TuningChoice::cross_validated();
  const StudyResult rc = run_study(cv);

  CHECK(rc.marginals[2].zero_frequency < rf.marginals[2].zero_frequency);
  CHECK(rc.marginals[3].zero_frequency < rf.marginals[3].zero_frequency);

  // cross-validated tuning values sit mostly below n^(-1/3)
  std::vector<double> mus;
  for (const auto& rec : rc.replications) mus.push_back(rec.mu_used);
  std::sort(mus.begin(), mus.end());
  CHECK(mus[mus.size() / 2] < std::pow(100.0, -1.0 / 3.0));
}

TEST_CASE("study reduces to the exact location-model law under k = 1") {
  StudyConfig cfg;
  cfg.n = 100;
  cfg.k = 1;
  cfg.rho = 0.0;
  cfg.theta_override = std::vector<double>{0.3};
  cfg.tuning = TuningChoice::fixed_rule(PowerLawSequence(1.0, 1.0 / 3.0));
  cfg.replications = 10000;
  cfg.seed = 31415;
  cfg.with_kde = false;
  const StudyResult r = run_study(cfg);

  std::vector<double> scaled;
  for (const auto& rec : r.replications) scaled.push_back(rec.centered_scaled[0]);
  const oracle::Ecdf ecdf(std::move(scaled));
  const LocationModel m(100, 0.3, std::pow(100.0, -1.0 / 3.0));
  double sup = 0.0;
  for (int i = 0; i <= 320; ++i) {
    const double x = -8.0 + 16.0 * i / 320.0;
    sup = std::max(sup, std::fabs(ecdf(x) - cdf_F(m, x)));
  }
  CHECK(sup < oracle::dkw_band(10000, 0.99));
}

TEST_CASE("studies are bit-identical under a fixed seed") {
  StudyConfig cfg;
  cfg.gamma = 1.0;
  cfg.tuning = TuningChoice::fixed_rule(PowerLawSequence(1.0, 1.0 / 3.0));
  cfg.replications = 200;
  cfg.seed = 777;
  const StudyResult a = run_study(cfg);
  const StudyResult b = run_study(cfg);
  REQUIRE(a.replications.size() == b.replications.size());
  for (std::size_t i = 0; i < a.replications.size(); ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(a.replications[i].estimate[static_cast<std::size_t>(j)] ==
            b.replications[i].estimate[static_cast<std::size_t>(j)]);
      CHECK(a.replications[i].centered_scaled[static_cast<std::size_t>(j)] ==
            b.replications[i].centered_scaled[static_cast<std::size_t>(j)]);
    }
  }
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(a.marginals[j].zero_frequency == b.marginals[j].zero_frequency);
    REQUIRE(a.marginals[j].kde.density.size() == b.marginals[j].kde.density.size());
    for (std::size_t i = 0; i < a.marginals[j].kde.density.size(); ++i)
      CHECK(a.marginals[j].kde.density[i] == b.marginals[j].kde.density[i]);
  }
}

TEST_CASE("zero frequencies are nondecreasing in the tuning parameter on common seeds") {
  std::vector<std::vector<double>> freqs;
  for (double mu : {0.05, 0.1, 0.2154434690031884, 0.46415888336127786}) {
    StudyConfig cfg;
    cfg.gamma = 1.0;
    cfg.tuning = TuningChoice::fixed_rule(PowerLawSequence(mu, 0.0));  // constant rule
    cfg.replications = 300;
    cfg.seed = 90210;
    cfg.with_kde = false;
    const StudyResult r = run_study(cfg);
    std::vector<double> f;
    for (const auto& m : r.marginals) f.push_back(m.zero_frequency);
    freqs.push_back(f);
  }
  for (std::size_t step = 1; step < freqs.size(); ++step)
    for (std::size_t j = 0; j < 4; ++j) CHECK(freqs[step][j] >= freqs[step - 1][j]);
}

TEST_CASE("small-but-nonzero components shift the nonzero mass left of the origin") {
  for (double gamma : {1.0, 2.0}) {
    StudyConfig cfg;
    cfg.gamma = gamma;
    cfg.tuning = TuningChoice::fixed_rule(PowerLawSequence(1.0, 1.0 / 3.0));
    cfg.replications = 500;
    cfg.seed = 6174;
    cfg.with_kde = false;
    const StudyResult r = run_study(cfg);
    for (int j : {2, 3}) {
      std::vector<double> vals = r.marginals[static_cast<std::size_t>(j)].nonzero_values;
      REQUIRE(vals.size() >= 10);
      std::sort(vals.begin(), vals.end());
      CHECK(vals[vals.size() / 2] < 0.0);
    }
  }
}

TEST_CASE("config validation") {
  StudyConfig cfg;
  cfg.k = 2;  // default theta pattern needs k = 4
  CHECK_THROWS_AS(run_study(cfg), std::domain_error);
  StudyConfig bad_len;
  bad_len.theta_override = std::vector<double>{1.0, 2.0};
  CHECK_THROWS_AS(run_study(bad_len), std::domain_error);
}
