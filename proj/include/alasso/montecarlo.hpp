#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "alasso/estimators.hpp"
#include "alasso/power_law.hpp"
#include "alasso/rng.hpp"

namespace alasso {

// Simulation study with correlated regressors: fixed block design with
// X'X = n*Omega for a Toeplitz correlation Omega_ij = rho^|i-j|, normal
// noise, estimation with fixed or cross-validated tuning, and per-component
// summaries of the centered and scaled estimates.

/// Toeplitz correlation matrix Omega_ij = rho^|i-j|.
inline Eigen::MatrixXd toeplitz_correlation(int k, double rho) {
  if (k < 1) throw std::domain_error("toeplitz_correlation: k must be >= 1");
  if (!(std::fabs(rho) < 1.0)) throw std::domain_error("toeplitz_correlation: need |rho| < 1");
  Eigen::MatrixXd omega(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) omega(i, j) = std::pow(rho, std::abs(i - j));
  return omega;
}

/// Fixed design of d = n/k stacked k x k blocks scaled so that X'X = n*Omega
/// holds exactly: each block is sqrt(k) times the transposed lower Cholesky
/// factor of Omega.
inline Eigen::MatrixXd build_design(std::int64_t n, int k, double rho) {
  if (k < 1 || n < 1) throw std::domain_error("build_design: n and k must be positive");
  if (n % k != 0) throw std::domain_error("build_design: k must divide n");
  const Eigen::MatrixXd omega = toeplitz_correlation(k, rho);
  Eigen::LLT<Eigen::MatrixXd> llt(omega);
  if (llt.info() != Eigen::Success) throw std::domain_error("build_design: correlation matrix not positive definite");
  const Eigen::MatrixXd block = std::sqrt(static_cast<double>(k)) * Eigen::MatrixXd(llt.matrixL()).transpose();
  const std::int64_t d = n / k;
  Eigen::MatrixXd X(n, k);
  for (std::int64_t b = 0; b < d; ++b) X.middleRows(b * k, k) = block;
  return X;
}

/// Diagonal scaling constants C_jj^(-1/2) with C = (n*Omega)^(-1); these
/// turn est_j - theta_j into the unit-variance scale of the plots.
inline Eigen::VectorXd scaling_constants(std::int64_t n, int k, double rho) {
  if (n < 1) throw std::domain_error("scaling_constants: n must be >= 1");
  const Eigen::MatrixXd omega = toeplitz_correlation(k, rho);
  const Eigen::MatrixXd cinv = static_cast<double>(n) * omega;            // C^(-1)
  const Eigen::MatrixXd c = cinv.llt().solve(Eigen::MatrixXd::Identity(k, k));
  Eigen::VectorXd out(k);
  for (int j = 0; j < k; ++j) out(j) = 1.0 / std::sqrt(c(j, j));
  return out;
}

struct KdeGrid {
  std::vector<double> x;
  std::vector<double> density;
  double bandwidth = 0.0;
};

/// Gaussian kernel density on a 512-point grid spanning the data range plus
/// three bandwidths, with Silverman's bandwidth
/// 0.9 * min(sd, IQR/1.34) * m^(-1/5) and the density multiplied by
/// mass_scale.  Throws if the values have zero spread.
inline KdeGrid kde_smooth(const std::vector<double>& values, double mass_scale) {
  if (values.empty()) throw std::domain_error("kde_smooth: empty input");
  if (!(mass_scale >= 0.0 && mass_scale <= 1.0)) throw std::domain_error("kde_smooth: mass_scale must be in [0,1]");
  const std::size_t m = values.size();

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(m);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = m > 1 ? std::sqrt(ss / static_cast<double>(m - 1)) : 0.0;

  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back()) throw std::domain_error("kde_smooth: degenerate bandwidth (zero spread)");
  auto quantile = [&sorted](double p) {
    const double idx = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(idx));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = idx - static_cast<double>(lo);
    return (1.0 - frac) * sorted[lo] + frac * sorted[hi];
  };
  const double iqr = quantile(0.75) - quantile(0.25);

  double spread = std::min(sd, iqr / 1.34);
  if (spread == 0.0) spread = sd;  // flat quartiles, positive sd
  const double h = 0.9 * spread * std::pow(static_cast<double>(m), -0.2);
  if (!(h > 0.0)) throw std::domain_error("kde_smooth: degenerate bandwidth (zero spread)");

  constexpr int kGridPoints = 512;
  KdeGrid grid;
  grid.bandwidth = h;
  grid.x.resize(kGridPoints);
  grid.density.resize(kGridPoints);
  const double lo = sorted.front() - 3.0 * h;
  const double hi = sorted.back() + 3.0 * h;
  const double inv_mh = mass_scale / (static_cast<double>(m) * h);
  for (int i = 0; i < kGridPoints; ++i) {
    const double x = lo + (hi - lo) * i / (kGridPoints - 1);
    double dens = 0.0;
    for (double v : sorted) dens += phi_pdf((x - v) / h);
    grid.x[static_cast<std::size_t>(i)] = x;
    grid.density[static_cast<std::size_t>(i)] = dens * inv_mh;
  }
  return grid;
}

struct TuningChoice {
  enum class Kind { fixed, cross_validated };
  Kind kind = Kind::fixed;
  PowerLawSequence mu_rule{1.0, 1.0 / 3.0};  // evaluated at n for fixed tuning
  int folds = 10;
  std::vector<double> grid = default_mu_grid();

  static TuningChoice fixed_rule(const PowerLawSequence& rule) {
    TuningChoice t;
    t.kind = Kind::fixed;
    t.mu_rule = rule;
    return t;
  }
  static TuningChoice cross_validated(int folds = 10, std::vector<double> grid = default_mu_grid()) {
    TuningChoice t;
    t.kind = Kind::cross_validated;
    t.folds = folds;
    t.grid = std::move(grid);
    return t;
  }
};

struct StudyConfig {
  std::int64_t n = 100;
  int k = 4;
  double rho = 0.5;
  double gamma = 0.0;
  std::optional<std::vector<double>> theta_override;  // default (3, 1.5, gamma/sqrt(n), gamma/sqrt(n))
  TuningChoice tuning;
  int replications = 1000;
  std::uint64_t seed = 0;
  bool with_kde = true;

  std::vector<double> theta() const {
    if (theta_override) {
      if (static_cast<int>(theta_override->size()) != k)
        throw std::domain_error("StudyConfig: theta override length must equal k");
      return *theta_override;
    }
    if (k != 4) throw std::domain_error("StudyConfig: default theta pattern requires k = 4");
    const double small = gamma / std::sqrt(static_cast<double>(n));
    return {3.0, 1.5, small, small};
  }
};

struct MarginalSummary {
  int component = 0;                  // 1-based
  double zero_frequency = 0.0;
  double atom_location = 0.0;         // -C_jj^(-1/2) theta_j
  std::vector<double> nonzero_values; // centered/scaled, replication order
  KdeGrid kde;                        // empty when not requested or degenerate
};

struct ReplicationRecord {
  int replication = 0;  // 1-based
  double mu_used = 0.0;
  std::vector<double> estimate;         // length k
  std::vector<double> centered_scaled;  // length k
};

struct StudyResult {
  StudyConfig config;
  Eigen::VectorXd scaling;  // C_jj^(-1/2)
  std::vector<double> theta;
  std::vector<MarginalSummary> marginals;
  std::vector<ReplicationRecord> replications;
  int solver_errors = 0;
};

/// Run the study: fixed design, fresh noise per replication from a derived
/// seed, fit with the configured tuning, aggregate per-component zero
/// frequencies and centered/scaled nonzero values (optionally smoothed).
inline StudyResult run_study(const StudyConfig& config) {
  if (config.replications < 1) throw std::domain_error("run_study: replications must be positive");
  const std::vector<double> theta = config.theta();
  const Eigen::MatrixXd X = build_design(config.n, config.k, config.rho);
  const Eigen::VectorXd scale = scaling_constants(config.n, config.k, config.rho);
  Eigen::VectorXd theta_vec(config.k);
  for (int j = 0; j < config.k; ++j) theta_vec(j) = theta[static_cast<std::size_t>(j)];
  const Eigen::VectorXd signal = X * theta_vec;

  StudyResult result;
  result.config = config;
  result.scaling = scale;
  result.theta = theta;
  result.replications.reserve(static_cast<std::size_t>(config.replications));

  std::vector<std::vector<double>> nonzero(static_cast<std::size_t>(config.k));
  std::vector<std::int64_t> zero_count(static_cast<std::size_t>(config.k), 0);
  std::int64_t completed = 0;

  Eigen::VectorXd y(config.n);
  for (int rep = 0; rep < config.replications; ++rep) {
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(rep)));
    for (Eigen::Index i = 0; i < config.n; ++i) y(i) = signal(i) + rng.normal();
    try {
      const RegressionProblem problem(X, y);
      double mu;
      if (config.tuning.kind == TuningChoice::Kind::fixed) {
        mu = config.tuning.mu_rule.eval(static_cast<double>(config.n));
      } else {
        mu = cross_validate_mu(problem, config.tuning.folds, config.tuning.grid,
                               derive_seed(config.seed, 0x10000000ULL + static_cast<std::uint64_t>(rep)));
      }
      const AdaptiveLassoFit fit = alasso_general(problem, mu);

      ReplicationRecord rec;
      rec.replication = rep + 1;
      rec.mu_used = mu;
      rec.estimate.resize(static_cast<std::size_t>(config.k));
      rec.centered_scaled.resize(static_cast<std::size_t>(config.k));
      for (int j = 0; j < config.k; ++j) {
        const double est = fit.estimate(j);
        const double cs = scale(j) * (est - theta_vec(j));
        rec.estimate[static_cast<std::size_t>(j)] = est;
        rec.centered_scaled[static_cast<std::size_t>(j)] = cs;
        if (est == 0.0)
          ++zero_count[static_cast<std::size_t>(j)];
        else
          nonzero[static_cast<std::size_t>(j)].push_back(cs);
      }
      result.replications.push_back(std::move(rec));
      ++completed;
    } catch (const std::exception&) {
      ++result.solver_errors;
    }
  }
  if (completed == 0) throw std::runtime_error("run_study: every replication failed");

  for (int j = 0; j < config.k; ++j) {
    MarginalSummary s;
    s.component = j + 1;
    s.zero_frequency = static_cast<double>(zero_count[static_cast<std::size_t>(j)]) / static_cast<double>(completed);
    s.atom_location = -scale(j) * theta_vec(j);
    s.nonzero_values = nonzero[static_cast<std::size_t>(j)];
    if (config.with_kde && s.nonzero_values.size() >= 2) {
      const auto [mn, mx] = std::minmax_element(s.nonzero_values.begin(), s.nonzero_values.end());
      if (*mn < *mx) s.kde = kde_smooth(s.nonzero_values, 1.0 - s.zero_frequency);
    }
    result.marginals.push_back(std::move(s));
  }
  return result;
}

}  // namespace alasso
