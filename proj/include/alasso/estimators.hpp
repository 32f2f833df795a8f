#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "alasso/rng.hpp"

namespace alasso {

// Penalized least squares with weights 1/|ls_j| on the l1 term:
//
//   (Y - X theta)'(Y - X theta) + 2 n mu^2 sum_j |theta_j| / |ls_j|
//
// In the Gaussian location model (and, componentwise, under any orthogonal
// design with X'X = n I) the minimizer has the closed form implemented by
// alasso_location().  General full-rank designs are solved by cyclic
// coordinate descent.

/// Closed-form estimate in the location model: 0 if |y_bar| <= mu, else
/// y_bar - mu^2/y_bar.  The boundary |y_bar| = mu maps to 0.
inline double alasso_location(double y_bar, double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::domain_error("alasso_location: mu must be positive");
  if (!std::isfinite(y_bar)) throw std::domain_error("alasso_location: y_bar must be finite");
  if (std::fabs(y_bar) <= mu) return 0.0;
  return y_bar - mu * mu / y_bar;
}

/// Hard-thresholding companion: 0 if |y_bar| <= mu, else y_bar.
inline double hard_threshold(double y_bar, double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::domain_error("hard_threshold: mu must be positive");
  if (!std::isfinite(y_bar)) throw std::domain_error("hard_threshold: y_bar must be finite");
  return std::fabs(y_bar) <= mu ? 0.0 : y_bar;
}

/// Location-model objective (per observation): (y_bar - t)^2 + 2 mu^2 |t| / |y_bar|.
inline double location_objective(double y_bar, double mu, double t) {
  const double r = y_bar - t;
  return r * r + 2.0 * mu * mu * std::fabs(t) / std::fabs(y_bar);
}

struct RegressionProblem {
  Eigen::MatrixXd design;    // n x k, full column rank
  Eigen::VectorXd response;  // length n
  double sigma = 1.0;

  RegressionProblem() = default;
  RegressionProblem(Eigen::MatrixXd X, Eigen::VectorXd y, double sigma_ = 1.0)
      : design(std::move(X)), response(std::move(y)), sigma(sigma_) {
    if (design.rows() != response.size())
      throw std::domain_error("RegressionProblem: response length must equal design row count");
    if (design.rows() < design.cols()) throw std::domain_error("RegressionProblem: need n >= k");
    if (!(sigma > 0.0)) throw std::domain_error("RegressionProblem: sigma must be positive");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(design);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 1e-10 * sv(0)) throw std::domain_error("RegressionProblem: design is rank deficient");
  }

  Eigen::Index n() const { return design.rows(); }
  Eigen::Index k() const { return design.cols(); }
};

struct AdaptiveLassoFit {
  Eigen::VectorXd estimate;
  Eigen::VectorXd ls_estimate;
  std::vector<bool> active_set;
  double mu = 0.0;
  std::int64_t iterations = 0;  // full coordinate cycles; 0 for closed form
};

/// Thrown when coordinate descent hits max_iter; carries the last iterate.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(std::string msg, AdaptiveLassoFit last)
      : std::runtime_error(std::move(msg)), last_fit(std::move(last)) {}
  AdaptiveLassoFit last_fit;
};

/// Weighted-l1 objective for a candidate theta.
inline double alasso_objective(const RegressionProblem& problem, const Eigen::VectorXd& ls, double mu,
                               const Eigen::VectorXd& theta) {
  const Eigen::VectorXd r = problem.response - problem.design * theta;
  double pen = 0.0;
  for (Eigen::Index i = 0; i < theta.size(); ++i) pen += std::fabs(theta(i)) / std::fabs(ls(i));
  return r.squaredNorm() + 2.0 * static_cast<double>(problem.n()) * mu * mu * pen;
}

inline Eigen::VectorXd least_squares(const RegressionProblem& problem) {
  return problem.design.colPivHouseholderQr().solve(problem.response);
}

namespace detail {

inline double soft_threshold(double z, double lambda) {
  if (z > lambda) return z - lambda;
  if (z < -lambda) return z + lambda;
  return 0.0;
}

}  // namespace detail

/// Coordinate-descent solver with the design-dependent pieces (Gram matrix,
/// X'Y, least-squares weights) precomputed, so a grid of tuning values can
/// be solved against one problem cheaply.
class AlassoSolver {
 public:
  explicit AlassoSolver(const RegressionProblem& problem)
      : problem_(&problem),
        ls_(least_squares(problem)),
        gram_(problem.design.transpose() * problem.design),
        xty_(problem.design.transpose() * problem.response) {
    for (Eigen::Index i = 0; i < ls_.size(); ++i) {
      if (std::fabs(ls_(i)) <= 1e-12)
        throw std::domain_error("AlassoSolver: least-squares component " + std::to_string(i) +
                                " is numerically zero; penalty weight is degenerate");
    }
  }

  const Eigen::VectorXd& ls_estimate() const { return ls_; }

  /// Cyclic coordinate descent (deterministic order 1..k, exact
  /// soft-threshold updates).  Stops when the largest coordinate change in a
  /// full cycle is below tol; throws ConvergenceError at max_iter.  The
  /// objective is nonincreasing across cycles; pass `objective_trace` to
  /// record it per cycle.
  AdaptiveLassoFit solve(double mu, double tol = 1e-10, std::int64_t max_iter = 100000,
                         std::vector<double>* objective_trace = nullptr) const {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw std::domain_error("AlassoSolver: mu must be positive");
    if (!(tol > 0.0)) throw std::domain_error("AlassoSolver: tol must be positive");
    if (max_iter < 1) throw std::domain_error("AlassoSolver: max_iter must be positive");

    const Eigen::Index k = ls_.size();
    const double n = static_cast<double>(problem_->n());
    Eigen::VectorXd lambda(k);
    for (Eigen::Index i = 0; i < k; ++i) lambda(i) = n * mu * mu / std::fabs(ls_(i));

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(k);
    std::int64_t cycles = 0;
    bool converged = false;
    while (cycles < max_iter) {
      double max_change = 0.0;
      for (Eigen::Index j = 0; j < k; ++j) {
        // unpenalized coordinate optimum times x_j'x_j
        const double g = xty_(j) - gram_.row(j).dot(theta) + gram_(j, j) * theta(j);
        const double updated = detail::soft_threshold(g, lambda(j)) / gram_(j, j);
        max_change = std::max(max_change, std::fabs(updated - theta(j)));
        theta(j) = updated;
      }
      ++cycles;
      if (objective_trace) objective_trace->push_back(alasso_objective(*problem_, ls_, mu, theta));
      if (max_change < tol) {
        converged = true;
        break;
      }
    }

    AdaptiveLassoFit fit;
    fit.estimate = theta;
    fit.ls_estimate = ls_;
    fit.active_set.resize(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) fit.active_set[static_cast<std::size_t>(i)] = theta(i) != 0.0;
    fit.mu = mu;
    fit.iterations = cycles;
    if (!converged) throw ConvergenceError("AlassoSolver: no convergence after max_iter cycles", fit);
    return fit;
  }

  /// Prediction for one design row.
  double predict(const Eigen::RowVectorXd& row, const AdaptiveLassoFit& fit) const { return row.dot(fit.estimate); }

 private:
  const RegressionProblem* problem_;
  Eigen::VectorXd ls_;
  Eigen::MatrixXd gram_;
  Eigen::VectorXd xty_;
};

/// One-shot general-design solve; see AlassoSolver::solve.
inline AdaptiveLassoFit alasso_general(const RegressionProblem& problem, double mu, double tol = 1e-10,
                                       std::int64_t max_iter = 100000,
                                       std::vector<double>* objective_trace = nullptr) {
  return AlassoSolver(problem).solve(mu, tol, max_iter, objective_trace);
}

/// Default cross-validation grid: 25 log-spaced points on [1e-3, 1].
inline std::vector<double> default_mu_grid() {
  std::vector<double> grid(25);
  for (int i = 0; i < 25; ++i) grid[static_cast<std::size_t>(i)] = std::pow(10.0, -3.0 + 3.0 * i / 24.0);
  return grid;
}

/// K-fold cross-validation over a mu grid: seeded random partition into
/// near-equal folds, mean-squared out-of-fold prediction error, ties broken
/// toward the larger mu (the sparser model).
inline double cross_validate_mu(const RegressionProblem& problem, int folds, const std::vector<double>& grid,
                                std::uint64_t seed) {
  if (folds < 2) throw std::domain_error("cross_validate_mu: folds must be >= 2");
  if (grid.empty()) throw std::domain_error("cross_validate_mu: empty grid");
  const Eigen::Index n = problem.n();
  if (static_cast<Eigen::Index>(folds) > n) throw std::domain_error("cross_validate_mu: more folds than rows");

  // Seeded random partition: shuffle row indices, deal them round-robin.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[static_cast<std::size_t>(rng.below(i))]);
  }

  std::vector<double> sse(grid.size(), 0.0);
  for (int fold = 0; fold < folds; ++fold) {
    std::vector<Eigen::Index> hold, train;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      (static_cast<int>(pos % static_cast<std::size_t>(folds)) == fold ? hold : train).push_back(order[pos]);
    }
    Eigen::MatrixXd Xt(static_cast<Eigen::Index>(train.size()), problem.k());
    Eigen::VectorXd yt(static_cast<Eigen::Index>(train.size()));
    for (std::size_t i = 0; i < train.size(); ++i) {
      Xt.row(static_cast<Eigen::Index>(i)) = problem.design.row(train[i]);
      yt(static_cast<Eigen::Index>(i)) = problem.response(train[i]);
    }
    const RegressionProblem sub(std::move(Xt), std::move(yt), problem.sigma);
    const AlassoSolver solver(sub);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const AdaptiveLassoFit fit = solver.solve(grid[g]);
      for (Eigen::Index row : hold) {
        const double err = problem.response(row) - problem.design.row(row).dot(fit.estimate);
        sse[g] += err * err;
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    if (sse[g] < sse[best] || (sse[g] == sse[best] && grid[g] > grid[best])) best = g;
  }
  return grid[best];
}

}  // namespace alasso
