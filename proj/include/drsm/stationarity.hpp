#pragma once

#include <Eigen/Core>

#include "drsm/optimizer_types.hpp"
#include "drsm/problems.hpp"

namespace drsm {

// Induced arithmetic mean: projection of the agents' Euclidean average onto
// the manifold. Throws SingularityError when the mean is rank deficient.
StiefelPoint ima(const NetworkState& state);

// (1/n) sum_i ||x_i - xbar||_F^2.
double consensus_error(const NetworkState& state);

// Inner solver for the manifold proximal mapping: centralized Riemannian
// subgradient descent on f(y) + ||y - x||^2/(2 lambda), warm-started at x,
// geometric stepsizes mu0 * gamma^j with mu0 = lambda * L by default.
struct ProxSolverConfig {
  int iterations = 500;
  double gamma = 0.97;
  double mu0 = -1.0;  // <= 0: use lambda * L
};

struct ProxResult {
  StiefelPoint point;
  double objective;  // achieved value of f(y) + ||y - x||^2/(2 lambda)
};

// Admissible range for lambda: (0, min{1/(rho+3L), 1/(2(rho+L))}).
double max_prox_lambda(const ProblemOracle& oracle);
// Default: 0.4 * max_prox_lambda, strictly inside the admissible range.
double default_prox_lambda(const ProblemOracle& oracle);

// Approximate P_{lambda f}(x) for the global objective of `oracle`.
ProxResult prox_point(const ProblemOracle& oracle, const StiefelPoint& x,
                      double lambda, const ProxSolverConfig& cfg = {});

// (1/lambda^2) ||P_{lambda f}(x) - x||_F^2.
double stationarity_surrogate(const ProblemOracle& oracle, const StiefelPoint& x,
                              double lambda, const ProxSolverConfig& cfg = {});

// min over orthogonal Q of ||xbar Q - xtrue||_F, solved by Procrustes.
double subspace_distance(const StiefelPoint& xbar, const StiefelPoint& xtrue);

// sum_i | max_j |[xbar_i^T A]_j| - 1 | over columns xbar_i; zero iff xbar
// equals A up to a signed column permutation.
double odl_recovery_error(const StiefelPoint& xbar, const StiefelPoint& a);

struct StationarityReport {
  double consensus_error = 0.0;
  double prox_gap = 0.0;  // (1/lambda^2) ||P_{lambda f}(xbar) - xbar||^2
  double lambda = 0.0;
  double objective_at_ima = 0.0;
  bool epsilon_stationary = false;
};

// Evaluates both epsilon-stationarity conditions at the state's IMA.
StationarityReport assess_stationarity(const ProblemOracle& oracle,
                                       const NetworkState& state, double lambda,
                                       double epsilon,
                                       const ProxSolverConfig& cfg = {});

}  // namespace drsm
