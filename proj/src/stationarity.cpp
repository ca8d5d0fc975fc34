#include "drsm/stationarity.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace drsm {

StiefelPoint ima(const NetworkState& state) {
  if (state.points.empty()) throw PreconditionError("ima: empty state");
  // A consensual state is its own induced mean; skipping the projection keeps
  // the consensus error of consensual states (and the centralized baseline)
  // identically zero.
  const bool consensual = [&] {
    for (std::size_t i = 1; i < state.points.size(); ++i) {
      if (state.points[i].matrix() != state.points[0].matrix()) return false;
    }
    return true;
  }();
  if (consensual) return state.points[0];
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(state.rows(), state.cols());
  for (const auto& p : state.points) mean += p.matrix();
  mean /= static_cast<double>(state.agent_count());
  return project_to_manifold(mean);
}

double consensus_error(const NetworkState& state) {
  const StiefelPoint xbar = ima(state);
  double err = 0.0;
  for (const auto& p : state.points) err += (p.matrix() - xbar.matrix()).squaredNorm();
  return err / static_cast<double>(state.agent_count());
}

double max_prox_lambda(const ProblemOracle& oracle) {
  const double rho = oracle.weak_convexity_modulus();
  const double L = oracle.subgradient_bound();
  return std::min(1.0 / (rho + 3.0 * L), 1.0 / (2.0 * (rho + L)));
}

double default_prox_lambda(const ProblemOracle& oracle) {
  return 0.4 * max_prox_lambda(oracle);
}

ProxResult prox_point(const ProblemOracle& oracle, const StiefelPoint& x,
                      double lambda, const ProxSolverConfig& cfg) {
  if (!(lambda > 0.0 && lambda < max_prox_lambda(oracle))) {
    std::ostringstream os;
    os << "prox_point: lambda = " << lambda << " outside (0, "
       << max_prox_lambda(oracle) << ")";
    throw PreconditionError(os.str());
  }
  const double inv_lambda = 1.0 / lambda;
  const auto objective = [&](const StiefelPoint& y) {
    return oracle.value(y) + 0.5 * inv_lambda * (y.matrix() - x.matrix()).squaredNorm();
  };

  StiefelPoint y = x;
  StiefelPoint best = y;
  double best_obj = objective(y);
  const double mu0 = cfg.mu0 > 0.0 ? cfg.mu0 : lambda * oracle.subgradient_bound();
  double step = mu0;
  for (int j = 0; j < cfg.iterations; ++j) {
    const Eigen::MatrixXd g =
        oracle.global_subgrad(y) + inv_lambda * (y.matrix() - x.matrix());
    const TangentVector rg = tangent_project(y, g);
    y = polar_retract(y, -step * rg.data);
    step *= cfg.gamma;
    const double obj = objective(y);
    if (obj < best_obj) {
      best_obj = obj;
      best = y;
    }
  }
  return {best, best_obj};
}

double stationarity_surrogate(const ProblemOracle& oracle, const StiefelPoint& x,
                              double lambda, const ProxSolverConfig& cfg) {
  const ProxResult r = prox_point(oracle, x, lambda, cfg);
  return (r.point.matrix() - x.matrix()).squaredNorm() / (lambda * lambda);
}

double subspace_distance(const StiefelPoint& xbar, const StiefelPoint& xtrue) {
  if (xbar.rows() != xtrue.rows() || xbar.cols() != xtrue.cols()) {
    throw DimensionError("subspace_distance: shape mismatch");
  }
  // Procrustes: the minimizing Q is U V^T from the SVD of xbar^T xtrue.
  // Forming the residual directly avoids cancellation when the distance is
  // many orders below ||xbar||.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(xbar.matrix().transpose() * xtrue.matrix(),
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd q = svd.matrixU() * svd.matrixV().transpose();
  return (xbar.matrix() * q - xtrue.matrix()).norm();
}

double odl_recovery_error(const StiefelPoint& xbar, const StiefelPoint& a) {
  if (xbar.rows() != a.rows() || xbar.cols() != a.cols() || xbar.rows() != xbar.cols()) {
    throw DimensionError("odl_recovery_error: need matching square orthogonal matrices");
  }
  const Eigen::MatrixXd m = xbar.matrix().transpose() * a.matrix();
  double err = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    err += std::abs(m.row(i).cwiseAbs().maxCoeff() - 1.0);
  }
  return err;
}

StationarityReport assess_stationarity(const ProblemOracle& oracle,
                                       const NetworkState& state, double lambda,
                                       double epsilon,
                                       const ProxSolverConfig& cfg) {
  StationarityReport rep;
  rep.lambda = lambda > 0.0 ? lambda : default_prox_lambda(oracle);
  const StiefelPoint xbar = ima(state);
  double ce = 0.0;
  for (const auto& p : state.points) ce += (p.matrix() - xbar.matrix()).squaredNorm();
  rep.consensus_error = ce / static_cast<double>(state.agent_count());
  rep.objective_at_ima = oracle.value(xbar);
  rep.prox_gap = stationarity_surrogate(oracle, xbar, rep.lambda, cfg);
  rep.epsilon_stationary =
      epsilon > 0.0 && rep.consensus_error <= epsilon && rep.prox_gap <= epsilon;
  return rep;
}

}  // namespace drsm
