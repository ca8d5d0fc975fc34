#include "drsm/problems.hpp"

#include <cmath>
#include <sstream>

namespace drsm {

namespace {

double max_column_norm(const std::vector<Eigen::MatrixXd>& blocks) {
  double m = 0.0;
  for (const auto& b : blocks) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      m = std::max(m, b.col(j).norm());
    }
  }
  return m;
}

void check_feasible_shape(const ProblemOracle& o, const StiefelPoint& x,
                          const char* who) {
  if (x.rows() != o.rows() || x.cols() != o.cols()) {
    std::ostringstream os;
    os << who << ": point is " << x.rows() << " x " << x.cols() << ", oracle expects "
       << o.rows() << " x " << o.cols();
    throw DimensionError(os.str());
  }
}

}  // namespace

double ProblemOracle::value(const StiefelPoint& x) const {
  double v = 0.0;
  for (int i = 0; i < agent_count(); ++i) v += evaluate(i, x);
  return v / agent_count();
}

Eigen::MatrixXd ProblemOracle::global_subgrad(const StiefelPoint& x) const {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(rows(), cols());
  for (int i = 0; i < agent_count(); ++i) g += euclid_subgrad(i, x);
  return g / agent_count();
}

TangentVector riemannian_subgrad(const ProblemOracle& oracle, int agent,
                                 const StiefelPoint& x) {
  check_feasible_shape(oracle, x, "riemannian_subgrad");
  return tangent_project(x, oracle.euclid_subgrad(agent, x));
}

std::pair<double, Eigen::MatrixXd> dpcp_value_subgrad(const DpcpData& data,
                                                      int agent,
                                                      const StiefelPoint& x) {
  const Eigen::MatrixXd& y = data.blocks.at(agent);
  const Eigen::Index n_cols = y.cols();
  const Eigen::MatrixXd p = y.transpose() * x.matrix();  // N x r
  double value = 0.0;
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(p.rows(), p.cols());
  for (Eigen::Index j = 0; j < p.rows(); ++j) {
    const double nrm = p.row(j).norm();
    value += nrm;
    if (nrm > kKinkTolerance) u.row(j) = p.row(j) / nrm;
  }
  const double inv_n = 1.0 / static_cast<double>(n_cols);
  return {value * inv_n, (y * u) * inv_n};
}

std::pair<double, Eigen::MatrixXd> odl_value_subgrad(const OdlData& data,
                                                     int agent,
                                                     const StiefelPoint& x) {
  const Eigen::MatrixXd& y = data.blocks.at(agent);
  const Eigen::MatrixXd p = y.transpose() * x.matrix();  // N x d
  const double value = p.array().abs().sum();
  const Eigen::MatrixXd sgn =
      (p.array() > 0.0).cast<double>() - (p.array() < 0.0).cast<double>();
  const double inv_n = 1.0 / static_cast<double>(y.cols());
  return {value * inv_n, (y * sgn) * inv_n};
}

DpcpProblem::DpcpProblem(DpcpData data) : data_(std::move(data)) {
  if (data_.blocks.empty()) throw PreconditionError("DpcpProblem: no agents");
  max_col_norm_ = max_column_norm(data_.blocks);
}

double DpcpProblem::evaluate(int agent, const StiefelPoint& x) const {
  return dpcp_value_subgrad(data_, agent, x).first;
}

Eigen::MatrixXd DpcpProblem::euclid_subgrad(int agent, const StiefelPoint& x) const {
  return dpcp_value_subgrad(data_, agent, x).second;
}

OdlProblem::OdlProblem(OdlData data) : data_(std::move(data)) {
  if (data_.blocks.empty()) throw PreconditionError("OdlProblem: no agents");
  max_col_norm_ = max_column_norm(data_.blocks);
}

double OdlProblem::evaluate(int agent, const StiefelPoint& x) const {
  return odl_value_subgrad(data_, agent, x).first;
}

Eigen::MatrixXd OdlProblem::euclid_subgrad(int agent, const StiefelPoint& x) const {
  return odl_value_subgrad(data_, agent, x).second;
}

double OdlProblem::subgradient_bound() const {
  return std::sqrt(static_cast<double>(rows())) * max_col_norm_;
}

QuadraticProblem::QuadraticProblem(Eigen::MatrixXd a, int n_agents)
    : targets_(static_cast<std::size_t>(n_agents), a) {
  if (n_agents < 1) throw PreconditionError("QuadraticProblem: need n >= 1");
}

QuadraticProblem::QuadraticProblem(std::vector<Eigen::MatrixXd> targets)
    : targets_(std::move(targets)) {
  if (targets_.empty()) throw PreconditionError("QuadraticProblem: no agents");
}

double QuadraticProblem::evaluate(int agent, const StiefelPoint& x) const {
  return 0.5 * (x.matrix() - targets_.at(agent)).squaredNorm();
}

Eigen::MatrixXd QuadraticProblem::euclid_subgrad(int agent, const StiefelPoint& x) const {
  return x.matrix() - targets_.at(agent);
}

double QuadraticProblem::subgradient_bound() const {
  double max_a = 0.0;
  for (const auto& a : targets_) max_a = std::max(max_a, a.norm());
  // ||x - a|| <= sqrt(r) + ||a|| on the manifold.
  return std::sqrt(static_cast<double>(cols())) + max_a;
}

Eigen::MatrixXd QuadraticProblem::mean_target() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows(), cols());
  for (const auto& a : targets_) m += a;
  return m / static_cast<double>(targets_.size());
}

double L1SphereProblem::evaluate(int, const StiefelPoint& x) const {
  return x.matrix().array().abs().sum();
}

Eigen::MatrixXd L1SphereProblem::euclid_subgrad(int, const StiefelPoint& x) const {
  const auto& m = x.matrix();
  return ((m.array() > 0.0).cast<double>() - (m.array() < 0.0).cast<double>()).matrix();
}

StiefelPoint quadratic_prox_closed_form(const Eigen::MatrixXd& a,
                                        const StiefelPoint& x, double lambda) {
  if (!(lambda > 0.0)) throw PreconditionError("quadratic_prox: need lambda > 0");
  const double an = a.norm();
  if (an > 0.0 && lambda >= 1.0 / an) {
    throw PreconditionError("quadratic_prox: need lambda < 1/||a||_F");
  }
  return project_to_manifold(x.matrix() + lambda * a);
}

Eigen::VectorXd l1_sphere_prox_closed_form(const Eigen::VectorXd& x, double lambda) {
  const double d = static_cast<double>(x.size());
  if (!(lambda > 0.0 && lambda < 1.0 / (3.0 * std::sqrt(d)))) {
    throw PreconditionError("l1_sphere_prox: need 0 < lambda < 1/(3 sqrt(d))");
  }
  Eigen::VectorXd t(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double mag = std::abs(x(i)) - lambda;
    t(i) = mag > 0.0 ? (x(i) > 0.0 ? mag : -mag) : 0.0;
  }
  const double nrm = t.norm();
  if (nrm == 0.0) {
    throw PreconditionError("l1_sphere_prox: input fully thresholded");
  }
  return t / nrm;
}

}  // namespace drsm
