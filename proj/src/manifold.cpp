#include "drsm/manifold.hpp"

#include <Eigen/SVD>
#include <atomic>
#include <sstream>

namespace drsm {

namespace {

std::atomic<double> g_feas_tol{1e-10};

constexpr double kRankThreshold = 1e-12;

Eigen::MatrixXd polar_factor(const Eigen::MatrixXd& m, const char* who) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.singularValues()(m.cols() - 1) < kRankThreshold) {
    std::ostringstream os;
    os << who << ": matrix is rank deficient (sigma_min = "
       << svd.singularValues()(m.cols() - 1) << "), polar factor not unique";
    throw SingularityError(os.str());
  }
  return svd.matrixU() * svd.matrixV().transpose();
}

}  // namespace

double feasibility_tolerance() { return g_feas_tol.load(); }

void set_feasibility_tolerance(double tol) { g_feas_tol.store(tol); }

double feasibility_error(const Eigen::MatrixXd& x) {
  const Eigen::Index r = x.cols();
  return (x.transpose() * x - Eigen::MatrixXd::Identity(r, r)).norm();
}

StiefelPoint StiefelPoint::from_orthonormal(Eigen::MatrixXd m) {
  if (m.rows() < m.cols() || m.cols() < 1) {
    std::ostringstream os;
    os << "StiefelPoint: need d >= r >= 1, got " << m.rows() << " x " << m.cols();
    throw DimensionError(os.str());
  }
  const double err = feasibility_error(m);
  if (err > feasibility_tolerance()) {
    std::ostringstream os;
    os << "StiefelPoint: columns are not orthonormal, ||x^T x - I||_F = " << err;
    throw PreconditionError(os.str());
  }
  return StiefelPoint(std::move(m));
}

TangentVector tangent_project(const StiefelPoint& x, const Eigen::MatrixXd& y) {
  if (y.rows() != x.rows() || y.cols() != x.cols()) {
    std::ostringstream os;
    os << "tangent_project: shape mismatch, x is " << x.rows() << " x " << x.cols()
       << " but y is " << y.rows() << " x " << y.cols();
    throw DimensionError(os.str());
  }
  const Eigen::MatrixXd s = y.transpose() * x.matrix();
  return TangentVector{y - 0.5 * x.matrix() * (s + s.transpose()), x.matrix()};
}

StiefelPoint polar_retract(const StiefelPoint& x, const Eigen::MatrixXd& xi) {
  if (xi.rows() != x.rows() || xi.cols() != x.cols()) {
    std::ostringstream os;
    os << "polar_retract: shape mismatch, x is " << x.rows() << " x " << x.cols()
       << " but xi is " << xi.rows() << " x " << xi.cols();
    throw DimensionError(os.str());
  }
  return StiefelPoint(polar_factor(x.matrix() + xi, "polar_retract"));
}

StiefelPoint project_to_manifold(const Eigen::MatrixXd& y) {
  if (y.rows() < y.cols() || y.cols() < 1) {
    std::ostringstream os;
    os << "project_to_manifold: need d >= r >= 1, got " << y.rows() << " x " << y.cols();
    throw DimensionError(os.str());
  }
  return StiefelPoint(polar_factor(y, "project_to_manifold"));
}

StiefelPoint random_stiefel(Eigen::Index d, Eigen::Index r, Rng& rng) {
  return project_to_manifold(rng.gaussian_matrix(d, r));
}

}  // namespace drsm
