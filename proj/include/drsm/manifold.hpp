#pragma once

#include <Eigen/Core>

#include "drsm/errors.hpp"
#include "drsm/rng.hpp"

namespace drsm {

// Feasibility tolerance used when validating points on St(d,r).
double feasibility_tolerance();
void set_feasibility_tolerance(double tol);

// ||x^T x - I_r||_F of an arbitrary d x r matrix.
double feasibility_error(const Eigen::MatrixXd& x);

// A d x r matrix with orthonormal columns, d >= r >= 1.
class StiefelPoint {
 public:
  // Validates the orthonormality invariant against feasibility_tolerance().
  static StiefelPoint from_orthonormal(Eigen::MatrixXd m);

  const Eigen::MatrixXd& matrix() const { return m_; }
  Eigen::Index rows() const { return m_.rows(); }
  Eigen::Index cols() const { return m_.cols(); }

 private:
  explicit StiefelPoint(Eigen::MatrixXd m) : m_(std::move(m)) {}
  friend StiefelPoint polar_retract(const StiefelPoint&, const Eigen::MatrixXd&);
  friend StiefelPoint project_to_manifold(const Eigen::MatrixXd&);

  Eigen::MatrixXd m_;
};

// A matrix in the tangent space at `base`: base^T data + data^T base = 0.
struct TangentVector {
  Eigen::MatrixXd data;
  Eigen::MatrixXd base;

  double norm() const { return data.norm(); }
};

// P_{T_xM}(y) = y - x (y^T x + x^T y) / 2.
TangentVector tangent_project(const StiefelPoint& x, const Eigen::MatrixXd& y);

// Polar factor of x + xi, the point of St(d,r) nearest to x + xi.
// Throws SingularityError when the smallest singular value of x + xi is
// below the rank threshold (1e-12).
StiefelPoint polar_retract(const StiefelPoint& x, const Eigen::MatrixXd& xi);

// Nearest point of St(d,r) to an arbitrary full-rank matrix y (polar factor).
StiefelPoint project_to_manifold(const Eigen::MatrixXd& y);

// Haar-distributed point of St(d,r): polar factor of an i.i.d. Gaussian matrix.
StiefelPoint random_stiefel(Eigen::Index d, Eigen::Index r, Rng& rng);

}  // namespace drsm
