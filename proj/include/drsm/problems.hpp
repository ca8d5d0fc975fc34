#pragma once

#include <Eigen/Core>
#include <memory>
#include <utility>
#include <vector>

#include "drsm/manifold.hpp"

namespace drsm {

// Norm below which a residual counts as a kink and contributes the zero
// subgradient element.
constexpr double kKinkTolerance = 1e-12;

// Per-agent weakly convex objective: value and one Euclidean subgradient
// element. Riemannian subgradients are derived by tangent projection.
// Oracles are read-only after construction; concurrent evaluation is safe.
class ProblemOracle {
 public:
  virtual ~ProblemOracle() = default;

  virtual int agent_count() const = 0;
  virtual Eigen::Index rows() const = 0;  // d
  virtual Eigen::Index cols() const = 0;  // r

  virtual double evaluate(int agent, const StiefelPoint& x) const = 0;
  virtual Eigen::MatrixXd euclid_subgrad(int agent, const StiefelPoint& x) const = 0;

  // Weak convexity modulus rho (f_i + rho/2 ||.||^2 convex).
  virtual double weak_convexity_modulus() const = 0;
  // L with ||euclid_subgrad(i,x)||_F <= L for all feasible x; also a
  // Lipschitz constant of every f_i near the manifold.
  virtual double subgradient_bound() const = 0;

  // Global objective f(x) = (1/n) sum_i f_i(x) and a subgradient element of it.
  double value(const StiefelPoint& x) const;
  Eigen::MatrixXd global_subgrad(const StiefelPoint& x) const;
};

// Projection of the agent's Euclidean subgradient onto the tangent space.
TangentVector riemannian_subgrad(const ProblemOracle& oracle, int agent,
                                 const StiefelPoint& x);

// Mixed inlier/outlier columns, one d x N block per agent.
struct DpcpData {
  std::vector<Eigen::MatrixXd> blocks;
};

// Observation columns Y = A S, one d x N block per agent.
struct OdlData {
  std::vector<Eigen::MatrixXd> blocks;
};

// value = (1/N) sum_j ||y_j^T X||_2,
// subgrad = (1/N) sum_j y_j (y_j^T X)/||y_j^T X||_2 over non-kink terms.
std::pair<double, Eigen::MatrixXd> dpcp_value_subgrad(const DpcpData& data,
                                                      int agent,
                                                      const StiefelPoint& x);

// value = (1/N) sum_j ||y_j^T X||_1, subgrad = (1/N) sum_j y_j sgn(y_j^T X).
std::pair<double, Eigen::MatrixXd> odl_value_subgrad(const OdlData& data,
                                                     int agent,
                                                     const StiefelPoint& x);

class DpcpProblem : public ProblemOracle {
 public:
  explicit DpcpProblem(DpcpData data);

  int agent_count() const override { return static_cast<int>(data_.blocks.size()); }
  Eigen::Index rows() const override { return data_.blocks[0].rows(); }
  Eigen::Index cols() const override { return r_; }
  double evaluate(int agent, const StiefelPoint& x) const override;
  Eigen::MatrixXd euclid_subgrad(int agent, const StiefelPoint& x) const override;
  double weak_convexity_modulus() const override { return 0.0; }
  double subgradient_bound() const override { return max_col_norm_; }

  const DpcpData& data() const { return data_; }
  void set_subspace_dim(Eigen::Index r) { r_ = r; }

 private:
  DpcpData data_;
  Eigen::Index r_ = 1;
  double max_col_norm_ = 0.0;
};

class OdlProblem : public ProblemOracle {
 public:
  explicit OdlProblem(OdlData data);

  int agent_count() const override { return static_cast<int>(data_.blocks.size()); }
  Eigen::Index rows() const override { return data_.blocks[0].rows(); }
  Eigen::Index cols() const override { return data_.blocks[0].rows(); }
  double evaluate(int agent, const StiefelPoint& x) const override;
  Eigen::MatrixXd euclid_subgrad(int agent, const StiefelPoint& x) const override;
  double weak_convexity_modulus() const override { return 0.0; }
  double subgradient_bound() const override;

  const OdlData& data() const { return data_; }

 private:
  OdlData data_;
  double max_col_norm_ = 0.0;
};

// f_i(x) = 1/2 ||x - a_i||_F^2 with one target per agent.
class QuadraticProblem : public ProblemOracle {
 public:
  QuadraticProblem(Eigen::MatrixXd a, int n_agents);
  explicit QuadraticProblem(std::vector<Eigen::MatrixXd> targets);

  int agent_count() const override { return static_cast<int>(targets_.size()); }
  Eigen::Index rows() const override { return targets_[0].rows(); }
  Eigen::Index cols() const override { return targets_[0].cols(); }
  double evaluate(int agent, const StiefelPoint& x) const override;
  Eigen::MatrixXd euclid_subgrad(int agent, const StiefelPoint& x) const override;
  double weak_convexity_modulus() const override { return 0.0; }
  double subgradient_bound() const override;

  // Mean target; the global objective is 1/2 ||x - mean||^2 + const.
  Eigen::MatrixXd mean_target() const;

 private:
  std::vector<Eigen::MatrixXd> targets_;
};

// f_i(x) = ||x||_1 on the unit sphere St(d,1), identical across agents.
class L1SphereProblem : public ProblemOracle {
 public:
  L1SphereProblem(Eigen::Index d, int n_agents) : d_(d), n_(n_agents) {}

  int agent_count() const override { return n_; }
  Eigen::Index rows() const override { return d_; }
  Eigen::Index cols() const override { return 1; }
  double evaluate(int agent, const StiefelPoint& x) const override;
  Eigen::MatrixXd euclid_subgrad(int agent, const StiefelPoint& x) const override;
  double weak_convexity_modulus() const override { return 0.0; }
  double subgradient_bound() const override { return std::sqrt(static_cast<double>(d_)); }

 private:
  Eigen::Index d_;
  int n_;
};

// Prox of f = 1/2||.-a||^2: P_M(x + lambda a). Requires lambda < 1/||a||_F.
StiefelPoint quadratic_prox_closed_form(const Eigen::MatrixXd& a,
                                        const StiefelPoint& x, double lambda);

// Prox of the l1 norm on the sphere: normalized soft threshold.
// Requires 0 < lambda < 1/(3 sqrt(d)) and a nonzero thresholded vector.
Eigen::VectorXd l1_sphere_prox_closed_form(const Eigen::VectorXd& x, double lambda);

}  // namespace drsm
