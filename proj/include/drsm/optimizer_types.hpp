#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "drsm/errors.hpp"
#include "drsm/manifold.hpp"

namespace drsm {

// Stacked variable of the network: one Stiefel point per agent.
struct NetworkState {
  std::vector<StiefelPoint> points;
  int epoch = 0;

  int agent_count() const { return static_cast<int>(points.size()); }
  Eigen::Index rows() const { return points.at(0).rows(); }
  Eigen::Index cols() const { return points.at(0).cols(); }
};

// Throws unless all points share (d, r) and satisfy the feasibility tolerance.
void validate_state(const NetworkState& state);

// beta_k schedules. Polynomial uses beta_k = c / k^p for k >= 1 and
// beta_0 = c (1-based epochs); geometric uses mu0 * gamma^k.
struct StepSchedule {
  enum class Kind { constant, polynomial, geometric };

  static StepSchedule constant(double beta);
  static StepSchedule polynomial(double c, double p = 0.5);
  static StepSchedule geometric(double mu0, double gamma);

  double value(int k) const;

  Kind kind = Kind::constant;
  double c = 0.0;      // polynomial amplitude
  double p = 0.5;      // polynomial exponent, in (0, 1]
  double mu0 = 0.0;    // geometric amplitude
  double gamma = 0.0;  // geometric ratio, in (0, 1)
  double beta = 0.0;   // constant value
  double scale = 1.0;  // multiplier applied to every value
};

// Per-epoch metrics row. NaN marks an absent optional value (blank CSV cell).
struct RunRecord {
  int epoch = 0;
  double beta = 0.0;
  double consensus_error = 0.0;
  double objective_at_ima = 0.0;
  double recovery_error = std::numeric_limits<double>::quiet_NaN();
  double prox_gap = std::numeric_limits<double>::quiet_NaN();
  double wall_ms = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace drsm
