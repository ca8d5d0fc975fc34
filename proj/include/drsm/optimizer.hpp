#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "drsm/graph.hpp"
#include "drsm/optimizer_types.hpp"
#include "drsm/problems.hpp"
#include "drsm/stationarity.hpp"

namespace drsm {

// phi^t(x) = (1/4) sum_i sum_j Wt_ij ||x_i - x_j||_F^2.
double consensus_potential(const NetworkState& state, const MixingMatrix& Wt);

// grad phi^t_i = x_i - sum_j Wt_ij x_j - (1/2) x_i sum_j Wt_ij (x_i-x_j)^T (x_i-x_j).
// Coincides with tangent_project(x_i, x_i - sum_j Wt_ij x_j) on the manifold.
TangentVector consensus_grad(const NetworkState& state, const MixingMatrix& Wt, int i);

// One consensus iteration: x_i <- R_{x_i}(-alpha grad phi^t_i).
NetworkState drcs_step(const NetworkState& state, const MixingMatrix& Wt, double alpha);

// One DRSM iteration: both directions evaluated at the same x_i,k and summed
// before a single retraction,
//   x_i <- R_{x_i}(-alpha grad phi^t_i - beta rsub_i).
NetworkState drsm_step(const NetworkState& state, const MixingMatrix& Wt,
                       const ProblemOracle& oracle, double alpha, double beta);

struct DrsmConfig {
  double alpha = 1.0;  // consensus stepsize, in (0, 1]
  int t = 1;           // consensus rounds per epoch (W^t)
  StepSchedule schedule;
  int max_epochs = 0;
  std::uint64_t seed = 0;  // provenance only; the loop itself draws no randomness
  bool parallel = false;   // evaluate agents on multiple threads within an epoch
  // Stop early when a metric drops to its threshold (ignored when <= 0).
  double stop_consensus = -1.0;
  double stop_stationarity = -1.0;
  // Warn on stderr after this many consecutive epochs of consensus-error growth.
  int warn_growth_epochs = 20;
};

struct MetricsPlan {
  int stride = 10;           // prox_gap cadence; other metrics run every epoch
  double lambda = -1.0;      // <= 0: default_prox_lambda(oracle)
  bool compute_prox_gap = true;
  ProxSolverConfig prox;
  // Ground truth for the recovery column, if any.
  std::optional<StiefelPoint> subspace_truth;  // subspace_distance(xbar, .)
  std::optional<StiefelPoint> dictionary_truth;  // odl_recovery_error(xbar, .)
  bool timing = false;  // fill wall_ms (off by default: keeps CSVs bit-stable)
};

using RecordSink = std::function<void(const RunRecord&)>;

struct RunResult {
  NetworkState final_state;
  int epochs_run = 0;
  bool stopped_early = false;
};

// Runs DRSM from `init`, emitting the epoch-0 row and one row per epoch.
// W is raised to config.t once up front.
RunResult run(const DrsmConfig& config, const MixingMatrix& W,
              const ProblemOracle& oracle, const NetworkState& init,
              const MetricsPlan& metrics, const RecordSink& sink);

std::vector<RunRecord> run_collect(const DrsmConfig& config, const MixingMatrix& W,
                                   const ProblemOracle& oracle,
                                   const NetworkState& init,
                                   const MetricsPlan& metrics);

}  // namespace drsm
