#include "drsm/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>
#include <thread>

namespace drsm {

void validate_state(const NetworkState& state) {
  if (state.points.empty()) throw PreconditionError("NetworkState: no agents");
  const Eigen::Index d = state.rows();
  const Eigen::Index r = state.cols();
  for (const auto& p : state.points) {
    if (p.rows() != d || p.cols() != r) {
      throw DimensionError("NetworkState: points disagree on (d, r)");
    }
    const double err = feasibility_error(p.matrix());
    if (err > feasibility_tolerance()) {
      std::ostringstream os;
      os << "NetworkState: infeasible point, ||x^T x - I||_F = " << err;
      throw PreconditionError(os.str());
    }
  }
}

StepSchedule StepSchedule::constant(double beta) {
  if (!(beta >= 0.0)) throw PreconditionError("StepSchedule: need beta >= 0");
  StepSchedule s;
  s.kind = Kind::constant;
  s.beta = beta;
  return s;
}

StepSchedule StepSchedule::polynomial(double c, double p) {
  if (!(c > 0.0)) throw PreconditionError("StepSchedule: need c > 0");
  if (!(p > 0.0 && p <= 1.0)) throw PreconditionError("StepSchedule: need p in (0,1]");
  StepSchedule s;
  s.kind = Kind::polynomial;
  s.c = c;
  s.p = p;
  return s;
}

StepSchedule StepSchedule::geometric(double mu0, double gamma) {
  if (!(mu0 > 0.0)) throw PreconditionError("StepSchedule: need mu0 > 0");
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw PreconditionError("StepSchedule: need gamma in (0,1)");
  }
  StepSchedule s;
  s.kind = Kind::geometric;
  s.mu0 = mu0;
  s.gamma = gamma;
  return s;
}

double StepSchedule::value(int k) const {
  if (k < 0) throw PreconditionError("StepSchedule: need k >= 0");
  double v = 0.0;
  switch (kind) {
    case Kind::constant:
      v = beta;
      break;
    case Kind::polynomial:
      v = k == 0 ? c : c / std::pow(static_cast<double>(k), p);
      break;
    case Kind::geometric:
      v = mu0 * std::pow(gamma, k);
      break;
  }
  return v * scale;
}

double consensus_potential(const NetworkState& state, const MixingMatrix& Wt) {
  const int n = state.agent_count();
  if (Wt.n() != n) throw DimensionError("consensus_potential: W size != agent count");
  double phi = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      phi += Wt.W(i, j) * (state.points[i].matrix() - state.points[j].matrix()).squaredNorm();
    }
  }
  return 0.25 * phi;
}

namespace {

Eigen::MatrixXd mixed_point(const NetworkState& state, const MixingMatrix& Wt, int i) {
  Eigen::MatrixXd mix = Eigen::MatrixXd::Zero(state.rows(), state.cols());
  for (int j = 0; j < state.agent_count(); ++j) {
    mix += Wt.W(i, j) * state.points[j].matrix();
  }
  return mix;
}

Eigen::MatrixXd consensus_grad_matrix(const NetworkState& state,
                                      const MixingMatrix& Wt, int i) {
  const Eigen::MatrixXd& xi = state.points[i].matrix();
  const Eigen::Index r = state.cols();
  Eigen::MatrixXd mix = Eigen::MatrixXd::Zero(state.rows(), r);
  Eigen::MatrixXd corr = Eigen::MatrixXd::Zero(r, r);
  for (int j = 0; j < state.agent_count(); ++j) {
    const double w = Wt.W(i, j);
    mix += w * state.points[j].matrix();
    const Eigen::MatrixXd diff = xi - state.points[j].matrix();
    corr += w * (diff.transpose() * diff);
  }
  return xi - mix - 0.5 * xi * corr;
}

// One agent's DRSM update; beta = 0 reduces to the pure consensus step.
StiefelPoint agent_step(const NetworkState& state, const MixingMatrix& Wt,
                        const ProblemOracle* oracle, int i, double alpha,
                        double beta) {
  Eigen::MatrixXd direction = -alpha * consensus_grad_matrix(state, Wt, i);
  if (oracle != nullptr && beta != 0.0) {
    direction -= beta * riemannian_subgrad(*oracle, i, state.points[i]).data;
  }
  return polar_retract(state.points[i], direction);
}

NetworkState step_all(const NetworkState& state, const MixingMatrix& Wt,
                      const ProblemOracle* oracle, double alpha, double beta,
                      bool parallel) {
  const int n = state.agent_count();
  if (Wt.n() != n) throw DimensionError("step: W size != agent count");
  std::vector<StiefelPoint> next;
  next.reserve(n);
  if (!parallel || n < 2) {
    for (int i = 0; i < n; ++i) next.push_back(agent_step(state, Wt, oracle, i, alpha, beta));
  } else {
    std::vector<std::optional<StiefelPoint>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    const int workers = std::min<int>(n, std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int i = w; i < n; i += workers) {
          try {
            slots[i] = agent_step(state, Wt, oracle, i, alpha, beta);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    for (int i = 0; i < n; ++i) {
      if (errors[i]) std::rethrow_exception(errors[i]);
      next.push_back(std::move(*slots[i]));
    }
  }
  NetworkState out{std::move(next), state.epoch + 1};
  return out;
}

}  // namespace

TangentVector consensus_grad(const NetworkState& state, const MixingMatrix& Wt, int i) {
  if (Wt.n() != state.agent_count()) {
    throw DimensionError("consensus_grad: W size != agent count");
  }
  return TangentVector{consensus_grad_matrix(state, Wt, i), state.points[i].matrix()};
}

NetworkState drcs_step(const NetworkState& state, const MixingMatrix& Wt, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw PreconditionError("drcs_step: need alpha in (0,1]");
  }
  return step_all(state, Wt, nullptr, alpha, 0.0, false);
}

NetworkState drsm_step(const NetworkState& state, const MixingMatrix& Wt,
                       const ProblemOracle& oracle, double alpha, double beta) {
  if (beta < 0.0) throw PreconditionError("drsm_step: need beta >= 0");
  return step_all(state, Wt, &oracle, alpha, beta, false);
}

RunResult run(const DrsmConfig& config, const MixingMatrix& W,
              const ProblemOracle& oracle, const NetworkState& init,
              const MetricsPlan& metrics, const RecordSink& sink) {
  if (!(config.alpha > 0.0 && config.alpha <= 1.0)) {
    throw PreconditionError("run: need alpha in (0,1]");
  }
  if (config.t < 1) throw PreconditionError("run: need t >= 1");
  validate_state(init);
  if (W.n() != init.agent_count() || W.n() != oracle.agent_count()) {
    throw DimensionError("run: W, state, and oracle disagree on agent count");
  }

  const MixingMatrix Wt = matrix_power(W, config.t);
  const double lambda =
      metrics.lambda > 0.0 ? metrics.lambda : default_prox_lambda(oracle);

  NetworkState state = init;
  state.epoch = 0;
  double prev_ce = -1.0;
  int growth_streak = 0;
  bool warned = false;
  RunResult result;

  using clock = std::chrono::steady_clock;
  auto last_tick = clock::now();

  for (int k = 0;; ++k) {
    RunRecord rec;
    rec.epoch = k;
    rec.beta = config.schedule.value(k);

    const StiefelPoint xbar = ima(state);
    double ce = 0.0;
    for (const auto& p : state.points) ce += (p.matrix() - xbar.matrix()).squaredNorm();
    rec.consensus_error = ce / state.agent_count();
    rec.objective_at_ima = oracle.value(xbar);
    if (metrics.subspace_truth) {
      rec.recovery_error = subspace_distance(xbar, *metrics.subspace_truth);
    } else if (metrics.dictionary_truth) {
      rec.recovery_error = odl_recovery_error(xbar, *metrics.dictionary_truth);
    }
    const bool stride_epoch = metrics.stride > 0 && k % metrics.stride == 0;
    if (metrics.compute_prox_gap && stride_epoch) {
      rec.prox_gap = stationarity_surrogate(oracle, xbar, lambda, metrics.prox);
    }
    if (metrics.timing) {
      const auto now = clock::now();
      rec.wall_ms = std::chrono::duration<double, std::milli>(now - last_tick).count();
      last_tick = now;
    }
    if (sink) sink(rec);

    if (prev_ce >= 0.0 && rec.consensus_error > prev_ce) {
      ++growth_streak;
    } else {
      growth_streak = 0;
    }
    prev_ce = rec.consensus_error;
    if (!warned && config.warn_growth_epochs > 0 &&
        growth_streak >= config.warn_growth_epochs) {
      std::cerr << "warning: consensus error grew for " << growth_streak
                << " consecutive epochs at epoch " << k
                << "; alpha may exceed the stable range for this graph\n";
      warned = true;
    }

    const bool stop_ce =
        config.stop_consensus > 0.0 && rec.consensus_error <= config.stop_consensus;
    const bool stop_stat = config.stop_stationarity > 0.0 && stride_epoch &&
                           !std::isnan(rec.prox_gap) &&
                           rec.prox_gap <= config.stop_stationarity;
    if (k >= config.max_epochs || stop_ce || stop_stat) {
      result.stopped_early = k < config.max_epochs;
      result.epochs_run = k;
      break;
    }

    try {
      state = step_all(state, Wt, &oracle, config.alpha,
                       config.schedule.value(k + 1), config.parallel);
    } catch (const Error& e) {
      std::ostringstream os;
      os << "run: aborted at epoch " << (k + 1) << ": " << e.what();
      throw Error(os.str());
    }
  }
  result.final_state = std::move(state);
  return result;
}

std::vector<RunRecord> run_collect(const DrsmConfig& config, const MixingMatrix& W,
                                   const ProblemOracle& oracle,
                                   const NetworkState& init,
                                   const MetricsPlan& metrics) {
  std::vector<RunRecord> records;
  records.reserve(config.max_epochs + 1);
  run(config, W, oracle, init, metrics, [&](const RunRecord& r) { records.push_back(r); });
  return records;
}

}  // namespace drsm
