#include <doctest.h>

#include <cmath>

#include "drsm/datagen.hpp"
#include "drsm/optimizer.hpp"

using namespace drsm;

namespace {

MixingMatrix half_half() {
  Eigen::MatrixXd w(2, 2);
  w << 0.5, 0.5, 0.5, 0.5;
  return make_mixing_matrix(w);
}

NetworkState random_state(int n, int d, int r, Rng& rng) {
  NetworkState s;
  for (int i = 0; i < n; ++i) s.points.push_back(random_stiefel(d, r, rng));
  return s;
}

double stacked_consensus_norm(const NetworkState& s) {
  const StiefelPoint xbar = ima(s);
  double sq = 0.0;
  for (const auto& p : s.points) sq += (p.matrix() - xbar.matrix()).squaredNorm();
  return std::sqrt(sq);
}

}  // namespace

TEST_CASE("schedule values") {
  const StepSchedule poly = StepSchedule::polynomial(0.05, 0.5);
  CHECK(poly.value(0) == doctest::Approx(0.05));
  CHECK(poly.value(4) == doctest::Approx(0.025));

  const StepSchedule geo = StepSchedule::geometric(0.05, 0.98);
  CHECK(geo.value(0) == doctest::Approx(0.05));
  const StepSchedule geo2 = StepSchedule::geometric(0.05, 0.5);
  CHECK(geo2.value(3) == doctest::Approx(0.00625));

  StepSchedule scaled = StepSchedule::polynomial(0.05, 0.5);
  scaled.scale = 100.0;
  CHECK(scaled.value(4) == doctest::Approx(2.5));

  for (const auto& s : {poly, geo}) {
    for (int k = 0; k < 50; ++k) CHECK(s.value(k + 1) <= s.value(k) + 1e-15);
  }

  CHECK_THROWS_AS(StepSchedule::polynomial(0.05, 1.5), PreconditionError);
  CHECK_THROWS_AS(StepSchedule::geometric(0.05, 1.0), PreconditionError);
  CHECK_THROWS_AS(StepSchedule::geometric(-0.1, 0.9), PreconditionError);
}

TEST_CASE("consensus potential") {
  Rng rng(3);
  NetworkState consensual = initial_state(6, 2, 2, 5);
  CHECK(consensus_potential(consensual, half_half()) == doctest::Approx(0.0));

  NetworkState s = random_state(2, 6, 2, rng);
  const double diff2 = (s.points[0].matrix() - s.points[1].matrix()).squaredNorm();
  CHECK(consensus_potential(s, half_half()) == doctest::Approx(0.25 * diff2));

  // Naive double-loop oracle on a bigger network.
  const MixingMatrix W =
      metropolis_weights(build_topology(TopologyKind::erdos_renyi, 6, 0.5, 2));
  NetworkState big = random_state(6, 8, 3, rng);
  double naive = 0.0;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      naive += W.W(i, j) * (big.points[i].matrix() - big.points[j].matrix()).squaredNorm();
    }
  }
  CHECK(consensus_potential(big, W) == doctest::Approx(0.25 * naive).epsilon(1e-13));
}

TEST_CASE("consensus gradient forms coincide on the manifold") {
  Rng rng(7);
  const MixingMatrix W = metropolis_weights(build_topology(TopologyKind::ring, 5));
  NetworkState s = random_state(5, 7, 3, rng);

  for (int i = 0; i < 5; ++i) {
    const TangentVector g = consensus_grad(s, W, i);
    Eigen::MatrixXd mix = Eigen::MatrixXd::Zero(7, 3);
    for (int j = 0; j < 5; ++j) mix += W.W(i, j) * s.points[j].matrix();
    const TangentVector alt = tangent_project(s.points[i], s.points[i].matrix() - mix);
    CHECK((g.data - alt.data).norm() <= 1e-10);
  }

  NetworkState consensual = initial_state(7, 3, 5, 1);
  for (int i = 0; i < 5; ++i) CHECK(consensus_grad(consensual, W, i).norm() == 0.0);
}

TEST_CASE("consensus gradient agrees with finite differences of the potential") {
  Rng rng(11);
  const MixingMatrix W = metropolis_weights(build_topology(TopologyKind::ring, 4));
  NetworkState s = random_state(4, 6, 2, rng);
  const double h = 1e-6;
  for (int i = 0; i < 4; ++i) {
    const TangentVector g = consensus_grad(s, W, i);
    const Eigen::MatrixXd dir = tangent_project(s.points[i], rng.gaussian_matrix(6, 2)).data;
    NetworkState plus = s, minus = s;
    plus.points[i] = polar_retract(s.points[i], h * dir);
    minus.points[i] = polar_retract(s.points[i], -h * dir);
    const double fd =
        (consensus_potential(plus, W) - consensus_potential(minus, W)) / (2.0 * h);
    CHECK(std::abs(fd - (g.data.array() * dir.array()).sum()) <= 1e-5);
  }
}

TEST_CASE("drcs step") {
  Rng rng(13);
  const MixingMatrix W = uniform_weights(build_topology(TopologyKind::complete, 3));

  NetworkState consensual = initial_state(6, 2, 3, 21);
  const NetworkState next = drcs_step(consensual, W, 0.5);
  for (int i = 0; i < 3; ++i) {
    CHECK((next.points[i].matrix() - consensual.points[i].matrix()).norm() <= 1e-13);
  }

  // Two nearby sphere agents move strictly closer under the complete graph.
  Eigen::VectorXd u(3), v(3);
  u << 1.0, 0.0, 0.0;
  v << std::cos(0.3), std::sin(0.3), 0.0;
  NetworkState pair;
  pair.points = {StiefelPoint::from_orthonormal(u),
                 StiefelPoint::from_orthonormal(v)};
  const MixingMatrix W2 = uniform_weights(build_topology(TopologyKind::complete, 2));
  const NetworkState stepped = drcs_step(pair, W2, 0.5);
  const double before = std::acos(pair.points[0].matrix().col(0).dot(
      pair.points[1].matrix().col(0)));
  const double after = std::acos(stepped.points[0].matrix().col(0).dot(
      stepped.points[1].matrix().col(0)));
  CHECK(after < before);

  // Near-consensus contraction is monotone over 50 steps.
  const MixingMatrix Wr = metropolis_weights(build_topology(TopologyKind::ring, 6));
  const StiefelPoint base = random_stiefel(8, 3, rng);
  NetworkState near;
  for (int i = 0; i < 6; ++i) {
    near.points.push_back(polar_retract(base, 0.05 * rng.gaussian_matrix(8, 3)));
  }
  double prev = stacked_consensus_norm(near);
  for (int k = 0; k < 50; ++k) {
    near = drcs_step(near, Wr, 0.5);
    const double cur = stacked_consensus_norm(near);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("drsm step degenerate reductions") {
  Rng rng(17);
  const auto [data, xtrue] = generate_dpcp(DpcpSpec{12, 3, 24, 36, 3, 5});
  DpcpProblem oracle(data);
  oracle.set_subspace_dim(3);
  const MixingMatrix W = uniform_weights(build_topology(TopologyKind::complete, 3));
  NetworkState s = random_state(3, 12, 3, rng);

  // beta = 0 equals the pure consensus step bitwise.
  const NetworkState a = drsm_step(s, W, oracle, 0.7, 0.0);
  const NetworkState b = drcs_step(s, W, 0.7);
  for (int i = 0; i < 3; ++i) {
    CHECK((a.points[i].matrix() - b.points[i].matrix()).norm() == 0.0);
  }

  // From a consensual start the consensus direction vanishes and the update
  // is the plain subgradient retraction, agent by agent.
  NetworkState consensual = initial_state(12, 3, 3, 77);
  const NetworkState stepped = drsm_step(consensual, W, oracle, 1.0, 0.1);
  for (int i = 0; i < 3; ++i) {
    const TangentVector g = riemannian_subgrad(oracle, i, consensual.points[i]);
    const StiefelPoint manual = polar_retract(consensual.points[i], -0.1 * g.data);
    CHECK((stepped.points[i].matrix() - manual.matrix()).norm() <= 1e-12);
  }
}

TEST_CASE("single agent run reduces to the centralized subgradient method") {
  const auto [data, xtrue] = generate_dpcp(DpcpSpec{12, 3, 20, 40, 1, 9});
  DpcpProblem oracle(data);
  oracle.set_subspace_dim(3);
  const MixingMatrix W = make_mixing_matrix(Eigen::MatrixXd::Ones(1, 1));
  NetworkState s = initial_state(12, 3, 1, 4);

  // Independently coded centralized loop.
  StiefelPoint x = s.points[0];
  const StepSchedule sched = StepSchedule::polynomial(0.1, 0.5);
  for (int k = 1; k <= 100; ++k) {
    s = drsm_step(s, W, oracle, 1.0, sched.value(k));
    const Eigen::MatrixXd eg = oracle.euclid_subgrad(0, x);
    const Eigen::MatrixXd sym = eg.transpose() * x.matrix();
    const Eigen::MatrixXd rg =
        eg - 0.5 * x.matrix() * (sym + sym.transpose());
    x = polar_retract(x, -sched.value(k) * rg);
    CHECK((s.points[0].matrix() - x.matrix()).norm() <= 1e-12);
  }
}

TEST_CASE("run emits one record per epoch and honors max_epochs = 0") {
  Rng rng(19);
  QuadraticProblem oracle(0.4 * rng.gaussian_matrix(6, 2), 3);
  const MixingMatrix W = uniform_weights(build_topology(TopologyKind::complete, 3));
  const NetworkState init = initial_state(6, 2, 3, 31);

  DrsmConfig cfg;
  cfg.schedule = StepSchedule::polynomial(0.1, 0.5);
  cfg.max_epochs = 0;
  MetricsPlan mp;
  mp.stride = 1;
  const auto only_first = run_collect(cfg, W, oracle, init, mp);
  REQUIRE(only_first.size() == 1);
  CHECK(only_first[0].epoch == 0);
  CHECK(only_first[0].consensus_error == 0.0);

  cfg.max_epochs = 25;
  mp.stride = 10;
  const auto records = run_collect(cfg, W, oracle, init, mp);
  REQUIRE(records.size() == 26);
  for (int k = 0; k <= 25; ++k) {
    CHECK(records[k].epoch == k);
    CHECK(records[k].beta == doctest::Approx(cfg.schedule.value(k)));
    CHECK(std::isnan(records[k].prox_gap) == (k % 10 != 0));
    CHECK(std::isnan(records[k].wall_ms));
  }
}

TEST_CASE("run is deterministic and parallel mode matches serial bitwise") {
  const auto [data, xtrue] = generate_dpcp(DpcpSpec{12, 3, 24, 36, 4, 15});
  DpcpProblem oracle(data);
  oracle.set_subspace_dim(3);
  const MixingMatrix W = metropolis_weights(build_topology(TopologyKind::ring, 4));
  const NetworkState init = initial_state(12, 3, 4, 8);

  DrsmConfig cfg;
  cfg.schedule = StepSchedule::polynomial(0.5, 0.5);
  cfg.max_epochs = 40;
  MetricsPlan mp;
  mp.compute_prox_gap = false;
  mp.subspace_truth = xtrue;

  const auto r1 = run_collect(cfg, W, oracle, init, mp);
  const auto r2 = run_collect(cfg, W, oracle, init, mp);
  cfg.parallel = true;
  const auto r3 = run_collect(cfg, W, oracle, init, mp);
  REQUIRE(r1.size() == r2.size());
  REQUIRE(r1.size() == r3.size());
  for (std::size_t i = 0; i < r1.size(); ++i) {
    CHECK(r1[i].consensus_error == r2[i].consensus_error);
    CHECK(r1[i].objective_at_ima == r2[i].objective_at_ima);
    CHECK(r1[i].recovery_error == r2[i].recovery_error);
    CHECK(r1[i].consensus_error == r3[i].consensus_error);
    CHECK(r1[i].objective_at_ima == r3[i].objective_at_ima);
    CHECK(r1[i].recovery_error == r3[i].recovery_error);
  }
}

TEST_CASE("consensual invariance with identical oracles") {
  Rng rng(23);
  QuadraticProblem oracle(0.4 * rng.gaussian_matrix(6, 2), 4);  // same target per agent
  const MixingMatrix W = uniform_weights(build_topology(TopologyKind::complete, 4));
  NetworkState s = initial_state(6, 2, 4, 3);
  const StepSchedule sched = StepSchedule::polynomial(0.2, 0.5);
  for (int k = 1; k <= 100; ++k) {
    s = drsm_step(s, W, oracle, 1.0, sched.value(k));
    for (int i = 1; i < 4; ++i) {
      CHECK((s.points[i].matrix() - s.points[0].matrix()).norm() <= 1e-12);
    }
  }
}

TEST_CASE("feasibility is preserved along a run") {
  const auto [data, xtrue] = generate_dpcp(DpcpSpec{12, 3, 24, 36, 4, 33});
  DpcpProblem oracle(data);
  oracle.set_subspace_dim(3);
  const MixingMatrix W = metropolis_weights(build_topology(TopologyKind::ring, 4));
  NetworkState s = initial_state(12, 3, 4, 2);
  const StepSchedule sched = StepSchedule::polynomial(1.0, 0.5);
  double worst = 0.0;
  for (int k = 1; k <= 500; ++k) {
    s = drsm_step(s, W, oracle, 1.0, sched.value(k));
    for (const auto& p : s.points) worst = std::max(worst, feasibility_error(p.matrix()));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("early stopping on consensus threshold") {
  Rng rng(29);
  QuadraticProblem oracle(0.4 * rng.gaussian_matrix(6, 2), 3);
  const MixingMatrix W = uniform_weights(build_topology(TopologyKind::complete, 3));
  NetworkState init;
  for (int i = 0; i < 3; ++i) init.points.push_back(random_stiefel(6, 2, rng));

  DrsmConfig cfg;
  cfg.schedule = StepSchedule::constant(0.0);
  cfg.max_epochs = 500;
  cfg.stop_consensus = 1e-12;
  MetricsPlan mp;
  mp.compute_prox_gap = false;
  int last_epoch = -1;
  const RunResult res = run(cfg, W, oracle, init, mp,
                            [&](const RunRecord& r) { last_epoch = r.epoch; });
  CHECK(res.stopped_early);
  CHECK(last_epoch < 500);
}
