#include <doctest.h>

#include <cmath>

#include "drsm/datagen.hpp"
#include "drsm/stationarity.hpp"

using namespace drsm;

namespace {

struct ZeroProblem : ProblemOracle {
  Eigen::Index d, r;
  ZeroProblem(Eigen::Index d_, Eigen::Index r_) : d(d_), r(r_) {}
  int agent_count() const override { return 1; }
  Eigen::Index rows() const override { return d; }
  Eigen::Index cols() const override { return r; }
  double evaluate(int, const StiefelPoint&) const override { return 0.0; }
  Eigen::MatrixXd euclid_subgrad(int, const StiefelPoint&) const override {
    return Eigen::MatrixXd::Zero(d, r);
  }
  double weak_convexity_modulus() const override { return 0.0; }
  double subgradient_bound() const override { return 0.0; }
};

NetworkState two_sphere_state() {
  Eigen::MatrixXd e1(2, 1), e2(2, 1);
  e1 << 1.0, 0.0;
  e2 << 0.0, 1.0;
  NetworkState s;
  s.points = {StiefelPoint::from_orthonormal(e1), StiefelPoint::from_orthonormal(e2)};
  return s;
}

}  // namespace

TEST_CASE("ima of consensual and two-agent states") {
  const NetworkState consensual = initial_state(6, 2, 4, 3);
  CHECK((ima(consensual).matrix() - consensual.points[0].matrix()).norm() == 0.0);

  const StiefelPoint xbar = ima(two_sphere_state());
  CHECK(xbar.matrix()(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(xbar.matrix()(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("ima minimizes total squared distance over sampled candidates") {
  Rng rng(3);
  const StiefelPoint base = random_stiefel(7, 2, rng);
  NetworkState s;
  for (int i = 0; i < 5; ++i) {
    s.points.push_back(polar_retract(base, 0.1 * rng.gaussian_matrix(7, 2)));
  }
  const StiefelPoint xbar = ima(s);
  const auto total = [&](const StiefelPoint& y) {
    double t = 0.0;
    for (const auto& p : s.points) t += (y.matrix() - p.matrix()).squaredNorm();
    return t;
  };
  const double at_ima = total(xbar);
  for (int i = 0; i < 200; ++i) {
    CHECK(at_ima <= total(random_stiefel(7, 2, rng)) + 1e-10);
  }
  for (int i = 0; i < 200; ++i) {
    CHECK(at_ima <= total(polar_retract(xbar, 0.05 * rng.gaussian_matrix(7, 2))) + 1e-10);
  }
}

TEST_CASE("consensus error values") {
  const NetworkState consensual = initial_state(5, 2, 3, 1);
  CHECK(consensus_error(consensual) == 0.0);

  CHECK(consensus_error(two_sphere_state()) ==
        doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));

  Rng rng(5);
  NetworkState s;
  for (int i = 0; i < 4; ++i) s.points.push_back(random_stiefel(6, 2, rng));
  const StiefelPoint xbar = ima(s);
  double naive = 0.0;
  for (const auto& p : s.points) naive += (p.matrix() - xbar.matrix()).squaredNorm();
  naive /= 4.0;
  CHECK(consensus_error(s) == doctest::Approx(naive).epsilon(1e-14));
}

TEST_CASE("prox_point matches the quadratic closed form") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd a = 0.5 * rng.gaussian_matrix(8, 3);
    QuadraticProblem problem(a, 1);
    const double lambda = default_prox_lambda(problem);
    const StiefelPoint x = random_stiefel(8, 3, rng);
    const ProxResult res = prox_point(problem, x, lambda);
    const StiefelPoint closed = quadratic_prox_closed_form(a, x, lambda);
    CHECK((res.point.matrix() - closed.matrix()).norm() <= 1e-4);
  }
}

TEST_CASE("prox_point matches the l1 sphere closed form") {
  Rng rng(11);
  L1SphereProblem problem(16, 1);
  const double lambda = 0.02;
  for (int trial = 0; trial < 20; ++trial) {
    const StiefelPoint x = random_stiefel(16, 1, rng);
    const ProxResult res = prox_point(problem, x, lambda);
    const Eigen::VectorXd closed = l1_sphere_prox_closed_form(x.matrix().col(0), lambda);
    CHECK((res.point.matrix().col(0) - closed).norm() <= 1e-4);
  }
}

TEST_CASE("prox_point of the zero objective returns the input") {
  Rng rng(13);
  ZeroProblem problem(6, 2);
  const StiefelPoint x = random_stiefel(6, 2, rng);
  const ProxResult res = prox_point(problem, x, 0.1);
  CHECK((res.point.matrix() - x.matrix()).norm() == 0.0);
}

TEST_CASE("prox_point validates the lambda range") {
  Rng rng(17);
  QuadraticProblem problem(rng.gaussian_matrix(5, 2), 1);
  const StiefelPoint x = random_stiefel(5, 2, rng);
  CHECK_THROWS_AS(prox_point(problem, x, max_prox_lambda(problem) * 1.01),
                  PreconditionError);
  CHECK_THROWS_AS(prox_point(problem, x, 0.0), PreconditionError);
}

TEST_CASE("stationarity surrogate") {
  Rng rng(19);

  // Strict local minimizer: a proportional to x makes x the prox fixed point.
  const StiefelPoint x = random_stiefel(7, 2, rng);
  QuadraticProblem aligned(0.5 * x.matrix(), 1);
  CHECK(stationarity_surrogate(aligned, x, default_prox_lambda(aligned)) <= 1e-8);

  // Generic point: matches the closed form.
  const Eigen::MatrixXd a = 0.4 * rng.gaussian_matrix(7, 2);
  QuadraticProblem problem(a, 1);
  const double lambda = default_prox_lambda(problem);
  const StiefelPoint y = random_stiefel(7, 2, rng);
  const double surrogate = stationarity_surrogate(problem, y, lambda);
  const double closed =
      (quadratic_prox_closed_form(a, y, lambda).matrix() - y.matrix()).squaredNorm() /
      (lambda * lambda);
  CHECK(surrogate == doctest::Approx(closed).epsilon(1e-3));

  // Surrogate at the prox point itself is solver-tolerance small.
  const ProxResult p = prox_point(problem, y, lambda);
  CHECK(stationarity_surrogate(problem, p.point, lambda) <= 1e-6);
}

TEST_CASE("numeric prox is contractive for the quadratic problem") {
  Rng rng(23);
  const Eigen::MatrixXd a = 0.5 * rng.gaussian_matrix(6, 2);
  QuadraticProblem problem(a, 1);
  const double lambda = default_prox_lambda(problem);
  const double modulus = 1.0 / (1.0 - lambda * a.norm());
  for (int trial = 0; trial < 200; ++trial) {
    const StiefelPoint x = random_stiefel(6, 2, rng);
    const StiefelPoint y = random_stiefel(6, 2, rng);
    const double lhs = (prox_point(problem, x, lambda).point.matrix() -
                        prox_point(problem, y, lambda).point.matrix())
                           .norm();
    CHECK(lhs <= modulus * (x.matrix() - y.matrix()).norm() + 1e-3);
  }
}

TEST_CASE("subspace distance") {
  Rng rng(29);
  const StiefelPoint x = random_stiefel(8, 2, rng);
  CHECK(subspace_distance(x, x) == doctest::Approx(0.0).epsilon(1e-12));

  // Gauge invariance under right-multiplication by an orthogonal factor.
  const StiefelPoint q2 = random_stiefel(2, 2, rng);
  const StiefelPoint rotated =
      StiefelPoint::from_orthonormal(x.matrix() * q2.matrix());
  CHECK(subspace_distance(rotated, x) <= 1e-10);

  // Grid oracle over O(2): rotations plus reflections.
  const StiefelPoint y = random_stiefel(8, 2, rng);
  const double procrustes = subspace_distance(x, y);
  double grid = 1e300;
  const int half = 50000;
  for (int i = 0; i < half; ++i) {
    const double th = 2.0 * M_PI * i / half;
    Eigen::Matrix2d rot, refl;
    rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    refl << std::cos(th), std::sin(th), std::sin(th), -std::cos(th);
    grid = std::min(grid, (x.matrix() * rot - y.matrix()).norm());
    grid = std::min(grid, (x.matrix() * refl - y.matrix()).norm());
  }
  CHECK(procrustes <= grid + 1e-12);
  CHECK(grid - procrustes <= 1e-3);
}

TEST_CASE("subspace distance is a pseudometric") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const StiefelPoint a = random_stiefel(6, 2, rng);
    const StiefelPoint b = random_stiefel(6, 2, rng);
    const StiefelPoint c = random_stiefel(6, 2, rng);
    CHECK(std::abs(subspace_distance(a, b) - subspace_distance(b, a)) <= 1e-9);
    CHECK(subspace_distance(a, c) <=
          subspace_distance(a, b) + subspace_distance(b, c) + 1e-9);
  }
}

TEST_CASE("odl recovery error") {
  Rng rng(37);
  const StiefelPoint a = random_stiefel(5, 5, rng);

  // Signed permutation of the dictionary recovers it exactly.
  Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(5, 5);
  perm(0, 2) = 1.0;
  perm(1, 0) = -1.0;
  perm(2, 4) = 1.0;
  perm(3, 1) = -1.0;
  perm(4, 3) = 1.0;
  const StiefelPoint xp = StiefelPoint::from_orthonormal(a.matrix() * perm);
  CHECK(odl_recovery_error(xp, a) <= 1e-12);

  // 45-degree rotation in 2-d: 2 |1/sqrt(2) - 1|.
  Eigen::Matrix2d rot;
  rot << 1.0, -1.0, 1.0, 1.0;
  rot /= std::sqrt(2.0);
  const StiefelPoint a2 = random_stiefel(2, 2, rng);
  const StiefelPoint x2 = StiefelPoint::from_orthonormal(a2.matrix() * rot);
  CHECK(odl_recovery_error(x2, a2) ==
        doctest::Approx(2.0 * (1.0 - 1.0 / std::sqrt(2.0))).epsilon(1e-12));

  // Naive double-loop recomputation.
  const StiefelPoint x = random_stiefel(5, 5, rng);
  double naive = 0.0;
  for (int i = 0; i < 5; ++i) {
    double best = 0.0;
    for (int j = 0; j < 5; ++j) {
      best = std::max(best, std::abs(x.matrix().col(i).dot(a.matrix().col(j))));
    }
    naive += std::abs(best - 1.0);
  }
  CHECK(odl_recovery_error(x, a) == doctest::Approx(naive).epsilon(1e-14));
}

TEST_CASE("ima deviation bound against arbitrary feasible targets") {
  // ||xbar - z|| <= 2 ||xhat - z|| for any feasible z.
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    NetworkState s;
    for (int i = 0; i < 4; ++i) s.points.push_back(random_stiefel(6, 2, rng));
    Eigen::MatrixXd xhat = Eigen::MatrixXd::Zero(6, 2);
    for (const auto& p : s.points) xhat += p.matrix();
    xhat /= 4.0;
    const StiefelPoint xbar = ima(s);
    const StiefelPoint z = random_stiefel(6, 2, rng);
    CHECK((xbar.matrix() - z.matrix()).norm() <=
          2.0 * (xhat - z.matrix()).norm() + 1e-12);
  }
}

TEST_CASE("assess_stationarity reports both conditions") {
  Rng rng(43);
  const Eigen::MatrixXd a = 0.3 * rng.gaussian_matrix(6, 2);
  QuadraticProblem problem(a, 3);
  NetworkState s = initial_state(6, 2, 3, 9);
  const StationarityReport rep = assess_stationarity(problem, s, -1.0, 1e10);
  CHECK(rep.consensus_error == 0.0);
  CHECK(rep.lambda == doctest::Approx(default_prox_lambda(problem)));
  CHECK(rep.prox_gap >= 0.0);
  CHECK(rep.epsilon_stationary);
  const StationarityReport tight = assess_stationarity(problem, s, -1.0, 1e-300);
  CHECK_FALSE(tight.epsilon_stationary);
}
