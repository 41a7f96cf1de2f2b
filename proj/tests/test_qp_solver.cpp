#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "clfcbf/qp_solver.hpp"
#include "oracles.hpp"

using namespace clfcbf;

namespace {

QpProblem two_var_problem() {
  QpProblem qp;
  qp.hessian = 2.0 * Eigen::MatrixXd::Identity(2, 2);
  qp.linear_cost = Eigen::VectorXd(2);
  qp.linear_cost << -2.0, 0.0;
  qp.ineq_matrix = Eigen::MatrixXd::Zero(0, 2);
  qp.ineq_rhs = Eigen::VectorXd(0);
  return qp;
}

}  // namespace

TEST_CASE("unconstrained stationary point") {
  const QpProblem qp = two_var_problem();
  const QpSolution sol = solve_qp(qp);
  REQUIRE(sol.status == QpStatus::Optimal);
  CHECK(sol.x_opt(0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(sol.x_opt(1) == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(sol.objective == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(sol.active_set.empty());
}

TEST_CASE("single bound becomes active") {
  QpProblem qp = two_var_problem();
  qp.ineq_matrix = Eigen::MatrixXd(1, 2);
  qp.ineq_matrix << 1.0, 0.0;
  qp.ineq_rhs = Eigen::VectorXd(1);
  qp.ineq_rhs << 0.5;

  const QpSolution sol = solve_qp(qp);
  REQUIRE(sol.status == QpStatus::Optimal);
  CHECK(sol.x_opt(0) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(sol.x_opt(1) == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(sol.active_set == std::vector<int>{0});
  CHECK(sol.kkt_residual <= 1e-6 * (1.0 + qp.linear_cost.cwiseAbs().maxCoeff()));
  CHECK(sol.max_violation <= 1e-8 * (1.0 + qp.ineq_rhs.cwiseAbs().maxCoeff()));

  const auto grid = oracles::grid_minimize_2d(qp, -2.0, 2.0, 1e-3);
  REQUIRE(grid.found);
  CHECK((sol.x_opt - grid.x).cwiseAbs().maxCoeff() <= 2e-3);
  CHECK(std::abs(sol.objective - grid.objective) <= 1e-5);
}

TEST_CASE("contradictory bounds are infeasible") {
  QpProblem qp = two_var_problem();
  qp.ineq_matrix = Eigen::MatrixXd(2, 2);
  qp.ineq_matrix << 1.0, 0.0, -1.0, 0.0;
  qp.ineq_rhs = Eigen::VectorXd(2);
  qp.ineq_rhs << -1.0, -1.0;

  const QpSolution sol = solve_qp(qp);
  REQUIRE(sol.status == QpStatus::Infeasible);
  CHECK(sol.infeasibility == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(sol.infeasibility > feasibility_tolerance(qp.ineq_rhs));
}

TEST_CASE("check_feasibility on interval, contradiction and empty set") {
  Eigen::MatrixXd a(2, 1);
  a << 1.0, -1.0;
  Eigen::VectorXd b(2);
  b << 1.0, 0.0;
  const FeasibilityResult interval = check_feasibility(a, b);
  REQUIRE(interval.feasible);
  CHECK(interval.witness(0) >= -1e-8);
  CHECK(interval.witness(0) <= 1.0 + 1e-8);

  b << -1.0, -1.0;
  const FeasibilityResult contradiction = check_feasibility(a, b);
  REQUIRE_FALSE(contradiction.feasible);
  CHECK(contradiction.min_violation == doctest::Approx(2.0).epsilon(1e-6));

  const FeasibilityResult empty =
      check_feasibility(Eigen::MatrixXd::Zero(0, 3), Eigen::VectorXd(0));
  REQUIRE(empty.feasible);
  CHECK(empty.witness.isZero(0.0));
  CHECK(empty.witness.size() == 3);
}

TEST_CASE("kkt_residual examples") {
  QpProblem qp = two_var_problem();
  Eigen::VectorXd x(2);
  x << 1.0, 0.0;
  CHECK(kkt_residual(qp, x, Eigen::VectorXd(0)) == doctest::Approx(0.0).epsilon(1e-12));

  qp.ineq_matrix = Eigen::MatrixXd(1, 2);
  qp.ineq_matrix << 1.0, 0.0;
  qp.ineq_rhs = Eigen::VectorXd(1);
  qp.ineq_rhs << 0.5;
  Eigen::VectorXd mu(1);
  mu << 1.0;
  x << 0.5, 0.0;
  CHECK(kkt_residual(qp, x, mu) == doctest::Approx(0.0).epsilon(1e-12));

  x << 0.0, 0.0;
  mu << 0.0;
  CHECK(kkt_residual(qp, x, mu) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("verdicts agree with the phase-I oracle on random instances") {
  std::mt19937 rng(20240101);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  int infeasible_seen = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const int nc = 2 + static_cast<int>(rng() % 6);
    Eigen::MatrixXd a(nc, n);
    Eigen::VectorXd b(nc);
    for (int r = 0; r < nc; ++r) {
      for (int c = 0; c < n; ++c) a(r, c) = unit(rng);
      b(r) = unit(rng) - 0.4;
    }
    QpProblem qp;
    qp.hessian = Eigen::MatrixXd::Identity(n, n);
    qp.linear_cost = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) qp.linear_cost(i) = unit(rng);
    qp.ineq_matrix = a;
    qp.ineq_rhs = b;

    const FeasibilityResult feas = check_feasibility(a, b);
    const QpSolution sol = solve_qp(qp);
    CHECK(feas.feasible == (sol.status == QpStatus::Optimal));
    if (feas.feasible) {
      // The witness satisfies every row within the documented tolerance.
      const double tol = feasibility_tolerance(b);
      CHECK((a * feas.witness - b).maxCoeff() <= tol);
      CHECK(sol.max_violation <= tol);
      CHECK(sol.kkt_residual <=
            1e-6 * (1.0 + qp.linear_cost.cwiseAbs().maxCoeff()));
    } else {
      ++infeasible_seen;
    }
  }
  CHECK(infeasible_seen > 10);  // the sample covers both verdicts
}

TEST_CASE("optimal objective beats random feasible points") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const QpProblem qp = oracles::random_boxed_qp(rng, n, 3);
    const QpSolution sol = solve_qp(qp);
    REQUIRE(sol.status == QpStatus::Optimal);
    int tested = 0;
    for (int draw = 0; draw < 10000; ++draw) {
      Eigen::VectorXd x(n);
      for (int i = 0; i < n; ++i) x(i) = box(rng);
      if (!oracles::qp_feasible(qp, x)) continue;
      ++tested;
      CHECK(sol.objective <= oracles::qp_objective(qp, x) + 1e-9);
    }
    CHECK(tested > 100);
  }
}

TEST_CASE("two-variable problems agree with exhaustive grid search") {
  std::mt19937 rng(42);

  // Internal consistency of the fast column-wise oracle first.
  for (int trial = 0; trial < 5; ++trial) {
    const QpProblem qp = oracles::random_boxed_qp(rng, 2, 2);
    const auto fast = oracles::grid_minimize_2d(qp, -2.0, 2.0, 0.01);
    const auto slow = oracles::grid_minimize_2d_slow(qp, -2.0, 2.0, 0.01);
    REQUIRE(fast.found == slow.found);
    if (fast.found) {
      CHECK(fast.x == slow.x);
      CHECK(fast.objective == doctest::Approx(slow.objective).epsilon(1e-12));
    }
  }

  for (int trial = 0; trial < 30; ++trial) {
    const QpProblem qp = oracles::random_boxed_qp(rng, 2, 3);
    const QpSolution sol = solve_qp(qp);
    REQUIRE(sol.status == QpStatus::Optimal);
    CHECK(sol.max_violation <= 1e-8 * (1.0 + qp.ineq_rhs.cwiseAbs().maxCoeff()));
    CHECK(sol.kkt_residual <= 1e-6 * (1.0 + qp.linear_cost.cwiseAbs().maxCoeff()));
    const auto grid = oracles::grid_minimize_2d(qp, -2.0, 2.0, 1e-3);
    REQUIRE(grid.found);
    CHECK((sol.x_opt - grid.x).cwiseAbs().maxCoeff() <= 2e-3);
    CHECK(sol.objective <= grid.objective + 1e-5);
    CHECK(std::abs(sol.objective - grid.objective) <= 1e-5);
  }
}

TEST_CASE("explicit ridge barely moves an already strictly convex problem") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const QpProblem qp = oracles::random_boxed_qp(rng, 3, 2);
    QpProblem ridged = qp;
    ridged.hessian += 1e-9 * Eigen::MatrixXd::Identity(3, 3);
    const QpSolution base = solve_qp(qp);
    const QpSolution shifted = solve_qp(ridged);
    REQUIRE(base.status == QpStatus::Optimal);
    REQUIRE(shifted.status == QpStatus::Optimal);
    const double allowed = 10.0 * 1e-9 * base.x_opt.norm() + 1e-12;
    CHECK((base.x_opt - shifted.x_opt).norm() <= allowed);
  }
}

TEST_CASE("input validation") {
  QpProblem qp = two_var_problem();
  qp.linear_cost = Eigen::VectorXd::Zero(3);
  CHECK_THROWS_AS(solve_qp(qp), std::invalid_argument);

  qp = two_var_problem();
  qp.hessian(0, 1) = 0.5;  // asymmetric
  CHECK_THROWS_AS(solve_qp(qp), std::invalid_argument);

  qp = two_var_problem();
  qp.ineq_matrix = Eigen::MatrixXd::Zero(2, 2);
  qp.ineq_rhs = Eigen::VectorXd::Zero(1);
  CHECK_THROWS_AS(solve_qp(qp), std::invalid_argument);

  CHECK_THROWS_AS(kkt_residual(two_var_problem(), Eigen::VectorXd::Zero(3),
                               Eigen::VectorXd(0)),
                  std::invalid_argument);
}

TEST_CASE("deterministic across repeated solves") {
  std::mt19937 rng(5);
  const QpProblem qp = oracles::random_boxed_qp(rng, 4, 5);
  const QpSolution first = solve_qp(qp);
  const QpSolution second = solve_qp(qp);
  REQUIRE(first.status == QpStatus::Optimal);
  CHECK(first.x_opt == second.x_opt);
  CHECK(first.objective == second.objective);
  CHECK(first.active_set == second.active_set);
}
