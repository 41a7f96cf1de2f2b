#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace clfcbf {

/// Thrown when an iterative routine fails numerically (iteration cap,
/// non-finite values). Distinct from a problem being infeasible, which is a
/// regular result, not an error.
class SolverFailure : public std::runtime_error {
 public:
  explicit SolverFailure(const std::string& what) : std::runtime_error(what) {}
};

enum class QpStatus { Optimal, Infeasible };

/// Dense convex QP:  minimize 1/2 x^T H x + f^T x  subject to  A x <= b.
///
/// H must be symmetric and positive semidefinite; the solver adds a ridge
/// eps_reg = 1e-9 * (1 + |H|_inf) to the diagonal so the regularized problem
/// is strictly convex and the minimizer unique.
struct QpProblem {
  Eigen::MatrixXd hessian;      // n_v x n_v, symmetric
  Eigen::VectorXd linear_cost;  // n_v
  Eigen::MatrixXd ineq_matrix;  // n_c x n_v, row i is a_i^T
  Eigen::VectorXd ineq_rhs;     // n_c
};

struct QpSolution {
  QpStatus status = QpStatus::Infeasible;
  Eigen::VectorXd x_opt;          // minimizer, present iff Optimal
  Eigen::VectorXd multipliers;    // n_c, Lagrange multipliers (0 on inactive rows)
  double objective = 0.0;         // 1/2 x^T H x + f^T x at x_opt (unregularized H)
  std::vector<int> active_set;    // rows tight at the optimum, ascending
  double kkt_residual = 0.0;      // stationarity + complementarity residual
  double max_violation = 0.0;     // max_i (a_i^T x - b_i), clamped at 0
  double infeasibility = 0.0;     // phase-I certificate, > tol iff Infeasible
  int iterations = 0;
};

struct FeasibilityResult {
  bool feasible = false;
  Eigen::VectorXd witness;      // satisfies A x <= b + tol when feasible
  double min_violation = 0.0;   // minimal total hinge violation sum_i max(0, a_i^T x - b_i)
};

/// Solve the QP with a primal active-set method. Returns Optimal with the
/// unique minimizer of the regularized problem, or Infeasible with a phase-I
/// certificate. Deterministic for identical inputs.
///
/// Throws std::invalid_argument on dimension mismatch or a Hessian that is
/// asymmetric beyond tolerance, SolverFailure if the pivoting iteration cap
/// 100 * (n_v + n_c) is exceeded.
QpSolution solve_qp(const QpProblem& problem);

/// Phase-I feasibility test for A x <= b: minimizes the total hinge violation
/// and reports either a witness point or the minimal-violation certificate.
FeasibilityResult check_feasibility(const Eigen::MatrixXd& ineq_matrix,
                                    const Eigen::VectorXd& ineq_rhs);

/// KKT residual |H x + f + A^T mu|_inf plus the largest complementarity
/// violation max_i |mu_i (a_i^T x - b_i)|. Zero iff (x, mu) is a KKT pair.
/// Requires mu >= 0 elementwise.
double kkt_residual(const QpProblem& problem, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& multipliers);

/// Feasibility tolerance used throughout: 1e-9 scaled checks compare against
/// 1e-8 * (1 + |b|_inf).
double feasibility_tolerance(const Eigen::VectorXd& ineq_rhs);

}  // namespace clfcbf
