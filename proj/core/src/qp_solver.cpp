#include "clfcbf/qp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace clfcbf {
namespace {

constexpr double kRidgeScale = 1e-9;
constexpr double kFeasScale = 1e-8;

double max_abs(const Eigen::MatrixXd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

struct ActiveSetOutput {
  Eigen::VectorXd x;
  Eigen::VectorXd multipliers;  // full length n_c
  std::vector<int> working_set;
  int iterations = 0;
};

// Primal active-set iteration for min 1/2 x^T H x + f^T x s.t. A x <= b with
// H positive definite and x0 feasible up to the phase-I tolerance. Working-set
// rows are held at their current values (A_W p = 0), so a start point that is
// feasible only within tolerance never gets worse.
ActiveSetOutput active_set_solve(const Eigen::MatrixXd& hessian,
                                 const Eigen::VectorXd& linear,
                                 const Eigen::MatrixXd& a,
                                 const Eigen::VectorXd& b,
                                 const Eigen::VectorXd& x0) {
  const int n = static_cast<int>(hessian.rows());
  const int nc = static_cast<int>(a.rows());
  const int iter_cap = 100 * (n + nc);

  Eigen::LDLT<Eigen::MatrixXd> hess_ldlt(hessian);

  ActiveSetOutput out;
  out.x = x0;
  out.multipliers = Eigen::VectorXd::Zero(nc);

  std::vector<int> working;  // ascending
  std::vector<char> in_working(static_cast<size_t>(nc), 0);

  // Seed the working set with a linearly independent subset of the rows active
  // at x0, lowest index first.
  {
    Eigen::MatrixXd aw(0, n);
    for (int i = 0; i < nc; ++i) {
      const double resid = b(i) - a.row(i) * out.x;
      if (std::abs(resid) > 1e-9 * (1.0 + std::abs(b(i)))) continue;
      Eigen::MatrixXd cand(aw.rows() + 1, n);
      cand << aw, a.row(i);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(cand);
      if (lu.rank() == cand.rows()) {
        aw = cand;
        working.push_back(i);
        in_working[static_cast<size_t>(i)] = 1;
      }
    }
  }

  auto working_matrix = [&]() {
    Eigen::MatrixXd aw(static_cast<int>(working.size()), n);
    for (size_t k = 0; k < working.size(); ++k) aw.row(static_cast<int>(k)) = a.row(working[k]);
    return aw;
  };

  for (int iter = 0; iter < iter_cap; ++iter) {
    out.iterations = iter + 1;
    const Eigen::VectorXd grad = hessian * out.x + linear;

    // Stationarity is decided on the reduced gradient, not the Newton step:
    // with a near-singular Hessian (phase-I uses eps * I) the step divides
    // fresh roundoff by eps and would never fall below a step tolerance.
    Eigen::VectorXd step = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd aw;
    bool stationary = true;
    const double grad_tol = 1e-12 * (1.0 + grad.cwiseAbs().maxCoeff());
    if (working.empty()) {
      if (grad.cwiseAbs().maxCoeff() > grad_tol) {
        stationary = false;
        step = hess_ldlt.solve(-grad);
      }
    } else {
      aw = working_matrix();
      Eigen::FullPivLU<Eigen::MatrixXd> lu(aw);
      const Eigen::MatrixXd kernel = lu.kernel();
      if (lu.rank() < n && kernel.cols() > 0 && kernel.cwiseAbs().maxCoeff() > 0.0) {
        Eigen::MatrixXd basis = kernel;
        for (Eigen::Index c = 0; c < basis.cols(); ++c) basis.col(c).normalize();
        const Eigen::VectorXd reduced_grad = basis.transpose() * grad;
        if (reduced_grad.cwiseAbs().maxCoeff() > grad_tol) {
          stationary = false;
          const Eigen::MatrixXd reduced = basis.transpose() * hessian * basis;
          step = basis * reduced.ldlt().solve(-reduced_grad);
        }
      }
    }

    const double step_norm = step.cwiseAbs().maxCoeff();
    if (stationary || step_norm <= 1e-13 * (1.0 + out.x.cwiseAbs().maxCoeff())) {
      if (working.empty()) return out;
      if (aw.size() == 0) aw = working_matrix();
      // Stationarity on the working set: A_W^T mu = -grad.
      const Eigen::VectorXd mu =
          aw.transpose().colPivHouseholderQr().solve(-grad);
      int drop = -1;
      double most_negative = -1e-10 * (1.0 + grad.cwiseAbs().maxCoeff());
      for (size_t k = 0; k < working.size(); ++k) {
        if (mu(static_cast<int>(k)) < most_negative) {
          most_negative = mu(static_cast<int>(k));
          drop = static_cast<int>(k);
        }
      }
      if (drop < 0) {
        for (size_t k = 0; k < working.size(); ++k)
          out.multipliers(working[k]) = std::max(0.0, mu(static_cast<int>(k)));
        return out;
      }
      in_working[static_cast<size_t>(working[static_cast<size_t>(drop)])] = 0;
      working.erase(working.begin() + drop);
      continue;
    }

    // Ratio test against rows outside the working set; lowest index wins ties.
    double alpha = 1.0;
    int blocking = -1;
    for (int i = 0; i < nc; ++i) {
      if (in_working[static_cast<size_t>(i)]) continue;
      const double d = a.row(i) * step;
      const double d_tol =
          1e-13 * std::max(1.0, max_abs(a.row(i))) * std::max(1.0, step_norm);
      if (d <= d_tol) continue;
      const double ratio = (b(i) - a.row(i) * out.x) / d;
      if (ratio < alpha - 1e-12) {
        alpha = std::max(ratio, 0.0);
        blocking = i;
      }
    }

    out.x += alpha * step;
    if (blocking >= 0) {
      working.insert(std::upper_bound(working.begin(), working.end(), blocking),
                     blocking);
      in_working[static_cast<size_t>(blocking)] = 1;
    }
    if (!out.x.allFinite()) throw SolverFailure("active-set iterate became non-finite");
  }
  throw SolverFailure("active-set iteration cap exceeded");
}

// Phase-I: minimize sum of hinge violations with one auxiliary variable per
// constraint, made strictly convex by a small quadratic term. Rows are
// normalized to unit max-coefficient (same halfspaces, balanced violation
// measure) and columns equilibrated afterwards, so any witness the geometry
// requires stays O(|b|) in solver variables and the uniqueness ridge cannot
// outweigh the violation objective.
FeasibilityResult phase_one(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const int n = static_cast<int>(a.cols());
  const int nc = static_cast<int>(a.rows());

  FeasibilityResult result;
  if (nc == 0) {
    result.feasible = true;
    result.witness = Eigen::VectorXd::Zero(n);
    result.min_violation = 0.0;
    return result;
  }

  Eigen::MatrixXd a_rows = a;
  Eigen::VectorXd b_rows = b;
  for (int i = 0; i < nc; ++i) {
    const double norm = a.row(i).cwiseAbs().maxCoeff();
    if (norm > 0.0) {
      a_rows.row(i) /= norm;
      b_rows(i) /= norm;
    }
  }

  Eigen::VectorXd col_scale(n);
  for (int j = 0; j < n; ++j) {
    const double norm = a_rows.col(j).cwiseAbs().maxCoeff();
    col_scale(j) = norm > 0.0 ? norm : 1.0;
  }
  const Eigen::MatrixXd a_eq = a_rows * col_scale.cwiseInverse().asDiagonal();

  const int nz = n + nc;
  const double eps = 1e-9;
  const Eigen::MatrixXd hess = eps * Eigen::MatrixXd::Identity(nz, nz);
  Eigen::VectorXd linear = Eigen::VectorXd::Zero(nz);
  linear.tail(nc).setOnes();

  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(2 * nc, nz);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * nc);
  rows.topLeftCorner(nc, n) = a_eq;
  rows.topRightCorner(nc, nc) = -Eigen::MatrixXd::Identity(nc, nc);
  rhs.head(nc) = b_rows;
  rows.bottomRightCorner(nc, nc) = -Eigen::MatrixXd::Identity(nc, nc);

  Eigen::VectorXd z0 = Eigen::VectorXd::Zero(nz);
  for (int i = 0; i < nc; ++i) z0(n + i) = std::max(0.0, -b_rows(i));

  const ActiveSetOutput sol = active_set_solve(hess, linear, rows, rhs, z0);

  result.witness = col_scale.cwiseInverse().asDiagonal() * sol.x.head(n);
  double violation = 0.0;
  for (int i = 0; i < nc; ++i)
    violation += std::max(0.0, a.row(i) * result.witness - b(i));
  result.min_violation = violation;
  result.feasible = violation <= feasibility_tolerance(b);
  return result;
}

void validate_problem(const QpProblem& p) {
  const int n = static_cast<int>(p.hessian.rows());
  if (n < 1 || p.hessian.cols() != n)
    throw std::invalid_argument("qp: hessian must be square with n_v >= 1");
  if (p.linear_cost.size() != n)
    throw std::invalid_argument("qp: linear_cost length does not match hessian");
  if (p.ineq_matrix.rows() != p.ineq_rhs.size())
    throw std::invalid_argument("qp: ineq_matrix row count does not match ineq_rhs");
  if (p.ineq_matrix.rows() > 0 && p.ineq_matrix.cols() != n)
    throw std::invalid_argument("qp: ineq_matrix column count does not match n_v");
  const double scale = 1.0 + max_abs(p.hessian);
  if (max_abs(p.hessian - p.hessian.transpose()) > 1e-12 * scale)
    throw std::invalid_argument("qp: hessian is not symmetric within tolerance");
}

}  // namespace

double feasibility_tolerance(const Eigen::VectorXd& ineq_rhs) {
  const double b_inf = ineq_rhs.size() == 0 ? 0.0 : ineq_rhs.cwiseAbs().maxCoeff();
  return kFeasScale * (1.0 + b_inf);
}

QpSolution solve_qp(const QpProblem& problem) {
  validate_problem(problem);
  const int n = static_cast<int>(problem.hessian.rows());
  const int nc = static_cast<int>(problem.ineq_matrix.rows());

  const Eigen::MatrixXd sym =
      0.5 * (problem.hessian + problem.hessian.transpose());
  const double ridge = kRidgeScale * (1.0 + max_abs(sym));
  const Eigen::MatrixXd regularized =
      sym + ridge * Eigen::MatrixXd::Identity(n, n);

  QpSolution solution;

  Eigen::VectorXd start = Eigen::VectorXd::Zero(n);
  if (nc > 0) {
    const FeasibilityResult feas = phase_one(problem.ineq_matrix, problem.ineq_rhs);
    if (!feas.feasible) {
      solution.status = QpStatus::Infeasible;
      solution.infeasibility = feas.min_violation;
      solution.objective = std::numeric_limits<double>::quiet_NaN();
      return solution;
    }
    start = feas.witness;
  }

  const ActiveSetOutput out = active_set_solve(
      regularized, problem.linear_cost, problem.ineq_matrix, problem.ineq_rhs, start);

  solution.status = QpStatus::Optimal;
  solution.x_opt = out.x;
  solution.multipliers = out.multipliers;
  solution.iterations = out.iterations;
  solution.objective =
      0.5 * out.x.dot(sym * out.x) + problem.linear_cost.dot(out.x);

  double max_violation = 0.0;
  for (int i = 0; i < nc; ++i) {
    const double resid = problem.ineq_matrix.row(i) * out.x - problem.ineq_rhs(i);
    max_violation = std::max(max_violation, resid);
    if (std::abs(resid) <= 1e-7 * (1.0 + std::abs(problem.ineq_rhs(i))))
      solution.active_set.push_back(i);
  }
  solution.max_violation = max_violation;

  QpProblem reg_problem = problem;
  reg_problem.hessian = regularized;
  solution.kkt_residual = kkt_residual(reg_problem, out.x, out.multipliers);
  return solution;
}

FeasibilityResult check_feasibility(const Eigen::MatrixXd& ineq_matrix,
                                    const Eigen::VectorXd& ineq_rhs) {
  if (ineq_matrix.rows() != ineq_rhs.size())
    throw std::invalid_argument("check_feasibility: row count does not match rhs");
  return phase_one(ineq_matrix, ineq_rhs);
}

double kkt_residual(const QpProblem& problem, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& multipliers) {
  const int n = static_cast<int>(problem.hessian.rows());
  const int nc = static_cast<int>(problem.ineq_matrix.rows());
  if (x.size() != n)
    throw std::invalid_argument("kkt_residual: x length does not match hessian");
  if (multipliers.size() != nc)
    throw std::invalid_argument("kkt_residual: multiplier length does not match rows");

  Eigen::VectorXd stationarity = problem.hessian * x + problem.linear_cost;
  if (nc > 0) stationarity += problem.ineq_matrix.transpose() * multipliers;
  double residual = stationarity.cwiseAbs().maxCoeff();

  double complementarity = 0.0;
  for (int i = 0; i < nc; ++i) {
    const double slack = problem.ineq_matrix.row(i) * x - problem.ineq_rhs(i);
    complementarity = std::max(complementarity, std::abs(multipliers(i) * slack));
  }
  return residual + complementarity;
}

}  // namespace clfcbf
