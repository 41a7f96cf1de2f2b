#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "clfcbf/plants.hpp"
#include "clfcbf/qp_solver.hpp"

namespace clfcbf {
namespace {

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Solve M^T P + P M = -S for P (S symmetric, M stable) via vectorization.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& m, const Eigen::MatrixXd& s) {
  const Eigen::Index n = m.rows();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd lhs = kron(eye, m.transpose()) + kron(m.transpose(), eye);
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(s.data(), n * n);
  const Eigen::VectorXd vec = Eigen::FullPivLU<Eigen::MatrixXd>(lhs).solve(rhs);
  Eigen::MatrixXd p = Eigen::Map<const Eigen::MatrixXd>(vec.data(), n, n);
  return 0.5 * (p + p.transpose());
}

double spectral_abscissa(const Eigen::MatrixXd& m) {
  const Eigen::EigenSolver<Eigen::MatrixXd> eig(m);
  return eig.eigenvalues().real().maxCoeff();
}

}  // namespace

Eigen::MatrixXd solve_care(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                           const Eigen::MatrixXd& q, const Eigen::MatrixXd& r) {
  const Eigen::Index n = a.rows();
  const Eigen::Index m = b.cols();
  if (a.cols() != n || b.rows() != n || q.rows() != n || q.cols() != n ||
      r.rows() != m || r.cols() != m)
    throw std::invalid_argument("solve_care: inconsistent matrix dimensions");

  const Eigen::LDLT<Eigen::MatrixXd> r_ldlt(r);
  if (r_ldlt.info() != Eigen::Success || !r_ldlt.isPositive())
    throw std::invalid_argument("solve_care: R must be positive definite");

  // Initial stabilizing gain: K0 = 0 when A is already stable, otherwise the
  // Bass shift construction (A + beta I) Z + Z (A + beta I)^T = 2 B B^T,
  // K0 = B^T Z^-1, which stabilizes any controllable pair.
  Eigen::MatrixXd gain = Eigen::MatrixXd::Zero(m, n);
  if (spectral_abscissa(a) >= -1e-12) {
    const double beta = a.norm() + 1.0;
    const Eigen::MatrixXd shifted = a + beta * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd z =
        solve_lyapunov(shifted.transpose(), -2.0 * b * b.transpose());
    const Eigen::FullPivLU<Eigen::MatrixXd> z_lu(z);
    if (!z_lu.isInvertible())
      throw SolverFailure("solve_care: Bass initialization failed, (A, B) may be uncontrollable");
    gain = b.transpose() * z_lu.inverse();
    if (spectral_abscissa(a - b * gain) >= 0.0)
      throw SolverFailure("solve_care: could not find an initial stabilizing gain");
  }

  const double q_scale = std::max(1.0, q.cwiseAbs().maxCoeff());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  double residual = std::numeric_limits<double>::infinity();
  constexpr int kMaxIterations = 60;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    const Eigen::MatrixXd a_cl = a - b * gain;
    p = solve_lyapunov(a_cl, q + gain.transpose() * r * gain);
    gain = r_ldlt.solve(b.transpose() * p);
    const Eigen::MatrixXd res_mat =
        a.transpose() * p + p * a - p * b * r_ldlt.solve(b.transpose() * p) + q;
    residual = res_mat.cwiseAbs().maxCoeff();
    if (residual <= 1e-12 * q_scale) return p;
  }
  if (residual <= 1e-8 * q_scale) return p;
  throw SolverFailure("solve_care: Newton-Kleinman iteration did not converge");
}

}  // namespace clfcbf
