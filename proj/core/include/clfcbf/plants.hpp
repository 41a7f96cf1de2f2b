#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "clfcbf/system.hpp"

namespace clfcbf {

/// Adaptive-cruise-control benchmark. State s = [p, v, z]: ego position, ego
/// velocity, gap to the lead vehicle. Defaults reproduce the standard
/// parameter set used by the bundled scenarios.
struct AccParams {
  double m = 1650.0;    // vehicle mass (kg)
  double grav = 9.81;   // gravity (m/s^2)
  double t_h = 1.8;     // look-ahead time (s)
  double v0 = 14.0;     // lead vehicle velocity (m/s)
  double v_d = 10.0;    // desired velocity (m/s)
  double f0 = 0.1;      // friction F_r(v) = f0 + f1 v + f2 v^2
  double f1 = 5.0;
  double f2 = 0.25;
  double c_a = 0.3;     // acceleration fraction of g
  double c_d = 0.3;     // deceleration fraction of g
  double lambda = 5.0;  // CLF decay rate
  double gamma = 5.0;   // CBF decay rate
  double h_weight = 2.0 / (1650.0 * 1650.0);  // input weight H (1x1)
  double p = 2e-3;      // CLF slack weight
  double omega0 = 1.0;
  double p_omega = 0.2;
  Eigen::Vector3d s0{0.0, 20.0, 100.0};

  double friction(double v) const { return f0 + f1 * v + f2 * v * v; }
};

struct Obstacle {
  Eigen::Vector2d center;
  double radius = 1.0;
};

/// Planar double-integrator (AGV) benchmark. State s = [x, y, vx, vy].
struct DoubleIntegratorParams {
  Eigen::Vector4d s0{0.0, 4.0, 0.0, 0.0};
  Eigen::Vector2d p_d{10.0, 0.0};
  std::vector<Obstacle> obstacles{{Eigen::Vector2d{5.0, 3.0}, 2.0}};
  double lambda = 1.0;
  double gamma = 3.0;
  double h_weight = 5.0;  // input weight H = h_weight * I2
  double p = 1.0;
  double omega0 = 1.0;
  double p_omega = 10.0;
  double input_bound = 7.0;  // |u_i| <= input_bound per axis
  Eigen::Matrix4d lqr_q = Eigen::Matrix4d::Identity();
  Eigen::Matrix2d lqr_r = Eigen::Matrix2d::Identity();
};

ControlAffineSystem acc_system(const AccParams& params);
std::pair<Certificate, Certificate> acc_certificates(const AccParams& params);

ControlAffineSystem di_system(const DoubleIntegratorParams& params);
std::pair<Certificate, std::vector<Certificate>> di_certificates(
    const DoubleIntegratorParams& params);

/// Continuous algebraic Riccati equation A^T P + P A - P B R^-1 B^T P + Q = 0,
/// solved by Newton-Kleinman iteration. Requires (A, B) stabilizable, Q >= 0,
/// R > 0; returns the stabilizing P >= 0 with residual below
/// 1e-8 * max(1, |Q|_inf). Throws SolverFailure on non-convergence.
Eigen::MatrixXd solve_care(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                           const Eigen::MatrixXd& q, const Eigen::MatrixXd& r);

}  // namespace clfcbf
