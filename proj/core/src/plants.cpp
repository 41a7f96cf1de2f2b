#include "clfcbf/plants.hpp"

#include <cmath>
#include <stdexcept>

#include "clfcbf/qp_solver.hpp"

namespace clfcbf {
namespace {

void require_nonempty_input_set(const ControlAffineSystem& sys) {
  if (!check_feasibility(sys.input_matrix, sys.input_bounds).feasible)
    throw std::invalid_argument("plant: input polytope is empty");
}

}  // namespace

ControlAffineSystem acc_system(const AccParams& params) {
  ControlAffineSystem sys;
  sys.state_dim = 3;
  sys.input_dim = 1;
  sys.drift = [params](const Eigen::VectorXd& s) {
    Eigen::VectorXd f(3);
    f << s(1), -params.friction(s(1)) / params.m, params.v0 - s(1);
    return f;
  };
  sys.input_map = [params](const Eigen::VectorXd&) {
    Eigen::MatrixXd g(3, 1);
    g << 0.0, 1.0 / params.m, 0.0;
    return g;
  };
  sys.input_matrix = Eigen::MatrixXd(2, 1);
  sys.input_matrix << 1.0, -1.0;
  sys.input_bounds = Eigen::VectorXd(2);
  sys.input_bounds << params.m * params.c_a * params.grav,
      params.m * params.c_d * params.grav;
  sys.nominal_controller = [params](const Eigen::VectorXd& s) {
    Eigen::VectorXd u(1);
    u << params.friction(s(1));
    return u;
  };
  require_nonempty_input_set(sys);
  return sys;
}

std::pair<Certificate, Certificate> acc_certificates(const AccParams& params) {
  Certificate clf;
  clf.kind = CertificateKind::Lyapunov;
  clf.decay_rate = params.lambda;
  clf.label = "V";
  clf.value = [params](const Eigen::VectorXd& s) {
    const double dv = s(1) - params.v_d;
    return dv * dv;
  };
  clf.gradient = [params](const Eigen::VectorXd& s) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(3);
    g(1) = 2.0 * (s(1) - params.v_d);
    return g;
  };

  Certificate cbf;
  cbf.kind = CertificateKind::Barrier;
  cbf.decay_rate = params.gamma;
  cbf.label = "h";
  cbf.value = [params](const Eigen::VectorXd& s) {
    const double dv = s(1) - params.v0;
    return s(2) - params.t_h * s(1) - 0.5 * dv * dv / (params.c_d * params.grav);
  };
  cbf.gradient = [params](const Eigen::VectorXd& s) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(3);
    g(1) = -params.t_h - (s(1) - params.v0) / (params.c_d * params.grav);
    g(2) = 1.0;
    return g;
  };
  return {clf, cbf};
}

ControlAffineSystem di_system(const DoubleIntegratorParams& params) {
  ControlAffineSystem sys;
  sys.state_dim = 4;
  sys.input_dim = 2;
  sys.drift = [](const Eigen::VectorXd& s) {
    Eigen::VectorXd f(4);
    f << s(2), s(3), 0.0, 0.0;
    return f;
  };
  sys.input_map = [](const Eigen::VectorXd&) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(4, 2);
    g(2, 0) = 1.0;
    g(3, 1) = 1.0;
    return g;
  };
  sys.input_matrix = Eigen::MatrixXd(4, 2);
  sys.input_matrix << 1.0, 0.0, 0.0, 1.0, -1.0, 0.0, 0.0, -1.0;
  sys.input_bounds = Eigen::VectorXd::Constant(4, params.input_bound);
  // Pure min-norm filtering: stabilization is carried by the CLF row.
  sys.nominal_controller = [](const Eigen::VectorXd&) {
    return Eigen::VectorXd::Zero(2);
  };
  require_nonempty_input_set(sys);
  return sys;
}

std::pair<Certificate, std::vector<Certificate>> di_certificates(
    const DoubleIntegratorParams& params) {
  Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
  a(0, 2) = 1.0;
  a(1, 3) = 1.0;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(4, 2);
  b(2, 0) = 1.0;
  b(3, 1) = 1.0;
  const Eigen::MatrixXd p_mat = solve_care(a, b, params.lqr_q, params.lqr_r);

  Eigen::Vector4d s_d;
  s_d << params.p_d(0), params.p_d(1), 0.0, 0.0;

  Certificate clf;
  clf.kind = CertificateKind::Lyapunov;
  clf.decay_rate = params.lambda;
  clf.label = "V";
  clf.value = [p_mat, s_d](const Eigen::VectorXd& s) {
    const Eigen::Vector4d e = s - s_d;
    return e.dot(p_mat * e);
  };
  clf.gradient = [p_mat, s_d](const Eigen::VectorXd& s) {
    const Eigen::Vector4d e = s - s_d;
    return Eigen::VectorXd(2.0 * p_mat * e);
  };

  std::vector<Certificate> cbfs;
  cbfs.reserve(params.obstacles.size());
  for (size_t i = 0; i < params.obstacles.size(); ++i) {
    const Obstacle obs = params.obstacles[i];
    Certificate cbf;
    cbf.kind = CertificateKind::Barrier;
    cbf.decay_rate = params.gamma;
    cbf.label = "h" + std::to_string(i + 1);
    // h = |p - p_o|^2 - rho^2 + 2 (p - p_o)^T v: squared clearance plus its
    // derivative, so h has relative degree one in the input.
    cbf.value = [obs](const Eigen::VectorXd& s) {
      const Eigen::Vector2d dp = s.head<2>() - obs.center;
      const Eigen::Vector2d v = s.tail<2>();
      return dp.squaredNorm() - obs.radius * obs.radius + 2.0 * dp.dot(v);
    };
    cbf.gradient = [obs](const Eigen::VectorXd& s) {
      const Eigen::Vector2d dp = s.head<2>() - obs.center;
      const Eigen::Vector2d v = s.tail<2>();
      Eigen::VectorXd g(4);
      g.head<2>() = 2.0 * dp + 2.0 * v;
      g.tail<2>() = 2.0 * dp;
      return g;
    };
    cbfs.push_back(std::move(cbf));
  }
  return {clf, cbfs};
}

}  // namespace clfcbf
