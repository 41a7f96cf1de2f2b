#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace clfcbf {

/// Control-affine dynamics xdot = f(x) + g(x) u with a polytopic input set
/// U = {u : A_u u <= b_u} and a nominal feedback controller k(x). Immutable
/// after construction; safe to share across threads.
struct ControlAffineSystem {
  int state_dim = 0;
  int input_dim = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> drift;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> input_map;
  Eigen::MatrixXd input_matrix;  // p x m
  Eigen::VectorXd input_bounds;  // p
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> nominal_controller;
};

enum class CertificateKind { Lyapunov, Barrier };

/// A scalar certificate (CLF or CBF) with analytic gradient and a linear
/// class-K decay rate: lambda for Lyapunov rows, gamma for barrier rows.
struct Certificate {
  CertificateKind kind = CertificateKind::Lyapunov;
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  double decay_rate = 1.0;
  std::string label;
};

enum class RowSense { Leq, Geq };

/// One affine constraint row in the input:
///   coeff_u^T u + constant {<=, >=} delta
/// where constant = L_f c(x) + rate * c(x) and delta is the (optional) slack.
struct ConstraintRow {
  Eigen::VectorXd coeff_u;
  double constant = 0.0;
  RowSense sense = RowSense::Leq;
  std::optional<int> slack_index;
};

/// Lie derivatives of the certificate along the dynamics:
///   L_f c = grad(c)^T f(x),  L_g c = grad(c)^T g(x).
std::pair<double, Eigen::VectorXd> lie_derivatives(const Certificate& cert,
                                                   const ControlAffineSystem& sys,
                                                   const Eigen::VectorXd& x);

ConstraintRow build_constraint_row(const Certificate& cert,
                                   const ControlAffineSystem& sys,
                                   const Eigen::VectorXd& x,
                                   std::optional<int> slack_index = std::nullopt);

/// Central finite-difference check of the analytic gradient. Returns the
/// maximum over coordinates of |analytic - numeric| / (1 + |analytic|), using
/// per-coordinate steps step * (1 + |x_i|).
double verify_gradient(const Certificate& cert, const Eigen::VectorXd& x,
                       double step = 1e-5);

}  // namespace clfcbf
