#include "clfcbf/system.hpp"

#include <cmath>
#include <stdexcept>

namespace clfcbf {

std::pair<double, Eigen::VectorXd> lie_derivatives(const Certificate& cert,
                                                   const ControlAffineSystem& sys,
                                                   const Eigen::VectorXd& x) {
  if (x.size() != sys.state_dim)
    throw std::invalid_argument("lie_derivatives: state length does not match system");
  const Eigen::VectorXd grad = cert.gradient(x);
  if (grad.size() != sys.state_dim)
    throw std::invalid_argument("lie_derivatives: gradient length does not match system");
  const Eigen::VectorXd f = sys.drift(x);
  const Eigen::MatrixXd g = sys.input_map(x);
  if (f.size() != sys.state_dim || g.rows() != sys.state_dim || g.cols() != sys.input_dim)
    throw std::invalid_argument("lie_derivatives: dynamics output has wrong dimensions");
  return {grad.dot(f), g.transpose() * grad};
}

ConstraintRow build_constraint_row(const Certificate& cert,
                                   const ControlAffineSystem& sys,
                                   const Eigen::VectorXd& x,
                                   std::optional<int> slack_index) {
  const auto [lf, lg] = lie_derivatives(cert, sys, x);
  ConstraintRow row;
  row.coeff_u = lg;
  row.constant = lf + cert.decay_rate * cert.value(x);
  row.sense = cert.kind == CertificateKind::Lyapunov ? RowSense::Leq : RowSense::Geq;
  row.slack_index = slack_index;
  return row;
}

double verify_gradient(const Certificate& cert, const Eigen::VectorXd& x,
                       double step) {
  if (step <= 0.0) throw std::invalid_argument("verify_gradient: step must be positive");
  const Eigen::VectorXd analytic = cert.gradient(x);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = step * (1.0 + std::abs(x(i)));
    Eigen::VectorXd forward = x;
    Eigen::VectorXd backward = x;
    forward(i) += h;
    backward(i) -= h;
    const double numeric = (cert.value(forward) - cert.value(backward)) / (2.0 * h);
    const double err = std::abs(analytic(i) - numeric) / (1.0 + std::abs(analytic(i)));
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace clfcbf
