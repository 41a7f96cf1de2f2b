#include "clfcbf/frameworks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace clfcbf {
namespace {

// |h| below this pins the decay slack: the omega term vanishes from the CBF
// row and Optimal-decay coincides with the plain CLF-CBF QP.
constexpr double kOmegaBranchTol = 1e-10;

// Certificate row mapped to standardized coordinates v = S (u - k(x)):
//   coeff_v^T v + constant {<=, >=} delta.
struct ScaledRow {
  Eigen::VectorXd coeff_v;
  double constant = 0.0;
  RowSense sense = RowSense::Leq;
};

// Row attached to a QP being assembled. Either the slack is a variable
// (slack_col >= m, delta = slack_gain * z(slack_col)) or it is frozen at
// frozen_delta with a small feasibility margin.
struct RowSpec {
  ScaledRow row;
  int slack_col = -1;
  double slack_gain = 0.0;
  double frozen_delta = 0.0;
  double margin = 0.0;
};

struct StepContext {
  int m = 0;
  Eigen::VectorXd k;
  Eigen::MatrixXd s;
  Eigen::MatrixXd s_inv;
  Eigen::MatrixXd input_rows;  // A_u S^-1
  Eigen::VectorXd input_rhs;   // b_u - A_u k
};

StepContext make_context(const ControlAffineSystem& sys,
                         const FrameworkConfig& cfg, const Eigen::VectorXd& x) {
  if (x.size() != sys.state_dim)
    throw std::invalid_argument("frameworks: state length does not match system");
  if (cfg.input_weight.rows() != sys.input_dim ||
      cfg.input_weight.cols() != sys.input_dim)
    throw std::invalid_argument("frameworks: input weight H must be m x m");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cfg.input_weight);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("frameworks: input weight H must be positive definite");

  StepContext ctx;
  ctx.m = sys.input_dim;
  ctx.k = sys.nominal_controller(x);
  if (ctx.k.size() != sys.input_dim)
    throw std::invalid_argument("frameworks: nominal controller output has wrong length");
  ctx.s = es.operatorSqrt();
  ctx.s_inv = es.operatorInverseSqrt();
  ctx.input_rows = sys.input_matrix * ctx.s_inv;
  ctx.input_rhs = sys.input_bounds - sys.input_matrix * ctx.k;
  return ctx;
}

ScaledRow scale_row(const Certificate& cert, double rate,
                    const ControlAffineSystem& sys, const StepContext& ctx,
                    const Eigen::VectorXd& x) {
  const auto [lf, lg] = lie_derivatives(cert, sys, x);
  ScaledRow row;
  row.coeff_v = ctx.s_inv * lg;
  row.constant = lf + lg.dot(ctx.k) + rate * cert.value(x);
  row.sense = cert.kind == CertificateKind::Lyapunov ? RowSense::Leq : RowSense::Geq;
  return row;
}

double freeze_margin(double delta) { return 1e-9 * (1.0 + std::abs(delta)); }

QpProblem assemble(const StepContext& ctx, int n_slack,
                   const Eigen::VectorXd& slack_hess, double v_hess,
                   const std::vector<RowSpec>& rows) {
  const int n = ctx.m + n_slack;
  const int n_input = static_cast<int>(ctx.input_rows.rows());
  const int nc = static_cast<int>(rows.size()) + n_input;

  QpProblem qp;
  qp.hessian = Eigen::MatrixXd::Zero(n, n);
  qp.hessian.topLeftCorner(ctx.m, ctx.m) =
      v_hess * Eigen::MatrixXd::Identity(ctx.m, ctx.m);
  for (int i = 0; i < n_slack; ++i) qp.hessian(ctx.m + i, ctx.m + i) = slack_hess(i);
  qp.linear_cost = Eigen::VectorXd::Zero(n);
  qp.ineq_matrix = Eigen::MatrixXd::Zero(nc, n);
  qp.ineq_rhs = Eigen::VectorXd::Zero(nc);

  // Rows in Leq form: Leq cert rows keep their sign, Geq rows are negated.
  for (size_t i = 0; i < rows.size(); ++i) {
    const RowSpec& spec = rows[i];
    const double sign = spec.row.sense == RowSense::Leq ? 1.0 : -1.0;
    const int r = static_cast<int>(i);
    qp.ineq_matrix.block(r, 0, 1, ctx.m) = sign * spec.row.coeff_v.transpose();
    if (spec.slack_col >= 0) {
      qp.ineq_matrix(r, spec.slack_col) = -sign * spec.slack_gain;
      qp.ineq_rhs(r) = -sign * spec.row.constant;
    } else {
      qp.ineq_rhs(r) = -sign * spec.row.constant + sign * spec.frozen_delta + spec.margin;
    }
  }
  qp.ineq_matrix.block(static_cast<int>(rows.size()), 0, n_input, ctx.m) = ctx.input_rows;
  qp.ineq_rhs.tail(n_input) = ctx.input_rhs;
  return qp;
}

// True when the row system (as assembled, including frozen and slacked rows)
// admits a feasible point. Used to snap stage slacks to exactly zero when the
// zero-slack system is satisfiable: a plain QP solve would trade a
// microscopic slack cost against the ridge on the uncosted variables and
// report slacks off by O(sqrt(ridge) * scale) instead of zero.
bool rows_feasible(const StepContext& ctx, int n_slack,
                   const std::vector<RowSpec>& rows) {
  const QpProblem qp =
      assemble(ctx, n_slack, Eigen::VectorXd::Zero(n_slack), 0.0, rows);
  return check_feasibility(qp.ineq_matrix, qp.ineq_rhs).feasible;
}

StageDiagnostic make_diagnostic(const std::string& name, double objective,
                                const QpSolution& sol) {
  StageDiagnostic diag;
  diag.name = name;
  diag.objective = objective;
  diag.active_set = sol.active_set;
  diag.iterations = sol.iterations;
  return diag;
}

ControlResult infeasible_result(Method method, int m, int n_barriers,
                                const QpSolution& sol,
                                const std::string& stage_name) {
  ControlResult res;
  res.method = method;
  res.status = QpStatus::Infeasible;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  res.u = Eigen::VectorXd::Constant(m, nan);
  res.delta1 = nan;
  res.delta2 = Eigen::VectorXd::Constant(n_barriers, nan);
  res.stage_diagnostics.push_back(make_diagnostic(stage_name, sol.infeasibility, sol));
  return res;
}

// In standardized coordinates |v|^2 = (u - k)^T H (u - k).
double input_cost(const Eigen::VectorXd& v) { return v.squaredNorm(); }

void check_certificates(const Certificate& clf, const std::vector<Certificate>& cbfs) {
  if (clf.kind != CertificateKind::Lyapunov)
    throw std::invalid_argument("frameworks: clf argument must be a Lyapunov certificate");
  for (const Certificate& c : cbfs)
    if (c.kind != CertificateKind::Barrier)
      throw std::invalid_argument("frameworks: cbf argument must be a Barrier certificate");
}

double derive_gamma0(const FrameworkConfig& cfg, const Certificate& cbf) {
  if (std::isfinite(cfg.gamma0)) return cfg.gamma0;
  return cbf.decay_rate / cfg.omega0;
}

}  // namespace

ControlResult solve_hard(const ControlAffineSystem& sys, const Certificate& clf,
                         const std::vector<Certificate>& cbfs,
                         const FrameworkConfig& cfg, const Eigen::VectorXd& x) {
  check_certificates(clf, cbfs);
  const StepContext ctx = make_context(sys, cfg, x);
  const int nb = static_cast<int>(cbfs.size());

  std::vector<RowSpec> rows;
  rows.push_back({scale_row(clf, clf.decay_rate, sys, ctx, x), -1, 0.0, 0.0, 0.0});
  for (const Certificate& cbf : cbfs)
    rows.push_back({scale_row(cbf, cbf.decay_rate, sys, ctx, x), -1, 0.0, 0.0, 0.0});

  const QpProblem qp = assemble(ctx, 0, Eigen::VectorXd(), 1.0, rows);
  const QpSolution sol = solve_qp(qp);
  if (sol.status == QpStatus::Infeasible)
    return infeasible_result(Method::Hard, ctx.m, nb, sol, "hard-qp");

  ControlResult res;
  res.method = Method::Hard;
  res.status = QpStatus::Optimal;
  res.u = ctx.s_inv * sol.x_opt + ctx.k;
  res.delta1 = 0.0;
  res.delta2 = Eigen::VectorXd::Zero(nb);
  res.stage_diagnostics.push_back(
      make_diagnostic("hard-qp", input_cost(sol.x_opt), sol));
  return res;
}

ControlResult solve_clf_cbf_qp(const ControlAffineSystem& sys,
                               const Certificate& clf,
                               const std::vector<Certificate>& cbfs,
                               const FrameworkConfig& cfg,
                               const Eigen::VectorXd& x) {
  check_certificates(clf, cbfs);
  if (cfg.p <= 0.0) throw std::invalid_argument("frameworks: p must be positive");
  const StepContext ctx = make_context(sys, cfg, x);
  const int nb = static_cast<int>(cbfs.size());
  const double clf_scale = std::sqrt(2.0 * cfg.p);

  std::vector<RowSpec> rows;
  rows.push_back({scale_row(clf, clf.decay_rate, sys, ctx, x), ctx.m, 1.0 / clf_scale, 0.0, 0.0});
  for (const Certificate& cbf : cbfs)
    rows.push_back({scale_row(cbf, cbf.decay_rate, sys, ctx, x), -1, 0.0, 0.0, 0.0});

  const QpProblem qp = assemble(ctx, 1, Eigen::VectorXd::Ones(1), 1.0, rows);
  const QpSolution sol = solve_qp(qp);
  if (sol.status == QpStatus::Infeasible)
    return infeasible_result(Method::ClfCbfQp, ctx.m, nb, sol, "clf-cbf-qp");

  ControlResult res;
  res.method = Method::ClfCbfQp;
  res.status = QpStatus::Optimal;
  res.u = ctx.s_inv * sol.x_opt.head(ctx.m) + ctx.k;
  res.delta1 = sol.x_opt(ctx.m) / clf_scale;
  res.delta2 = Eigen::VectorXd::Zero(nb);
  const double objective =
      0.5 * input_cost(sol.x_opt.head(ctx.m)) + cfg.p * res.delta1 * res.delta1;
  res.stage_diagnostics.push_back(make_diagnostic("clf-cbf-qp", objective, sol));
  return res;
}

ControlResult solve_optimal_decay(const ControlAffineSystem& sys,
                                  const Certificate& clf,
                                  const std::vector<Certificate>& cbfs,
                                  const FrameworkConfig& cfg,
                                  const Eigen::VectorXd& x) {
  check_certificates(clf, cbfs);
  if (cfg.p <= 0.0 || cfg.p_omega <= 0.0)
    throw std::invalid_argument("frameworks: p and p_omega must be positive");
  const StepContext ctx = make_context(sys, cfg, x);
  const int nb = static_cast<int>(cbfs.size());
  const double clf_scale = std::sqrt(2.0 * cfg.p);
  const double omega_scale = std::sqrt(2.0 * cfg.p_omega);

  // One scaled decay variable eps_w = omega_scale * (omega - omega0) per
  // barrier with h != 0; the CBF slack equivalent is (omega0 - omega) g0 h.
  std::vector<RowSpec> rows;
  rows.push_back({scale_row(clf, clf.decay_rate, sys, ctx, x), ctx.m, 1.0 / clf_scale, 0.0, 0.0});
  std::vector<int> omega_col(cbfs.size(), -1);
  std::vector<double> gamma0h(cbfs.size(), 0.0);
  int n_slack = 1;
  for (size_t j = 0; j < cbfs.size(); ++j) {
    const Certificate& cbf = cbfs[j];
    const double gamma0 = derive_gamma0(cfg, cbf);
    const double h = cbf.value(x);
    RowSpec spec{scale_row(cbf, gamma0 * cfg.omega0, sys, ctx, x), -1, 0.0, 0.0, 0.0};
    if (std::abs(h) >= kOmegaBranchTol) {
      omega_col[j] = ctx.m + n_slack;
      gamma0h[j] = gamma0 * h;
      spec.slack_col = omega_col[j];
      spec.slack_gain = -gamma0h[j] / omega_scale;
      ++n_slack;
    }
    rows.push_back(spec);
  }

  const QpProblem qp = assemble(ctx, n_slack, Eigen::VectorXd::Ones(n_slack), 1.0, rows);
  const QpSolution sol = solve_qp(qp);
  if (sol.status == QpStatus::Infeasible)
    return infeasible_result(Method::OptimalDecay, ctx.m, nb, sol, "optimal-decay");

  ControlResult res;
  res.method = Method::OptimalDecay;
  res.status = QpStatus::Optimal;
  res.u = ctx.s_inv * sol.x_opt.head(ctx.m) + ctx.k;
  res.delta1 = sol.x_opt(ctx.m) / clf_scale;
  res.delta2 = Eigen::VectorXd::Zero(nb);
  res.omega = Eigen::VectorXd::Constant(nb, cfg.omega0);
  for (int j = 0; j < nb; ++j) {
    if (omega_col[j] < 0) continue;
    const double omega = cfg.omega0 + sol.x_opt(omega_col[j]) / omega_scale;
    res.omega(j) = omega;
    res.delta2(j) = (cfg.omega0 - omega) * gamma0h[j];
  }
  double objective = 0.5 * input_cost(sol.x_opt.head(ctx.m)) +
                     cfg.p * res.delta1 * res.delta1;
  for (int j = 0; j < nb; ++j) {
    const double dw = res.omega(j) - cfg.omega0;
    objective += cfg.p_omega * dw * dw;
  }
  res.stage_diagnostics.push_back(make_diagnostic("optimal-decay", objective, sol));
  return res;
}

ControlResult solve_safety_first(const ControlAffineSystem& sys,
                                 const Certificate& clf,
                                 const std::vector<Certificate>& cbfs,
                                 const FrameworkConfig& cfg,
                                 const Eigen::VectorXd& x) {
  check_certificates(clf, cbfs);
  const StepContext ctx = make_context(sys, cfg, x);
  const int nb = static_cast<int>(cbfs.size());
  const double root2 = std::sqrt(2.0);

  const ScaledRow clf_row = scale_row(clf, clf.decay_rate, sys, ctx, x);
  std::vector<ScaledRow> cbf_rows;
  cbf_rows.reserve(cbfs.size());
  for (const Certificate& cbf : cbfs)
    cbf_rows.push_back(scale_row(cbf, cbf.decay_rate, sys, ctx, x));

  ControlResult res;
  res.method = Method::SafetyFirst;

  // Stage 1: minimize the squared CBF slacks. Zero slack is snapped exactly
  // when the zero-slack rows are satisfiable; otherwise the stage QP runs
  // with cost only on the CBF slacks, and the solver ridge canonicalizes the
  // uncosted v (pulled towards 0, i.e. u towards k(x)) and CLF slack.
  Eigen::VectorXd delta2 = Eigen::VectorXd::Zero(nb);
  {
    std::vector<RowSpec> zero_rows;
    zero_rows.push_back({clf_row, ctx.m, 1.0 / root2, 0.0, 0.0});
    for (int j = 0; j < nb; ++j)
      zero_rows.push_back({cbf_rows[j], -1, 0.0, 0.0, 0.0});
    if (rows_feasible(ctx, 1, zero_rows)) {
      StageDiagnostic diag;
      diag.name = "stage1-cbf-slack";
      res.stage_diagnostics.push_back(diag);
    } else {
      std::vector<RowSpec> rows;
      rows.push_back({clf_row, ctx.m, 1.0 / root2, 0.0, 0.0});
      for (int j = 0; j < nb; ++j)
        rows.push_back({cbf_rows[j], ctx.m + 1 + j, 1.0 / root2, 0.0, 0.0});
      Eigen::VectorXd slack_hess = Eigen::VectorXd::Ones(1 + nb);
      slack_hess(0) = 0.0;
      const QpProblem qp = assemble(ctx, 1 + nb, slack_hess, 0.0, rows);
      const QpSolution sol = solve_qp(qp);
      if (sol.status != QpStatus::Optimal)
        throw SolverFailure("safety-first stage 1 unexpectedly infeasible");
      for (int j = 0; j < nb; ++j) delta2(j) = sol.x_opt(ctx.m + 1 + j) / root2;
      res.stage_diagnostics.push_back(
          make_diagnostic("stage1-cbf-slack", delta2.squaredNorm(), sol));
    }
  }

  // Stage 2: minimize the squared CLF slack with the CBF slacks frozen.
  double delta1 = 0.0;
  {
    std::vector<RowSpec> frozen;
    frozen.push_back({clf_row, -1, 0.0, 0.0, 0.0});
    for (int j = 0; j < nb; ++j)
      frozen.push_back({cbf_rows[j], -1, 0.0, delta2(j), freeze_margin(delta2(j))});
    if (rows_feasible(ctx, 0, frozen)) {
      StageDiagnostic diag;
      diag.name = "stage2-clf-slack";
      res.stage_diagnostics.push_back(diag);
    } else {
      std::vector<RowSpec> rows;
      rows.push_back({clf_row, ctx.m, 1.0 / root2, 0.0, 0.0});
      for (int j = 0; j < nb; ++j)
        rows.push_back({cbf_rows[j], -1, 0.0, delta2(j), freeze_margin(delta2(j))});
      const QpProblem qp = assemble(ctx, 1, Eigen::VectorXd::Ones(1), 0.0, rows);
      const QpSolution sol = solve_qp(qp);
      if (sol.status != QpStatus::Optimal)
        throw SolverFailure("safety-first stage 2 unexpectedly infeasible");
      delta1 = sol.x_opt(ctx.m) / root2;
      res.stage_diagnostics.push_back(
          make_diagnostic("stage2-clf-slack", delta1 * delta1, sol));
    }
  }

  // Stage 3: minimize the input deviation with both slacks frozen.
  {
    std::vector<RowSpec> rows;
    rows.push_back({clf_row, -1, 0.0, delta1, freeze_margin(delta1)});
    for (int j = 0; j < nb; ++j)
      rows.push_back({cbf_rows[j], -1, 0.0, delta2(j), freeze_margin(delta2(j))});
    const QpProblem qp = assemble(ctx, 0, Eigen::VectorXd(), 1.0, rows);
    const QpSolution sol = solve_qp(qp);
    if (sol.status != QpStatus::Optimal)
      throw SolverFailure("safety-first stage 3 unexpectedly infeasible");
    res.u = ctx.s_inv * sol.x_opt + ctx.k;
    res.stage_diagnostics.push_back(
        make_diagnostic("stage3-input", input_cost(sol.x_opt), sol));
  }

  res.status = QpStatus::Optimal;
  res.delta1 = delta1;
  res.delta2 = delta2;
  return res;
}

namespace {

struct UnifiedBuild {
  QpProblem problem;
  StepContext ctx;
  Eigen::Vector2d s_delta;
  std::array<bool, 2> free_slacks;
  std::array<int, 2> slack_cols;
};

UnifiedBuild build_unified(const ControlAffineSystem& sys, const Certificate& clf,
                           const Certificate& cbf, const FrameworkConfig& cfg,
                           const Eigen::VectorXd& x) {
  check_certificates(clf, {cbf});
  UnifiedBuild build;
  build.ctx = make_context(sys, cfg, x);

  const double h = cbf.value(x);
  bool free1 = cfg.slack_domain[0] == SlackDomain::Free;
  bool free2 = cfg.slack_domain[1] == SlackDomain::Free;
  // With h = 0 the decay-equivalent slack collapses to zero and the slack
  // domain degrades to R x {0}.
  if (free2 && cfg.h_delta.size() == 0 && std::abs(h) < kOmegaBranchTol)
    free2 = false;

  Eigen::Vector2d h_delta;
  if (cfg.h_delta.size() == 2) {
    h_delta = cfg.h_delta;
  } else {
    const double gamma0 = derive_gamma0(cfg, cbf);
    h_delta(0) = 2.0 * cfg.p;
    h_delta(1) = free2 ? 2.0 * cfg.p_omega / ((gamma0 * h) * (gamma0 * h)) : 2.0;
  }
  if (h_delta(0) <= 0.0 || h_delta(1) <= 0.0)
    throw std::invalid_argument("frameworks: H_delta must be positive definite");
  build.s_delta = h_delta.cwiseSqrt();
  build.free_slacks = {free1, free2};
  build.slack_cols = {-1, -1};

  int n_slack = 0;
  if (free1) build.slack_cols[0] = build.ctx.m + n_slack++;
  if (free2) build.slack_cols[1] = build.ctx.m + n_slack++;

  std::vector<RowSpec> rows;
  ScaledRow clf_row = scale_row(clf, clf.decay_rate, sys, build.ctx, x);
  ScaledRow cbf_row = scale_row(cbf, cbf.decay_rate, sys, build.ctx, x);
  rows.push_back(free1
                     ? RowSpec{clf_row, build.slack_cols[0], 1.0 / build.s_delta(0), 0.0, 0.0}
                     : RowSpec{clf_row, -1, 0.0, 0.0, 0.0});
  rows.push_back(free2
                     ? RowSpec{cbf_row, build.slack_cols[1], 1.0 / build.s_delta(1), 0.0, 0.0}
                     : RowSpec{cbf_row, -1, 0.0, 0.0, 0.0});

  build.problem =
      assemble(build.ctx, n_slack, Eigen::VectorXd::Ones(n_slack), 1.0, rows);
  return build;
}

}  // namespace

ControlResult solve_unified(const ControlAffineSystem& sys, const Certificate& clf,
                            const Certificate& cbf, const FrameworkConfig& cfg,
                            const Eigen::VectorXd& x) {
  const UnifiedBuild build = build_unified(sys, clf, cbf, cfg, x);
  const QpSolution sol = solve_qp(build.problem);
  if (sol.status == QpStatus::Infeasible)
    return infeasible_result(Method::Unified, build.ctx.m, 1, sol, "unified-qp");

  ControlResult res;
  res.method = Method::Unified;
  res.status = QpStatus::Optimal;
  res.u = build.ctx.s_inv * sol.x_opt.head(build.ctx.m) + build.ctx.k;
  res.delta1 = build.free_slacks[0]
                   ? sol.x_opt(build.slack_cols[0]) / build.s_delta(0)
                   : 0.0;
  res.delta2 = Eigen::VectorXd::Zero(1);
  if (build.free_slacks[1])
    res.delta2(0) = sol.x_opt(build.slack_cols[1]) / build.s_delta(1);
  const double objective = 0.5 * input_cost(sol.x_opt.head(build.ctx.m)) +
                           0.5 * build.s_delta(0) * build.s_delta(0) * res.delta1 * res.delta1 +
                           0.5 * build.s_delta(1) * build.s_delta(1) * res.delta2(0) * res.delta2(0);
  res.stage_diagnostics.push_back(make_diagnostic("unified-qp", objective, sol));
  return res;
}

Eigen::VectorXd StandardizedProblem::recover_input(const Eigen::VectorXd& z) const {
  return s_inverse * z.head(s.rows()) + nominal_input;
}

StandardizedProblem standardize(const ControlAffineSystem& sys,
                                const Certificate& clf, const Certificate& cbf,
                                const FrameworkConfig& cfg,
                                const Eigen::VectorXd& x) {
  const UnifiedBuild build = build_unified(sys, clf, cbf, cfg, x);
  StandardizedProblem out;
  out.problem = build.problem;
  out.s = build.ctx.s;
  out.s_inverse = build.ctx.s_inv;
  out.s_delta = build.s_delta;
  out.nominal_input = build.ctx.k;
  out.free_slacks = build.free_slacks;
  return out;
}

ControlResult solve_limit_weight(const ControlAffineSystem& sys,
                                 const Certificate& clf,
                                 const std::vector<Certificate>& cbfs,
                                 const FrameworkConfig& cfg,
                                 const Eigen::VectorXd& x) {
  check_certificates(clf, cbfs);
  if (cfg.q <= 0.0) throw std::invalid_argument("frameworks: q must be positive");
  const StepContext ctx = make_context(sys, cfg, x);
  const int nb = static_cast<int>(cbfs.size());

  // Substituting z1 = sqrt(q) delta1, z2 = q delta2 normalizes the cost
  // (u-k)^T H (u-k) + q delta1^2 + q^2 delta2^2 to |v|^2 + z1^2 + |z2|^2, so
  // the Hessian stays perfectly conditioned for any q.
  const double root_q = std::sqrt(cfg.q);
  std::vector<RowSpec> rows;
  rows.push_back({scale_row(clf, clf.decay_rate, sys, ctx, x), ctx.m, 1.0 / root_q, 0.0, 0.0});
  for (int j = 0; j < nb; ++j)
    rows.push_back({scale_row(cbfs[static_cast<size_t>(j)],
                              cbfs[static_cast<size_t>(j)].decay_rate, sys, ctx, x),
                    ctx.m + 1 + j, 1.0 / cfg.q, 0.0, 0.0});

  const QpProblem qp =
      assemble(ctx, 1 + nb, Eigen::VectorXd::Constant(1 + nb, 2.0), 2.0, rows);
  const QpSolution sol = solve_qp(qp);
  if (sol.status == QpStatus::Infeasible)
    return infeasible_result(Method::LimitWeight, ctx.m, nb, sol, "limit-weight");

  ControlResult res;
  res.method = Method::LimitWeight;
  res.status = QpStatus::Optimal;
  res.u = ctx.s_inv * sol.x_opt.head(ctx.m) + ctx.k;
  res.delta1 = sol.x_opt(ctx.m) / root_q;
  res.delta2 = Eigen::VectorXd(nb);
  for (int j = 0; j < nb; ++j) res.delta2(j) = sol.x_opt(ctx.m + 1 + j) / cfg.q;
  const double objective = input_cost(sol.x_opt.head(ctx.m)) +
                           cfg.q * res.delta1 * res.delta1 +
                           cfg.q * cfg.q * res.delta2.squaredNorm();
  res.stage_diagnostics.push_back(make_diagnostic("limit-weight", objective, sol));
  return res;
}

ControlResult solve_priority_list(const ControlAffineSystem& sys,
                                  const PriorityList& list,
                                  const FrameworkConfig& cfg,
                                  const Eigen::VectorXd& x) {
  const StepContext ctx = make_context(sys, cfg, x);
  const double root2 = std::sqrt(2.0);

  struct FlatEntry {
    int level;
    double weight;
    ScaledRow row;
    bool barrier;
    double delta = 0.0;
    bool frozen = false;
  };
  std::vector<FlatEntry> entries;
  for (size_t lvl = 0; lvl < list.levels.size(); ++lvl) {
    for (const PriorityEntry& e : list.levels[lvl]) {
      if (e.weight <= 0.0)
        throw std::invalid_argument("priority list: weights must be positive");
      const double rate = e.decay_rate > 0.0 ? e.decay_rate : e.certificate.decay_rate;
      entries.push_back({static_cast<int>(lvl), e.weight,
                         scale_row(e.certificate, rate, sys, ctx, x),
                         e.certificate.kind == CertificateKind::Barrier});
    }
  }

  ControlResult res;
  res.method = cfg.method;

  // One sub-problem per level, highest priority first: minimize the level's
  // weighted squared slacks, keep higher-level slacks frozen and lower-level
  // slacks free.
  for (size_t lvl = 0; lvl < list.levels.size(); ++lvl) {
    // Zero-slack test: if the level's rows hold exactly with zero slack, snap
    // them to zero instead of letting the ridge trade them off.
    {
      std::vector<RowSpec> probe;
      int n_free = 0;
      for (const FlatEntry& e : entries) {
        if (e.frozen) {
          probe.push_back({e.row, -1, 0.0, e.delta, freeze_margin(e.delta)});
        } else if (e.level == static_cast<int>(lvl)) {
          probe.push_back({e.row, -1, 0.0, 0.0, 0.0});
        } else {
          probe.push_back({e.row, ctx.m + n_free++, 1.0 / root2, 0.0, 0.0});
        }
      }
      if (rows_feasible(ctx, n_free, probe)) {
        for (FlatEntry& e : entries) {
          if (!e.frozen && e.level == static_cast<int>(lvl)) {
            e.delta = 0.0;
            e.frozen = true;
          }
        }
        StageDiagnostic diag;
        diag.name = "level" + std::to_string(lvl);
        res.stage_diagnostics.push_back(diag);
        continue;
      }
    }

    std::vector<RowSpec> rows;
    std::vector<int> level_cols(entries.size(), -1);
    std::vector<double> scales(entries.size(), 0.0);
    int n_slack = 0;
    Eigen::VectorXd slack_hess = Eigen::VectorXd::Zero(static_cast<int>(entries.size()));
    for (size_t i = 0; i < entries.size(); ++i) {
      FlatEntry& e = entries[i];
      if (e.frozen) {
        rows.push_back({e.row, -1, 0.0, e.delta, freeze_margin(e.delta)});
        continue;
      }
      const bool costed = e.level == static_cast<int>(lvl);
      scales[i] = costed ? std::sqrt(2.0 * e.weight) : root2;
      level_cols[i] = ctx.m + n_slack;
      slack_hess(n_slack) = costed ? 1.0 : 0.0;
      ++n_slack;
      rows.push_back({e.row, level_cols[i], 1.0 / scales[i], 0.0, 0.0});
    }
    const QpProblem qp = assemble(ctx, n_slack, slack_hess.head(n_slack), 0.0, rows);
    const QpSolution sol = solve_qp(qp);
    if (sol.status != QpStatus::Optimal)
      throw SolverFailure("priority list sub-problem unexpectedly infeasible");

    double objective = 0.0;
    for (size_t i = 0; i < entries.size(); ++i) {
      FlatEntry& e = entries[i];
      if (e.frozen || e.level != static_cast<int>(lvl)) continue;
      e.delta = sol.x_opt(level_cols[i]) / scales[i];
      e.frozen = true;
      objective += e.weight * e.delta * e.delta;
    }
    res.stage_diagnostics.push_back(
        make_diagnostic("level" + std::to_string(lvl), objective, sol));
  }

  // Terminal sub-problem: input deviation with every slack frozen.
  {
    std::vector<RowSpec> rows;
    for (const FlatEntry& e : entries)
      rows.push_back({e.row, -1, 0.0, e.delta, freeze_margin(e.delta)});
    const QpProblem qp = assemble(ctx, 0, Eigen::VectorXd(), 1.0, rows);
    const QpSolution sol = solve_qp(qp);
    if (sol.status != QpStatus::Optimal)
      throw SolverFailure("priority list terminal sub-problem unexpectedly infeasible");
    res.u = ctx.s_inv * sol.x_opt + ctx.k;
    res.stage_diagnostics.push_back(
        make_diagnostic("input", input_cost(sol.x_opt), sol));
  }

  res.status = QpStatus::Optimal;
  std::vector<double> barrier_deltas;
  bool clf_seen = false;
  for (const FlatEntry& e : entries) {
    if (e.barrier) {
      barrier_deltas.push_back(e.delta);
    } else if (!clf_seen) {
      res.delta1 = e.delta;
      clf_seen = true;
    }
  }
  res.delta2 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(barrier_deltas.size()));
  for (size_t i = 0; i < barrier_deltas.size(); ++i)
    res.delta2(static_cast<Eigen::Index>(i)) = barrier_deltas[i];
  return res;
}

ControlResult solve_step(const ControlAffineSystem& sys, const Certificate& clf,
                         const std::vector<Certificate>& cbfs,
                         const FrameworkConfig& cfg, const Eigen::VectorXd& x) {
  switch (cfg.method) {
    case Method::Hard:
      return solve_hard(sys, clf, cbfs, cfg, x);
    case Method::ClfCbfQp:
      return solve_clf_cbf_qp(sys, clf, cbfs, cfg, x);
    case Method::OptimalDecay:
      return solve_optimal_decay(sys, clf, cbfs, cfg, x);
    case Method::LimitWeight:
      return solve_limit_weight(sys, clf, cbfs, cfg, x);
    case Method::Unified:
      if (cbfs.size() != 1)
        throw std::invalid_argument("unified method requires exactly one barrier");
      return solve_unified(sys, clf, cbfs.front(), cfg, x);
    case Method::SafetyFirst:
      break;
  }
  if (cbfs.size() <= 1) return solve_safety_first(sys, clf, cbfs, cfg, x);

  // Multi-barrier safety first: one barrier per level, ordered by ascending
  // h(x) so the most endangered obstacle gets the highest priority.
  std::vector<int> order(cbfs.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> h_values(cbfs.size());
  for (size_t j = 0; j < cbfs.size(); ++j) h_values[j] = cbfs[j].value(x);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return h_values[static_cast<size_t>(a)] <
                                              h_values[static_cast<size_t>(b)]; });

  PriorityList list;
  for (int idx : order)
    list.levels.push_back({PriorityEntry{cbfs[static_cast<size_t>(idx)], 1.0, 0.0}});
  list.levels.push_back({PriorityEntry{clf, 1.0, 0.0}});

  ControlResult res = solve_priority_list(sys, list, cfg, x);
  res.method = Method::SafetyFirst;
  Eigen::VectorXd delta2 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cbfs.size()));
  for (size_t pos = 0; pos < order.size(); ++pos)
    delta2(order[pos]) = res.delta2(static_cast<Eigen::Index>(pos));
  res.delta2 = delta2;
  return res;
}

const char* method_name(Method method) {
  switch (method) {
    case Method::Hard: return "hard";
    case Method::ClfCbfQp: return "clf-cbf-qp";
    case Method::OptimalDecay: return "optimal-decay";
    case Method::SafetyFirst: return "safety-first";
    case Method::Unified: return "unified";
    case Method::LimitWeight: return "limit-weight";
  }
  return "unknown";
}

std::optional<Method> method_from_name(const std::string& name) {
  for (Method m : {Method::Hard, Method::ClfCbfQp, Method::OptimalDecay,
                   Method::SafetyFirst, Method::Unified, Method::LimitWeight})
    if (name == method_name(m)) return m;
  return std::nullopt;
}

}  // namespace clfcbf
