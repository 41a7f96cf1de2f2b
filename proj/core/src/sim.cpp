#include "clfcbf/sim.hpp"

#include <cmath>
#include <stdexcept>

namespace clfcbf {
namespace {

Eigen::VectorXd state_derivative(const ControlAffineSystem& sys,
                                 const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& u) {
  return sys.drift(x) + sys.input_map(x) * u;
}

Eigen::VectorXd project_onto_input_set(const ControlAffineSystem& sys,
                                       const Eigen::VectorXd& u) {
  QpProblem qp;
  qp.hessian = 2.0 * Eigen::MatrixXd::Identity(sys.input_dim, sys.input_dim);
  qp.linear_cost = -2.0 * u;
  qp.ineq_matrix = sys.input_matrix;
  qp.ineq_rhs = sys.input_bounds;
  const QpSolution sol = solve_qp(qp);
  if (sol.status != QpStatus::Optimal)
    throw SolverFailure("input projection failed: input set appears empty");
  return sol.x_opt;
}

bool at_goal(const PlantContext& ctx, const SimConfig& cfg,
             const Eigen::VectorXd& x) {
  if (ctx.kind != PlantKind::DoubleIntegrator) return false;
  return (x.head<2>() - ctx.goal).norm() <= cfg.goal_pos_tol &&
         x.tail<2>().norm() <= cfg.goal_vel_tol;
}

bool in_collision(const PlantContext& ctx, const Eigen::VectorXd& x) {
  if (ctx.kind == PlantKind::Acc) return x(2) <= 0.0;
  for (const Obstacle& obs : ctx.obstacles)
    if ((x.head<2>() - obs.center).norm() < obs.radius) return true;
  return false;
}

}  // namespace

Eigen::VectorXd integrate_step(const ControlAffineSystem& sys,
                               const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                               double dt, IntegratorKind integrator) {
  if (dt <= 0.0) throw std::invalid_argument("integrate_step: dt must be positive");
  Eigen::VectorXd next;
  if (integrator == IntegratorKind::Euler) {
    next = x + dt * state_derivative(sys, x, u);
  } else {
    const Eigen::VectorXd k1 = state_derivative(sys, x, u);
    const Eigen::VectorXd k2 = state_derivative(sys, x + 0.5 * dt * k1, u);
    const Eigen::VectorXd k3 = state_derivative(sys, x + 0.5 * dt * k2, u);
    const Eigen::VectorXd k4 = state_derivative(sys, x + dt * k3, u);
    next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  if (!next.allFinite()) throw SolverFailure("integrate_step: state became non-finite");
  return next;
}

TrajectoryLog simulate(const ControlAffineSystem& sys, const Certificate& clf,
                       const std::vector<Certificate>& cbfs,
                       const FrameworkConfig& fw_cfg, const SimConfig& sim_cfg,
                       const Eigen::VectorXd& x0, const PlantContext& ctx) {
  if (sim_cfg.dt <= 0.0) throw std::invalid_argument("simulate: dt must be positive");
  if (sim_cfg.horizon < sim_cfg.dt)
    throw std::invalid_argument("simulate: horizon must cover at least one step");

  const int n_steps = static_cast<int>(std::llround(sim_cfg.horizon / sim_cfg.dt));
  const int nb = static_cast<int>(cbfs.size());

  TrajectoryLog log;
  log.plant = ctx;
  log.method_id = method_name(fw_cfg.method);
  log.steps.reserve(static_cast<size_t>(n_steps));

  auto barrier_values = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd h(nb);
    for (int j = 0; j < nb; ++j) h(j) = cbfs[static_cast<size_t>(j)].value(x);
    return h;
  };

  Eigen::VectorXd x = x0;
  double t = 0.0;
  for (int k = 0; k < n_steps; ++k) {
    t = k * sim_cfg.dt;

    StepRecord rec;
    rec.t = t;
    rec.state = x;
    rec.clf_value = clf.value(x);
    rec.barrier_values = barrier_values(x);

    try {
      const ControlResult res = solve_step(sys, clf, cbfs, fw_cfg, x);
      rec.status = res.status;
      if (res.status == QpStatus::Optimal) {
        rec.u = res.u;
        rec.delta1 = res.delta1;
        rec.delta2 = res.delta2;
      } else {
        // Keep infeasibility windows visible: apply the projected nominal
        // input and flag the step instead of substituting another method.
        rec.u = project_onto_input_set(sys, sys.nominal_controller(x));
        const double nan = std::numeric_limits<double>::quiet_NaN();
        rec.delta1 = nan;
        rec.delta2 = Eigen::VectorXd::Constant(nb, nan);
      }
      x = integrate_step(sys, x, rec.u, sim_cfg.dt, sim_cfg.integrator);
    } catch (const SolverFailure& failure) {
      log.aborted = true;
      log.abort_reason = failure.what();
      break;
    }
    log.steps.push_back(std::move(rec));
    t += sim_cfg.dt;

    if (sim_cfg.stop_at_goal && at_goal(ctx, sim_cfg, x)) break;
    if (sim_cfg.stop_on_collision && in_collision(ctx, x)) break;
  }

  log.final_state = x;
  log.final_time = t;
  log.final_clf_value = clf.value(x);
  log.final_barrier_values = barrier_values(x);
  return log;
}

RunMetrics compute_metrics(const TrajectoryLog& log, PlantKind plant_kind) {
  if (log.steps.empty() && log.final_state.size() == 0)
    throw std::invalid_argument("compute_metrics: empty log");

  const PlantContext& ctx = log.plant;
  RunMetrics metrics;

  const int nb = static_cast<int>(log.final_barrier_values.size());
  metrics.min_h = log.final_barrier_values;
  for (const StepRecord& rec : log.steps)
    for (int j = 0; j < nb && j < rec.barrier_values.size(); ++j)
      metrics.min_h(j) = std::min(metrics.min_h(j), rec.barrier_values(j));

  for (const StepRecord& rec : log.steps) {
    if (rec.status == QpStatus::Infeasible) {
      ++metrics.infeasible_step_count;
      if (!metrics.first_infeasible_time) metrics.first_infeasible_time = rec.t;
    }
  }

  auto check_state = [&](double t, const Eigen::VectorXd& state) {
    if (!metrics.first_collision_time && in_collision(ctx, state)) {
      metrics.collision = true;
      metrics.first_collision_time = t;
    }
    if (plant_kind == PlantKind::DoubleIntegrator && !metrics.time_to_goal) {
      if ((state.head<2>() - ctx.goal).norm() <= 0.1 && state.tail<2>().norm() <= 0.1)
        metrics.time_to_goal = t;
    }
    if (plant_kind == PlantKind::Acc && !metrics.settling_time) {
      if (std::abs(state(1) - ctx.v_desired) <= 0.1) metrics.settling_time = t;
    }
  };
  for (const StepRecord& rec : log.steps) check_state(rec.t, rec.state);
  if (log.final_state.size() > 0) check_state(log.final_time, log.final_state);

  metrics.terminal_clf = log.final_clf_value;
  return metrics;
}

}  // namespace clfcbf
