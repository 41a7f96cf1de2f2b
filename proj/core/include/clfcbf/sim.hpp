#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "clfcbf/frameworks.hpp"
#include "clfcbf/plants.hpp"
#include "clfcbf/system.hpp"

namespace clfcbf {

enum class IntegratorKind { Euler, Rk4 };

struct SimConfig {
  double dt = 1.0 / 50.0;
  double horizon = 20.0;
  IntegratorKind integrator = IntegratorKind::Rk4;
  double goal_pos_tol = 0.1;
  double goal_vel_tol = 0.1;
  bool stop_at_goal = false;
  bool stop_on_collision = false;
};

enum class PlantKind { Acc, DoubleIntegrator };

/// Plant facts the metric extraction needs but the raw trajectory does not
/// carry: the collision predicate data and the targets.
struct PlantContext {
  PlantKind kind = PlantKind::Acc;
  double v_desired = 0.0;              // ACC
  Eigen::Vector2d goal{0.0, 0.0};      // AGV
  std::vector<Obstacle> obstacles;     // AGV
};

struct StepRecord {
  double t = 0.0;
  Eigen::VectorXd state;
  Eigen::VectorXd u;          // input actually applied over [t, t + dt)
  double clf_value = 0.0;
  Eigen::VectorXd barrier_values;
  double delta1 = 0.0;
  Eigen::VectorXd delta2;
  QpStatus status = QpStatus::Optimal;
};

struct TrajectoryLog {
  std::string scenario_id;
  std::string method_id;
  std::uint64_t config_hash = 0;
  PlantContext plant;
  std::vector<StepRecord> steps;
  Eigen::VectorXd final_state;
  double final_time = 0.0;
  double final_clf_value = 0.0;
  Eigen::VectorXd final_barrier_values;
  bool aborted = false;
  std::string abort_reason;
};

struct RunMetrics {
  Eigen::VectorXd min_h;
  std::optional<double> first_infeasible_time;
  int infeasible_step_count = 0;
  bool collision = false;
  std::optional<double> first_collision_time;
  std::optional<double> time_to_goal;
  std::optional<double> settling_time;  // first t with |v - v_d| <= 0.1 (ACC)
  double terminal_clf = 0.0;
};

/// One integration step with the input held constant (zero-order hold).
/// Throws SolverFailure if the next state is not finite.
Eigen::VectorXd integrate_step(const ControlAffineSystem& sys,
                               const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                               double dt, IntegratorKind integrator);

/// Closed-loop rollout: solve the configured framework at the current state,
/// hold the input over dt, integrate, log. Infeasible steps apply the nominal
/// input projected onto the input set and are flagged in the log; a solver
/// failure aborts the run with a partial, flagged log.
TrajectoryLog simulate(const ControlAffineSystem& sys, const Certificate& clf,
                       const std::vector<Certificate>& cbfs,
                       const FrameworkConfig& fw_cfg, const SimConfig& sim_cfg,
                       const Eigen::VectorXd& x0, const PlantContext& ctx = {});

RunMetrics compute_metrics(const TrajectoryLog& log, PlantKind plant_kind);

}  // namespace clfcbf
