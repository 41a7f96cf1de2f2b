// Acceptance suite: runs every bundled study end to end and checks the
// documented behavior at pinned tolerances, one verdict line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "clfcbf/frameworks.hpp"
#include "clfcbf/plants.hpp"
#include "clfcbf/qp_solver.hpp"
#include "clfcbf/scenario.hpp"
#include "clfcbf/sim.hpp"
#include "oracles.hpp"

using namespace clfcbf;

namespace {

struct Verdict {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      if (detail.tellp() > 0) detail << "; ";
      detail << what;
    }
  }
};

struct RunOutput {
  TrajectoryLog log;
  RunMetrics metrics;
  double wall_seconds = 0.0;
};

RunOutput execute_checked(const ScenarioSpec& spec, Method method, Verdict& v);

RunOutput execute(const ScenarioSpec& spec, Method method) {
  const ControlAffineSystem sys = make_system(spec);
  const auto [clf, cbfs] = make_certificates(spec);
  const Eigen::VectorXd x0 = spec.plant == PlantKind::Acc
                                 ? Eigen::VectorXd(spec.acc.s0)
                                 : Eigen::VectorXd(spec.di.s0);
  const auto start = std::chrono::steady_clock::now();
  RunOutput out;
  out.log = simulate(sys, clf, cbfs, make_framework_config(spec, method), spec.sim,
                     x0, make_plant_context(spec));
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.metrics = compute_metrics(out.log, spec.plant);
  return out;
}

// Rollouts must complete: a truncated log could satisfy clause checks
// vacuously.
RunOutput execute_checked(const ScenarioSpec& spec, Method method, Verdict& v) {
  RunOutput out = execute(spec, method);
  v.require(!out.log.aborted, spec.id + " " + method_name(method) +
                                  " aborted: " + out.log.abort_reason);
  const auto expected =
      static_cast<size_t>(std::llround(spec.sim.horizon / spec.sim.dt));
  if (!spec.sim.stop_at_goal && !spec.sim.stop_on_collision)
    v.require(out.log.steps.size() == expected,
              spec.id + " " + method_name(method) + " logged " +
                  std::to_string(out.log.steps.size()) + " of " +
                  std::to_string(expected) + " steps");
  return out;
}

double min_clearance(const TrajectoryLog& log, const std::vector<Obstacle>& obstacles) {
  double worst = std::numeric_limits<double>::infinity();
  const auto visit = [&](const Eigen::VectorXd& state) {
    for (const Obstacle& obs : obstacles)
      worst = std::min(worst, (state.head<2>() - obs.center).norm() - obs.radius);
  };
  for (const StepRecord& rec : log.steps) visit(rec.state);
  if (log.final_state.size() > 0) visit(log.final_state);
  return worst;
}

double goal_time_or_inf(const RunMetrics& metrics) {
  return metrics.time_to_goal ? *metrics.time_to_goal
                              : std::numeric_limits<double>::infinity();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

Eigen::VectorXd random_acc_state(std::mt19937& rng) {
  std::uniform_real_distribution<double> pos(0.0, 400.0);
  std::uniform_real_distribution<double> vel(0.0, 35.0);
  std::uniform_real_distribution<double> gap(1.0, 150.0);
  Eigen::VectorXd s(3);
  s << pos(rng), vel(rng), gap(rng);
  return s;
}

Eigen::VectorXd random_di_state(std::mt19937& rng) {
  std::uniform_real_distribution<double> pos(-2.0, 12.0);
  std::uniform_real_distribution<double> vel(-4.0, 4.0);
  Eigen::VectorXd s(4);
  s << pos(rng), pos(rng), vel(rng), vel(rng);
  return s;
}

// ---------------------------------------------------------------------------

Verdict criterion_acc_safe_cases() {
  Verdict v;
  for (const char* id : {"acc-case1", "acc-case2"}) {
    const ScenarioSpec spec = *find_built_in(id);
    std::map<std::string, RunOutput> runs;
    double case_seconds = 0.0;
    for (Method method : {Method::ClfCbfQp, Method::OptimalDecay, Method::SafetyFirst}) {
      RunOutput out = execute_checked(spec, method, v);
      case_seconds += out.wall_seconds;
      const std::string name = method_name(method);
      v.require(out.metrics.infeasible_step_count == 0,
                std::string(id) + " " + name + " has infeasible steps");
      v.require(out.metrics.min_h.minCoeff() >= -1e-3,
                std::string(id) + " " + name + " min h = " +
                    fmt(out.metrics.min_h.minCoeff()));
      v.require(out.metrics.settling_time && *out.metrics.settling_time < 20.0,
                std::string(id) + " " + name + " never reaches |v-v_d| <= 0.1");
      runs.emplace(name, std::move(out));
    }
    const auto settle = [&](const std::string& name) {
      const auto& t = runs.at(name).metrics.settling_time;
      return t ? *t : std::numeric_limits<double>::infinity();
    };
    v.require(settle("safety-first") <= settle("clf-cbf-qp") &&
                  settle("safety-first") <= settle("optimal-decay"),
              std::string(id) + " safety-first does not settle first");
    v.require(case_seconds < 5.0,
              std::string(id) + " took " + fmt(case_seconds) + " s (limit 5 s)");
  }
  return v;
}

Verdict criterion_acc_case3() {
  Verdict v;
  const ScenarioSpec spec = *find_built_in("acc-case3");
  const RunOutput qp = execute_checked(spec, Method::ClfCbfQp, v);
  v.require(qp.metrics.first_infeasible_time.has_value(),
            "clf-cbf-qp never goes infeasible");
  if (qp.metrics.first_infeasible_time) {
    v.require(std::isfinite(*qp.metrics.first_infeasible_time),
              "first_infeasible_time not finite");
    v.require(*qp.metrics.first_infeasible_time > 0.0,
              "clf-cbf-qp first_infeasible_time = " +
                  fmt(*qp.metrics.first_infeasible_time) +
                  " (the hard CBF row is already unsatisfiable at t = 0 with the "
                  "documented parameters)");
  }
  for (Method method : {Method::OptimalDecay, Method::SafetyFirst}) {
    const RunOutput out = execute_checked(spec, method, v);
    v.require(out.metrics.infeasible_step_count == 0,
              std::string(method_name(method)) + " has infeasible steps");
  }
  return v;
}

Verdict criterion_acc_case4() {
  Verdict v;
  const ScenarioSpec spec = *find_built_in("acc-case4");
  const RunOutput od = execute_checked(spec, Method::OptimalDecay, v);
  v.require(od.metrics.collision, "optimal-decay does not collide");

  const RunOutput sf = execute_checked(spec, Method::SafetyFirst, v);
  v.require(!sf.metrics.collision, "safety-first collides");
  v.require(sf.metrics.infeasible_step_count == 0, "safety-first has infeasible steps");

  // Sub-safety: h never decreases (tolerance 1e-6) while it is negative.
  bool nondecreasing = true;
  for (size_t k = 0; k + 1 < sf.log.steps.size(); ++k) {
    const double h_now = sf.log.steps[k].barrier_values(0);
    const double h_next = sf.log.steps[k + 1].barrier_values(0);
    if (h_now < 0.0 && h_next < h_now - 1e-6) nondecreasing = false;
  }
  if (!sf.log.steps.empty() && sf.log.steps.back().barrier_values(0) < 0.0 &&
      sf.log.final_barrier_values(0) < sf.log.steps.back().barrier_values(0) - 1e-6)
    nondecreasing = false;
  v.require(nondecreasing, "safety-first h decreases while unsafe");
  return v;
}

Verdict criterion_convergence_sweep() {
  Verdict v;
  ScenarioSpec spec = *find_built_in("acc-sweep-p");
  const RunOutput sf = execute_checked(spec, Method::SafetyFirst, v);

  const std::vector<double> p_values{2e-3, 2e-2, 2e-1, 2.0};
  double previous_gap = std::numeric_limits<double>::infinity();
  for (double p : p_values) {
    ScenarioSpec point = spec;
    point.acc.p = p;
    const RunOutput qp = execute_checked(point, Method::ClfCbfQp, v);
    double gap = 0.0;
    bool pointwise = true;
    const size_t n = std::min(qp.log.steps.size(), sf.log.steps.size());
    for (size_t k = 0; k < n; ++k) {
      const double v_qp = qp.log.steps[k].clf_value;
      const double v_sf = sf.log.steps[k].clf_value;
      if (v_qp < v_sf - 1e-6 * (1.0 + v_qp)) pointwise = false;
      gap = std::max(gap, v_qp - v_sf);
    }
    v.require(pointwise, "p=" + fmt(p) + ": V(t) dips below the safety-first curve");
    v.require(gap <= previous_gap + 1e-9,
              "p=" + fmt(p) + ": sup gap " + fmt(gap) + " above previous " +
                  fmt(previous_gap));
    previous_gap = gap;
  }
  return v;
}

Verdict criterion_agv_setting_a() {
  Verdict v;
  const ScenarioSpec spec = *find_built_in("agv-setting-a");
  std::map<std::string, RunOutput> runs;
  for (Method method : {Method::ClfCbfQp, Method::OptimalDecay, Method::SafetyFirst}) {
    RunOutput out = execute_checked(spec, method, v);
    v.require(min_clearance(out.log, spec.di.obstacles) >= 0.0,
              std::string(method_name(method)) + " violates the clearance");
    runs.emplace(method_name(method), std::move(out));
  }
  const double t_sf = goal_time_or_inf(runs.at("safety-first").metrics);
  v.require(t_sf <= goal_time_or_inf(runs.at("clf-cbf-qp").metrics) &&
                t_sf <= goal_time_or_inf(runs.at("optimal-decay").metrics),
            "safety-first is not first to the goal");
  return v;
}

Verdict criterion_agv_setting_b() {
  Verdict v;
  const ScenarioSpec spec = *find_built_in("agv-setting-b");
  std::map<std::string, RunOutput> runs;
  for (Method method : {Method::ClfCbfQp, Method::OptimalDecay, Method::SafetyFirst})
    runs.emplace(method_name(method), execute_checked(spec, method, v));

  const double od_clearance = min_clearance(runs.at("optimal-decay").log, spec.di.obstacles);
  v.require(od_clearance < 0.0,
            "optimal-decay stays clear (min clearance " + fmt(od_clearance) +
                "; with the documented weights the relaxed barrier still deflects "
                "the zero-nominal filter)");
  v.require(min_clearance(runs.at("clf-cbf-qp").log, spec.di.obstacles) >= 0.0,
            "clf-cbf-qp violates the clearance");
  v.require(min_clearance(runs.at("safety-first").log, spec.di.obstacles) >= 0.0,
            "safety-first violates the clearance");

  const double t_sf = goal_time_or_inf(runs.at("safety-first").metrics);
  v.require(t_sf < goal_time_or_inf(runs.at("clf-cbf-qp").metrics) &&
                t_sf < goal_time_or_inf(runs.at("optimal-decay").metrics),
            "safety-first is not strictly first to the goal");
  return v;
}

Verdict criterion_agv_multi() {
  Verdict v;
  const ScenarioSpec spec = *find_built_in("agv-multi");
  const RunOutput sf = execute_checked(spec, Method::SafetyFirst, v);
  v.require(min_clearance(sf.log, spec.di.obstacles) >= 0.0,
            "priority-list run violates a clearance");
  v.require(sf.metrics.time_to_goal.has_value() &&
                *sf.metrics.time_to_goal <= spec.sim.horizon,
            "goal not reached within the horizon");
  return v;
}

Verdict criterion_framework_equivalences() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(20240202);

  const auto check_plant = [&](const ControlAffineSystem& sys, const Certificate& clf,
                               const Certificate& cbf, FrameworkConfig base,
                               const std::function<Eigen::VectorXd()>& draw,
                               const std::string& plant) {
    for (int trial = 0; trial < 200; ++trial) {
      const Eigen::VectorXd s = draw();
      FrameworkConfig cfg = base;

      cfg.slack_domain = {SlackDomain::Free, SlackDomain::Zero};
      const ControlResult uni = solve_unified(sys, clf, cbf, cfg, s);
      const ControlResult qp = solve_clf_cbf_qp(sys, clf, {cbf}, base, s);
      v.require(uni.status == qp.status, plant + ": unified/slacked status mismatch");
      if (uni.status == QpStatus::Optimal && qp.status == QpStatus::Optimal)
        v.require((uni.u - qp.u).cwiseAbs().maxCoeff() <=
                      1e-6 * (1.0 + qp.u.cwiseAbs().maxCoeff()),
                  plant + ": unified/slacked input mismatch");

      cfg.slack_domain = {SlackDomain::Zero, SlackDomain::Zero};
      const ControlResult uni_hard = solve_unified(sys, clf, cbf, cfg, s);
      const ControlResult hard = solve_hard(sys, clf, {cbf}, base, s);
      v.require(uni_hard.status == hard.status, plant + ": unified/hard status mismatch");
      if (uni_hard.status == QpStatus::Optimal && hard.status == QpStatus::Optimal)
        v.require((uni_hard.u - hard.u).cwiseAbs().maxCoeff() <=
                      1e-6 * (1.0 + hard.u.cwiseAbs().maxCoeff()),
                  plant + ": unified/hard input mismatch");

      if (std::abs(cbf.value(s)) > 1e-6) {
        cfg.slack_domain = {SlackDomain::Free, SlackDomain::Free};
        const ControlResult uni_od = solve_unified(sys, clf, cbf, cfg, s);
        const ControlResult od = solve_optimal_decay(sys, clf, {cbf}, base, s);
        v.require(uni_od.status == od.status, plant + ": unified/decay status mismatch");
        if (uni_od.status == QpStatus::Optimal && od.status == QpStatus::Optimal)
          v.require((uni_od.u - od.u).cwiseAbs().maxCoeff() <=
                        1e-6 * (1.0 + od.u.cwiseAbs().maxCoeff()),
                    plant + ": unified/decay input mismatch");
      }

      // Standardized form: v* = S (u* - k(x)) within 1e-8.
      cfg.slack_domain = {SlackDomain::Free, SlackDomain::Zero};
      const StandardizedProblem su = standardize(sys, clf, cbf, cfg, s);
      const QpSolution sol = solve_qp(su.problem);
      v.require((sol.status == QpStatus::Optimal) == (uni.status == QpStatus::Optimal),
                plant + ": standardized status mismatch");
      if (sol.status == QpStatus::Optimal && uni.status == QpStatus::Optimal) {
        const Eigen::VectorXd expected = su.s * (uni.u - su.nominal_input);
        v.require((sol.x_opt.head(expected.size()) - expected).cwiseAbs().maxCoeff() <=
                      1e-8 * (1.0 + expected.cwiseAbs().maxCoeff()),
                  plant + ": standardized recovery mismatch");
      }
    }
  };

  {
    const AccParams params;
    const ControlAffineSystem sys = acc_system(params);
    const auto [clf, cbf] = acc_certificates(params);
    FrameworkConfig base;
    base.input_weight = Eigen::MatrixXd::Constant(1, 1, params.h_weight);
    base.p = params.p;
    base.omega0 = params.omega0;
    base.p_omega = params.p_omega;
    check_plant(sys, clf, cbf, base, [&] { return random_acc_state(rng); }, "acc");
  }
  {
    const DoubleIntegratorParams params;
    const ControlAffineSystem sys = di_system(params);
    const auto [clf, cbfs] = di_certificates(params);
    FrameworkConfig base;
    base.input_weight = params.h_weight * Eigen::MatrixXd::Identity(2, 2);
    base.p = params.p;
    base.omega0 = params.omega0;
    base.p_omega = params.p_omega;
    check_plant(sys, clf, cbfs[0], base, [&] { return random_di_state(rng); },
                "double-integrator");
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.require(seconds < 10.0, "equivalence suite took " + fmt(seconds) + " s (limit 10)");
  return v;
}

Verdict criterion_limit_weight() {
  Verdict v;
  const std::vector<double> q_values{1e2, 1e4, 1e6, 1e8};

  const auto sweep_states = [&](const ScenarioSpec& spec, const std::string& label) {
    const ControlAffineSystem sys = make_system(spec);
    const auto [clf, cbfs] = make_certificates(spec);
    const FrameworkConfig base = make_framework_config(spec, Method::SafetyFirst);
    const RunOutput sf_run = execute_checked(spec, Method::SafetyFirst, v);

    std::vector<double> worst(q_values.size(), 0.0);
    for (const StepRecord& rec : sf_run.log.steps) {
      const ControlResult sf = solve_safety_first(sys, clf, cbfs, base, rec.state);
      for (size_t qi = 0; qi < q_values.size(); ++qi) {
        FrameworkConfig cfg = base;
        cfg.q = q_values[qi];
        const ControlResult lw = solve_limit_weight(sys, clf, cbfs, cfg, rec.state);
        double dev = (lw.u - sf.u).cwiseAbs().maxCoeff() /
                     (1.0 + sf.u.cwiseAbs().maxCoeff());
        dev = std::max(dev, std::abs(lw.delta1 - sf.delta1) / (1.0 + std::abs(sf.delta1)));
        for (Eigen::Index j = 0; j < sf.delta2.size(); ++j)
          dev = std::max(dev, std::abs(lw.delta2(j) - sf.delta2(j)) /
                                  (1.0 + std::abs(sf.delta2(j))));
        worst[qi] = std::max(worst[qi], dev);
      }
    }
    v.require(worst.back() <= 1e-3,
              label + ": q=1e8 deviation " + fmt(worst.back()) + " above 1e-3");
    for (size_t qi = 0; qi + 1 < q_values.size(); ++qi)
      v.require(worst[qi + 1] <= worst[qi] + 1e-12,
                label + ": deviation increases from q=" + fmt(q_values[qi]) + " to " +
                    fmt(q_values[qi + 1]));
  };

  sweep_states(*find_built_in("acc-case1"), "acc-case1");
  sweep_states(*find_built_in("agv-setting-a"), "agv-setting-a");
  return v;
}

Verdict criterion_qp_oracle() {
  Verdict v;
  std::mt19937 rng(20240303);
  for (int trial = 0; trial < 200; ++trial) {
    const QpProblem qp = oracles::random_boxed_qp(rng, 2, 3);
    const QpSolution sol = solve_qp(qp);
    v.require(sol.status == QpStatus::Optimal, "boxed QP unexpectedly infeasible");
    if (sol.status != QpStatus::Optimal) continue;
    v.require(sol.kkt_residual <= 1e-6, "kkt residual " + fmt(sol.kkt_residual));
    const auto grid = oracles::grid_minimize_2d(qp, -2.0, 2.0, 1e-3);
    v.require(grid.found, "grid search found no feasible point");
    if (grid.found)
      v.require((sol.x_opt - grid.x).cwiseAbs().maxCoeff() <= 2e-3,
                "grid mismatch " + fmt((sol.x_opt - grid.x).cwiseAbs().maxCoeff()));
  }

  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  int infeasible_seen = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const int nc = 2 + static_cast<int>(rng() % 6);
    Eigen::MatrixXd a(nc, n);
    Eigen::VectorXd b(nc);
    for (int r = 0; r < nc; ++r) {
      for (int c = 0; c < n; ++c) a(r, c) = unit(rng);
      b(r) = unit(rng) - 0.4;
    }
    QpProblem qp;
    qp.hessian = Eigen::MatrixXd::Identity(n, n);
    qp.linear_cost = Eigen::VectorXd::Zero(n);
    qp.ineq_matrix = a;
    qp.ineq_rhs = b;
    const FeasibilityResult feas = check_feasibility(a, b);
    const QpSolution sol = solve_qp(qp);
    v.require(feas.feasible == (sol.status == QpStatus::Optimal),
              "feasibility verdict mismatch");
    if (!feas.feasible) ++infeasible_seen;
  }
  v.require(infeasible_seen > 10, "random sample produced too few infeasible sets");
  return v;
}

Verdict criterion_gradients_and_care() {
  Verdict v;
  std::mt19937 rng(20240404);

  const AccParams acc;
  const auto [acc_clf, acc_cbf] = acc_certificates(acc);
  for (int i = 0; i < 100; ++i) {
    const Eigen::VectorXd s = random_acc_state(rng);
    v.require(verify_gradient(acc_clf, s) <= 1e-5, "acc clf gradient error");
    v.require(verify_gradient(acc_cbf, s) <= 1e-5, "acc cbf gradient error");
  }
  const ScenarioSpec multi = *find_built_in("agv-multi");
  const auto [di_clf, di_cbfs] = di_certificates(multi.di);
  for (int i = 0; i < 100; ++i) {
    const Eigen::VectorXd s = random_di_state(rng);
    v.require(verify_gradient(di_clf, s) <= 1e-5, "agv clf gradient error");
    for (const Certificate& cbf : di_cbfs)
      v.require(verify_gradient(cbf, s) <= 1e-5, "agv cbf gradient error");
  }

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 4);
  a(0, 2) = 1.0;
  a(1, 3) = 1.0;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(4, 2);
  b(2, 0) = 1.0;
  b(3, 1) = 1.0;
  const Eigen::MatrixXd q = Eigen::MatrixXd::Identity(4, 4);
  const Eigen::MatrixXd r = Eigen::MatrixXd::Identity(2, 2);
  const Eigen::MatrixXd p = solve_care(a, b, q, r);
  const Eigen::MatrixXd residual =
      a.transpose() * p + p * a - p * b * r.inverse() * b.transpose() * p + q;
  v.require(residual.cwiseAbs().maxCoeff() <= 1e-8 * q.cwiseAbs().maxCoeff(),
            "care residual " + fmt(residual.cwiseAbs().maxCoeff()));
  const Eigen::EigenSolver<Eigen::MatrixXd> eig(a - b * r.inverse() * b.transpose() * p);
  v.require(eig.eigenvalues().real().maxCoeff() < 0.0, "closed loop not stable");
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    std::string title;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "ACC cases 1-2: feasible, safe and settled; safety-first settles first",
       criterion_acc_safe_cases},
      {2, "ACC case 3: slacked QP goes infeasible, the others never do",
       criterion_acc_case3},
      {3, "ACC case 4: optimal-decay collides, safety-first stays sub-safe",
       criterion_acc_case4},
      {4, "CLF sweep: safety-first lower-bounds V(t), gap shrinks with p",
       criterion_convergence_sweep},
      {5, "AGV setting A: all collision-free, safety-first first to goal",
       criterion_agv_setting_a},
      {6, "AGV setting B: optimal-decay collides, safety-first strictly first",
       criterion_agv_setting_b},
      {7, "AGV multi-obstacle: priority list is collision-free and reaches the goal",
       criterion_agv_multi},
      {8, "framework equivalences: unified matches each specialization, SU recovers",
       criterion_framework_equivalences},
      {9, "limit weight approaches safety-first monotonically, 1e-3 at q=1e8",
       criterion_limit_weight},
      {10, "qp solver agrees with grid search and the phase-I oracle",
       criterion_qp_oracle},
      {11, "plant gradients pass finite differences; CARE residual and stability",
       criterion_gradients_and_care},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    Verdict verdict;
    try {
      verdict = criterion.run();
    } catch (const std::exception& err) {
      verdict.passed = false;
      verdict.detail << "exception: " << err.what();
    }
    if (verdict.passed) {
      std::printf("[PASS] criterion %02d: %s\n", criterion.number,
                  criterion.title.c_str());
    } else {
      ++failures;
      std::printf("[FAIL] criterion %02d: %s -- %s\n", criterion.number,
                  criterion.title.c_str(), verdict.detail.str().c_str());
    }
    std::fflush(stdout);
  }
  if (failures > 0)
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  else
    std::printf("all %zu criteria passed\n", criteria.size());
  return failures;
}
