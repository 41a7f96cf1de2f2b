#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "clfcbf/qp_solver.hpp"
#include "clfcbf/system.hpp"

namespace clfcbf {

enum class Method {
  Hard,         // both certificate rows hard
  ClfCbfQp,     // CLF row slacked, CBF row hard
  OptimalDecay, // CBF decay rate scaled by an optimized multiplier omega
  SafetyFirst,  // hierarchical: CBF slack, then CLF slack, then input norm
  Unified,      // joint QP over (u, delta1, delta2) with restricted slack domain
  LimitWeight,  // single QP with weights q, q^2 approximating SafetyFirst
};

enum class SlackDomain { Free, Zero };

struct FrameworkConfig {
  Method method = Method::SafetyFirst;
  Eigen::MatrixXd input_weight;  // H, m x m symmetric positive definite
  double p = 1.0;                // CLF slack weight
  double p_omega = 1.0;          // decay-multiplier weight (OptimalDecay)
  double omega0 = 1.0;           // nominal decay multiplier
  // Base CBF decay rate gamma0 for OptimalDecay; NaN derives gamma0 =
  // certificate decay rate / omega0 so the nominal row matches the other
  // methods.
  double gamma0 = std::numeric_limits<double>::quiet_NaN();
  double q = 1e8;  // limit weight (LimitWeight)
  // Slack domain (delta1, delta2) for Unified; see the per-method table in
  // solve_unified.
  std::array<SlackDomain, 2> slack_domain{SlackDomain::Free, SlackDomain::Free};
  // Optional explicit H_delta diagonal for Unified; empty derives the
  // method-equivalent weights from p, p_omega, gamma0 and the current h(x).
  Eigen::VectorXd h_delta;
};

struct StageDiagnostic {
  std::string name;
  double objective = 0.0;
  std::vector<int> active_set;
  int iterations = 0;
};

/// Result of one control step. delta2 carries one entry per barrier; for
/// OptimalDecay it is the equivalent CBF slack (omega0 - omega) * gamma0 * h.
struct ControlResult {
  Eigen::VectorXd u;
  double delta1 = 0.0;
  Eigen::VectorXd delta2;
  Eigen::VectorXd omega;  // per-barrier decay multipliers (OptimalDecay only)
  QpStatus status = QpStatus::Infeasible;
  std::vector<StageDiagnostic> stage_diagnostics;
  Method method = Method::SafetyFirst;
};

struct PriorityEntry {
  Certificate certificate;
  double weight = 1.0;      // c_ij within the level
  double decay_rate = 0.0;  // r_ij; 0 means use the certificate's rate
};

/// Priority levels ordered highest priority first; the terminal objective is
/// always the input deviation (u - k(x))^T H (u - k(x)).
struct PriorityList {
  std::vector<std::vector<PriorityEntry>> levels;
};

ControlResult solve_hard(const ControlAffineSystem& sys, const Certificate& clf,
                         const std::vector<Certificate>& cbfs,
                         const FrameworkConfig& cfg, const Eigen::VectorXd& x);

ControlResult solve_clf_cbf_qp(const ControlAffineSystem& sys,
                               const Certificate& clf,
                               const std::vector<Certificate>& cbfs,
                               const FrameworkConfig& cfg,
                               const Eigen::VectorXd& x);

ControlResult solve_optimal_decay(const ControlAffineSystem& sys,
                                  const Certificate& clf,
                                  const std::vector<Certificate>& cbfs,
                                  const FrameworkConfig& cfg,
                                  const Eigen::VectorXd& x);

/// Three nested QPs: minimize the CBF slack, then the CLF slack with the CBF
/// slack frozen, then the input deviation with both slacks frozen. Feasible at
/// every state; only numerical failures propagate.
ControlResult solve_safety_first(const ControlAffineSystem& sys,
                                 const Certificate& clf,
                                 const std::vector<Certificate>& cbfs,
                                 const FrameworkConfig& cfg,
                                 const Eigen::VectorXd& x);

/// Joint QP over (u, delta1, delta2) with the slack vector restricted to the
/// configured domain. Slack-domain settings reproduce the specialized
/// methods:
///   {Zero, Zero}  -> solve_hard
///   {Free, Zero}  with H_delta = diag(2p, 2)                 -> solve_clf_cbf_qp
///   {Free, Free}  with H_delta = diag(2p, 2 p_w/(g0 h)^2)    -> solve_optimal_decay
ControlResult solve_unified(const ControlAffineSystem& sys, const Certificate& clf,
                            const Certificate& cbf, const FrameworkConfig& cfg,
                            const Eigen::VectorXd& x);

/// Single QP with cost (u-k)^T H (u-k) + q delta1^2 + q^2 delta2^2; the
/// solution approaches solve_safety_first as q grows.
ControlResult solve_limit_weight(const ControlAffineSystem& sys,
                                 const Certificate& clf,
                                 const std::vector<Certificate>& cbfs,
                                 const FrameworkConfig& cfg,
                                 const Eigen::VectorXd& x);

/// General lexicographic cascade: one QP per priority level minimizing that
/// level's weighted squared slacks with higher-level slacks frozen, then a
/// final QP minimizing the input deviation. Always Optimal.
///
/// result.delta2 holds the slacks of the barrier entries flattened in list
/// order; result.delta1 is the slack of the first Lyapunov entry, if any.
ControlResult solve_priority_list(const ControlAffineSystem& sys,
                                  const PriorityList& list,
                                  const FrameworkConfig& cfg,
                                  const Eigen::VectorXd& x);

/// Standardized form of the unified QP in variables v = S (u - k(x)),
/// eps = S_delta * Delta with S^T S = H and S_delta = sqrt(H_delta). The
/// returned problem has identity cost; pinned slacks are eliminated, and
/// free_slacks records which of (delta1, delta2) remain as columns m.. of the
/// variable vector.
struct StandardizedProblem {
  QpProblem problem;
  Eigen::MatrixXd s;          // symmetric factor of H
  Eigen::MatrixXd s_inverse;
  Eigen::Vector2d s_delta;    // sqrt of the H_delta diagonal
  Eigen::VectorXd nominal_input;  // k(x)
  std::array<bool, 2> free_slacks{false, false};

  Eigen::VectorXd recover_input(const Eigen::VectorXd& z) const;
};

StandardizedProblem standardize(const ControlAffineSystem& sys,
                                const Certificate& clf, const Certificate& cbf,
                                const FrameworkConfig& cfg,
                                const Eigen::VectorXd& x);

/// Dispatch on cfg.method. A SafetyFirst configuration with several barriers
/// is solved as a priority list with one barrier per level, ordered by
/// ascending h(x), above a final CLF level.
ControlResult solve_step(const ControlAffineSystem& sys, const Certificate& clf,
                         const std::vector<Certificate>& cbfs,
                         const FrameworkConfig& cfg, const Eigen::VectorXd& x);

const char* method_name(Method method);
std::optional<Method> method_from_name(const std::string& name);

}  // namespace clfcbf
