#include <charconv>
#include <fstream>
#include <string>

#include <json.hpp>

#include "clfcbf/scenario.hpp"

namespace clfcbf {
namespace {

using ordered_json = nlohmann::ordered_json;

// Shortest decimal that round-trips to the same double.
std::string shortest(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

ordered_json optional_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

void write_trajectory_csv(const TrajectoryLog& log, const std::string& path) {
  const int n = static_cast<int>(log.steps.empty() ? log.final_state.size()
                                                   : log.steps.front().state.size());
  const int m = static_cast<int>(log.steps.empty() ? 0 : log.steps.front().u.size());
  const int k = static_cast<int>(log.final_barrier_values.size());

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_trajectory_csv: cannot open '" + path + "'");

  out << "t";
  for (int i = 1; i <= n; ++i) out << ",x" << i;
  for (int i = 1; i <= m; ++i) out << ",u" << i;
  out << ",V";
  for (int i = 1; i <= k; ++i) out << ",h" << i;
  out << ",delta1";
  for (int i = 1; i <= k; ++i) out << ",delta2_" << i;
  out << ",status\n";

  for (const StepRecord& rec : log.steps) {
    out << shortest(rec.t);
    for (int i = 0; i < n; ++i) out << ',' << shortest(rec.state(i));
    for (int i = 0; i < m; ++i) out << ',' << shortest(rec.u(i));
    out << ',' << shortest(rec.clf_value);
    for (int i = 0; i < k; ++i) out << ',' << shortest(rec.barrier_values(i));
    out << ',' << shortest(rec.delta1);
    for (int i = 0; i < k; ++i) out << ',' << shortest(rec.delta2(i));
    out << ',' << (rec.status == QpStatus::Optimal ? "OPT" : "INF") << '\n';
  }
  if (!out) throw std::runtime_error("write_trajectory_csv: write failed for '" + path + "'");
}

std::string summary_to_json(const SummaryReport& report) {
  ordered_json j;
  j["version"] = "1";
  ordered_json runs = ordered_json::array();
  for (const RunReport& run : report.runs) {
    ordered_json r;
    r["scenario"] = run.scenario;
    r["method"] = run.method;
    if (!run.sweep_key.empty()) r["sweep_key"] = run.sweep_key;
    r["executed"] = run.executed;
    if (!run.error.empty()) r["error"] = run.error;

    ordered_json metrics;
    ordered_json min_h = ordered_json::array();
    for (Eigen::Index i = 0; i < run.metrics.min_h.size(); ++i)
      min_h.push_back(run.metrics.min_h(i));
    metrics["min_h"] = min_h;
    metrics["first_infeasible_time"] = optional_json(run.metrics.first_infeasible_time);
    metrics["infeasible_step_count"] = run.metrics.infeasible_step_count;
    metrics["collision"] = run.metrics.collision;
    metrics["first_collision_time"] = optional_json(run.metrics.first_collision_time);
    metrics["time_to_goal"] = optional_json(run.metrics.time_to_goal);
    metrics["settling_time"] = optional_json(run.metrics.settling_time);
    metrics["terminal_clf"] = run.metrics.terminal_clf;
    r["metrics"] = metrics;

    if (run.expected) {
      ordered_json e = ordered_json::object();
      if (run.expected->collision) e["collision"] = *run.expected->collision;
      if (run.expected->zero_infeasible) e["zero_infeasible"] = *run.expected->zero_infeasible;
      if (run.expected->settle_before) e["settle_before"] = *run.expected->settle_before;
      if (run.expected->reach_goal) e["reach_goal"] = *run.expected->reach_goal;
      r["expected"] = e;
    } else {
      r["expected"] = nullptr;
    }
    r["passed"] = run.passed ? ordered_json(*run.passed) : ordered_json(nullptr);
    runs.push_back(r);
  }
  j["runs"] = runs;
  return j.dump();
}

void write_summary(const SummaryReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_summary: cannot open '" + path + "'");
  out << summary_to_json(report) << '\n';
  if (!out) throw std::runtime_error("write_summary: write failed for '" + path + "'");
}

}  // namespace clfcbf
