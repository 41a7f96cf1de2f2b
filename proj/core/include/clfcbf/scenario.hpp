#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clfcbf/frameworks.hpp"
#include "clfcbf/plants.hpp"
#include "clfcbf/sim.hpp"

namespace clfcbf {

/// Raised on malformed or schema-violating configuration input; the CLI maps
/// it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct MethodExpectation {
  std::optional<bool> collision;
  std::optional<bool> zero_infeasible;
  std::optional<double> settle_before;
  std::optional<bool> reach_goal;
};

struct SweepSpec {
  std::string param;
  std::vector<double> values;
  std::vector<Method> methods;  // empty means every method in the scenario
};

/// A fully resolved scenario: plant parameters with table defaults filled in,
/// the methods to run side by side, and the simulation window.
struct ScenarioSpec {
  std::string id;
  PlantKind plant = PlantKind::Acc;
  AccParams acc;
  DoubleIntegratorParams di;
  std::vector<Method> methods;
  SimConfig sim;
  std::optional<SweepSpec> sweep;
  std::map<std::string, MethodExpectation> expectations;  // keyed by method name
};

struct RunReport {
  std::string scenario;
  std::string method;
  std::string sweep_key;  // empty when the run is not a sweep point
  bool executed = false;
  std::string error;
  RunMetrics metrics;
  std::optional<MethodExpectation> expected;
  std::optional<bool> passed;  // against declared expectations, if any
};

struct SummaryReport {
  std::vector<RunReport> runs;
};

std::vector<ScenarioSpec> built_in_scenarios();
std::optional<ScenarioSpec> find_built_in(const std::string& id);

/// Parse a JSON config file into validated scenario specs. Unknown keys and
/// schema violations raise ConfigError naming the offending field.
std::vector<ScenarioSpec> parse_config(const std::string& path);
std::vector<ScenarioSpec> parse_config_text(const std::string& text);

/// Canonical JSON form of a spec; parse_config_text on the result reproduces
/// the spec field for field.
std::string serialize_scenario(const ScenarioSpec& spec);

std::uint64_t scenario_hash(const ScenarioSpec& spec, const std::string& method,
                            const std::string& sweep_key);

/// Build the per-plant pieces a run needs.
ControlAffineSystem make_system(const ScenarioSpec& spec);
std::pair<Certificate, std::vector<Certificate>> make_certificates(
    const ScenarioSpec& spec);
FrameworkConfig make_framework_config(const ScenarioSpec& spec, Method method);
PlantContext make_plant_context(const ScenarioSpec& spec);

/// Run every (method, sweep point) pair of the scenario, writing one
/// trajectory CSV per run plus `<scenario>__summary.json` into out_dir.
/// Solver failures are recorded in the report and do not abort sibling runs.
SummaryReport run_scenario(const ScenarioSpec& spec, const std::string& out_dir);

/// CSV columns: t, x1..xn, u1..um, V, h1..hk, delta1, delta2_1..delta2_k,
/// status; floats as shortest round-trip decimals, status as OPT/INF.
void write_trajectory_csv(const TrajectoryLog& log, const std::string& path);

void write_summary(const SummaryReport& report, const std::string& path);
std::string summary_to_json(const SummaryReport& report);

}  // namespace clfcbf
