// Scenario runner: executes the bundled (or user-supplied) closed-loop
// studies and writes one trajectory CSV per run plus a summary JSON per
// scenario.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clfcbf/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitExecutionError = 1;
constexpr int kExitConfigError = 2;

std::string describe(const clfcbf::RunMetrics& m) {
  std::string out = "min_h=" + std::to_string(m.min_h.size() > 0 ? m.min_h.minCoeff() : 0.0);
  out += " infeasible_steps=" + std::to_string(m.infeasible_step_count);
  out += m.collision ? " collision" : " no-collision";
  if (m.time_to_goal) out += " goal@" + std::to_string(*m.time_to_goal) + "s";
  if (m.settling_time) out += " settle@" + std::to_string(*m.settling_time) + "s";
  return out;
}

int run_command(const std::string& config_path, const std::string& scenario_id,
                const std::string& method_name_arg, const std::string& out_dir) {
  std::vector<clfcbf::ScenarioSpec> specs;
  try {
    specs = config_path.empty() ? clfcbf::built_in_scenarios()
                                : clfcbf::parse_config(config_path);
    if (!scenario_id.empty()) {
      std::vector<clfcbf::ScenarioSpec> filtered;
      for (clfcbf::ScenarioSpec& spec : specs)
        if (spec.id == scenario_id) filtered.push_back(std::move(spec));
      if (filtered.empty())
        throw clfcbf::ConfigError("config: no scenario with id '" + scenario_id + "'");
      specs = std::move(filtered);
    }
    if (!method_name_arg.empty()) {
      const auto method = clfcbf::method_from_name(method_name_arg);
      if (!method)
        throw clfcbf::ConfigError("config: unknown method '" + method_name_arg + "'");
      for (clfcbf::ScenarioSpec& spec : specs) spec.methods = {*method};
    }
  } catch (const clfcbf::ConfigError& err) {
    std::fprintf(stderr, "%s\n", err.what());
    return kExitConfigError;
  }

  bool all_executed = true;
  try {
    for (const clfcbf::ScenarioSpec& spec : specs) {
      const clfcbf::SummaryReport report = clfcbf::run_scenario(spec, out_dir);
      for (const clfcbf::RunReport& run : report.runs) {
        std::string line = run.scenario + " / " + run.method;
        if (!run.sweep_key.empty()) line += " / " + run.sweep_key;
        if (run.executed) {
          line += ": " + describe(run.metrics);
          if (run.passed.has_value())
            line += *run.passed ? " [expected]" : " [UNEXPECTED]";
        } else {
          line += ": ERROR " + run.error;
          all_executed = false;
        }
        std::printf("%s\n", line.c_str());
      }
    }
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitExecutionError;
  }
  return all_executed ? kExitOk : kExitExecutionError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CLF-CBF quadratic-program control framework scenario runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string scenario_id;
  std::string method;
  std::string out_dir;

  CLI::App* run = app.add_subcommand("run", "Execute scenarios and write CSV/JSON results");
  run->add_option("--config", config_path, "JSON scenario config (defaults to the built-ins)");
  run->add_option("--scenario", scenario_id, "Only run the scenario with this id");
  run->add_option("--method", method, "Only run this framework method");
  run->add_option("--out", out_dir, "Output directory")->required();

  CLI::App* list = app.add_subcommand("list-scenarios", "List the built-in scenario ids");

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "Validate a scenario config file");
  validate->add_option("--config", validate_path, "JSON scenario config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? kExitOk : kExitConfigError;
  }

  if (run->parsed()) return run_command(config_path, scenario_id, method, out_dir);

  if (list->parsed()) {
    for (const clfcbf::ScenarioSpec& spec : clfcbf::built_in_scenarios()) {
      std::string methods;
      for (clfcbf::Method m : spec.methods) {
        if (!methods.empty()) methods += ", ";
        methods += clfcbf::method_name(m);
      }
      std::printf("%-16s %-18s [%s]\n", spec.id.c_str(),
                  spec.plant == clfcbf::PlantKind::Acc ? "acc" : "double-integrator",
                  methods.c_str());
    }
    return kExitOk;
  }

  if (validate->parsed()) {
    try {
      const auto specs = clfcbf::parse_config(validate_path);
      std::printf("OK: %zu scenario(s)\n", specs.size());
      return kExitOk;
    } catch (const clfcbf::ConfigError& err) {
      std::fprintf(stderr, "%s\n", err.what());
      return kExitConfigError;
    }
  }
  return kExitConfigError;
}
