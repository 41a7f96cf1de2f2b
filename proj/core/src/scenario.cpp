#include "clfcbf/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace clfcbf {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

double as_number(const ordered_json& j, const std::string& where) {
  if (!j.is_number()) fail("config: " + where + " must be a number");
  return j.get<double>();
}

bool as_bool(const ordered_json& j, const std::string& where) {
  if (!j.is_boolean()) fail("config: " + where + " must be a boolean");
  return j.get<bool>();
}

Eigen::VectorXd as_vector(const ordered_json& j, Eigen::Index size,
                          const std::string& where) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != size)
    fail("config: " + where + " must be an array of " + std::to_string(size) +
         " numbers");
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i)
    v(i) = as_number(j[static_cast<size_t>(i)], where);
  return v;
}

Eigen::MatrixXd as_matrix(const ordered_json& j, Eigen::Index rows,
                          Eigen::Index cols, const std::string& where) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
    fail("config: " + where + " must be a " + std::to_string(rows) + "x" +
         std::to_string(cols) + " matrix");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    m.row(r) = as_vector(j[static_cast<size_t>(r)], cols, where).transpose();
  return m;
}

ordered_json vector_json(const Eigen::VectorXd& v) {
  ordered_json arr = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

ordered_json matrix_json(const Eigen::MatrixXd& m) {
  ordered_json arr = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    arr.push_back(vector_json(m.row(r).transpose()));
  return arr;
}

// Scalar plant parameters addressable by name, shared by plant_params
// overrides and sweep application.
double* acc_scalar_field(AccParams& p, const std::string& key) {
  if (key == "m") return &p.m;
  if (key == "grav") return &p.grav;
  if (key == "t_h") return &p.t_h;
  if (key == "v0") return &p.v0;
  if (key == "v_d") return &p.v_d;
  if (key == "f0") return &p.f0;
  if (key == "f1") return &p.f1;
  if (key == "f2") return &p.f2;
  if (key == "c_a") return &p.c_a;
  if (key == "c_d") return &p.c_d;
  if (key == "lambda") return &p.lambda;
  if (key == "gamma") return &p.gamma;
  if (key == "h_weight") return &p.h_weight;
  if (key == "p") return &p.p;
  if (key == "omega0") return &p.omega0;
  if (key == "p_omega") return &p.p_omega;
  return nullptr;
}

double* di_scalar_field(DoubleIntegratorParams& p, const std::string& key) {
  if (key == "lambda") return &p.lambda;
  if (key == "gamma") return &p.gamma;
  if (key == "h_weight") return &p.h_weight;
  if (key == "p") return &p.p;
  if (key == "omega0") return &p.omega0;
  if (key == "p_omega") return &p.p_omega;
  if (key == "input_bound") return &p.input_bound;
  return nullptr;
}

void apply_acc_param(AccParams& params, const std::string& key,
                     const ordered_json& value, const std::string& where) {
  if (double* field = acc_scalar_field(params, key)) {
    *field = as_number(value, where + "." + key);
    return;
  }
  if (key == "s0") {
    params.s0 = as_vector(value, 3, where + ".s0");
    return;
  }
  fail("config: unknown acc parameter '" + key + "' in " + where);
}

void apply_di_param(DoubleIntegratorParams& params, const std::string& key,
                    const ordered_json& value, const std::string& where) {
  if (double* field = di_scalar_field(params, key)) {
    *field = as_number(value, where + "." + key);
    return;
  }
  if (key == "s0") {
    params.s0 = as_vector(value, 4, where + ".s0");
    return;
  }
  if (key == "p_d") {
    params.p_d = as_vector(value, 2, where + ".p_d");
    return;
  }
  if (key == "lqr_q") {
    params.lqr_q = as_matrix(value, 4, 4, where + ".lqr_q");
    return;
  }
  if (key == "lqr_r") {
    params.lqr_r = as_matrix(value, 2, 2, where + ".lqr_r");
    return;
  }
  if (key == "obstacles") {
    if (!value.is_array() || value.empty())
      fail("config: " + where + ".obstacles must be a non-empty array");
    params.obstacles.clear();
    for (size_t i = 0; i < value.size(); ++i) {
      const ordered_json& o = value[i];
      const std::string ow = where + ".obstacles[" + std::to_string(i) + "]";
      if (!o.is_object()) fail("config: " + ow + " must be an object");
      for (const auto& kv : o.items())
        if (kv.key() != "center" && kv.key() != "radius")
          fail("config: unknown key '" + kv.key() + "' in " + ow);
      if (!o.contains("center") || !o.contains("radius"))
        fail("config: " + ow + " needs center and radius");
      Obstacle obs;
      obs.center = as_vector(o["center"], 2, ow + ".center");
      obs.radius = as_number(o["radius"], ow + ".radius");
      if (obs.radius <= 0.0) fail("config: " + ow + ".radius must be positive");
      params.obstacles.push_back(obs);
    }
    return;
  }
  fail("config: unknown double-integrator parameter '" + key + "' in " + where);
}

void apply_sweep_value(ScenarioSpec& spec, const std::string& param, double value) {
  double* field = spec.plant == PlantKind::Acc
                      ? acc_scalar_field(spec.acc, param)
                      : di_scalar_field(spec.di, param);
  if (!field) fail("config: sweep parameter '" + param + "' is not a scalar plant parameter");
  *field = value;
}

Method parse_method(const ordered_json& j, const std::string& where) {
  if (!j.is_string()) fail("config: " + where + " must be a method name");
  const auto m = method_from_name(j.get<std::string>());
  if (!m) fail("config: " + where + " names unknown method '" + j.get<std::string>() + "'");
  return *m;
}

void apply_sim_defaults(ScenarioSpec& spec) {
  spec.sim = SimConfig{};
  if (spec.plant == PlantKind::Acc) {
    spec.sim.horizon = 20.0;
  } else {
    spec.sim.horizon = 15.0;
    spec.sim.stop_at_goal = true;
  }
}

ScenarioSpec parse_scenario(const ordered_json& j, size_t index) {
  const std::string where = "scenarios[" + std::to_string(index) + "]";
  if (!j.is_object()) fail("config: " + where + " must be an object");

  static const std::vector<std::string> known{
      "id", "plant", "plant_params", "methods", "sim", "sweep", "expectations"};
  for (const auto& kv : j.items())
    if (std::find(known.begin(), known.end(), kv.key()) == known.end())
      fail("config: unknown key '" + kv.key() + "' in " + where);

  ScenarioSpec spec;
  if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty())
    fail("config: " + where + " needs a non-empty string id");
  spec.id = j["id"].get<std::string>();

  if (!j.contains("plant") || !j["plant"].is_string())
    fail("config: " + where + " needs a plant name");
  const std::string plant = j["plant"].get<std::string>();
  if (plant == "acc") {
    spec.plant = PlantKind::Acc;
  } else if (plant == "double-integrator") {
    spec.plant = PlantKind::DoubleIntegrator;
  } else {
    fail("config: " + where + " names unknown plant '" + plant + "'");
  }
  apply_sim_defaults(spec);

  if (j.contains("plant_params")) {
    const ordered_json& pp = j["plant_params"];
    if (!pp.is_object()) fail("config: " + where + ".plant_params must be an object");
    for (const auto& kv : pp.items()) {
      if (spec.plant == PlantKind::Acc)
        apply_acc_param(spec.acc, kv.key(), kv.value(), where + ".plant_params");
      else
        apply_di_param(spec.di, kv.key(), kv.value(), where + ".plant_params");
    }
  }

  if (!j.contains("methods") || !j["methods"].is_array() || j["methods"].empty())
    fail("config: " + where + " needs a non-empty methods list");
  for (size_t i = 0; i < j["methods"].size(); ++i)
    spec.methods.push_back(
        parse_method(j["methods"][i], where + ".methods[" + std::to_string(i) + "]"));

  if (j.contains("sim")) {
    const ordered_json& s = j["sim"];
    if (!s.is_object()) fail("config: " + where + ".sim must be an object");
    for (const auto& kv : s.items()) {
      const std::string key = kv.key();
      const std::string sw = where + ".sim." + key;
      if (key == "dt") {
        spec.sim.dt = as_number(kv.value(), sw);
      } else if (key == "horizon") {
        spec.sim.horizon = as_number(kv.value(), sw);
      } else if (key == "integrator") {
        if (!kv.value().is_string()) fail("config: " + sw + " must be a string");
        const std::string name = kv.value().get<std::string>();
        if (name == "euler") spec.sim.integrator = IntegratorKind::Euler;
        else if (name == "rk4") spec.sim.integrator = IntegratorKind::Rk4;
        else fail("config: " + sw + " must be 'euler' or 'rk4'");
      } else if (key == "goal_pos_tol") {
        spec.sim.goal_pos_tol = as_number(kv.value(), sw);
      } else if (key == "goal_vel_tol") {
        spec.sim.goal_vel_tol = as_number(kv.value(), sw);
      } else if (key == "stop_at_goal") {
        spec.sim.stop_at_goal = as_bool(kv.value(), sw);
      } else if (key == "stop_on_collision") {
        spec.sim.stop_on_collision = as_bool(kv.value(), sw);
      } else {
        fail("config: unknown key '" + key + "' in " + where + ".sim");
      }
    }
    if (spec.sim.dt <= 0.0) fail("config: " + where + ".sim.dt must be positive");
    if (spec.sim.horizon < spec.sim.dt)
      fail("config: " + where + ".sim.horizon must cover at least one step");
  }

  if (j.contains("sweep")) {
    const ordered_json& s = j["sweep"];
    if (!s.is_object()) fail("config: " + where + ".sweep must be an object");
    for (const auto& kv : s.items())
      if (kv.key() != "param" && kv.key() != "values" && kv.key() != "methods")
        fail("config: unknown key '" + kv.key() + "' in " + where + ".sweep");
    if (!s.contains("param") || !s["param"].is_string())
      fail("config: " + where + ".sweep needs a param name");
    if (!s.contains("values") || !s["values"].is_array() || s["values"].empty())
      fail("config: " + where + ".sweep needs a non-empty values array");
    SweepSpec sweep;
    sweep.param = s["param"].get<std::string>();
    for (size_t i = 0; i < s["values"].size(); ++i)
      sweep.values.push_back(
          as_number(s["values"][i], where + ".sweep.values[" + std::to_string(i) + "]"));
    if (s.contains("methods")) {
      if (!s["methods"].is_array()) fail("config: " + where + ".sweep.methods must be a list");
      for (size_t i = 0; i < s["methods"].size(); ++i)
        sweep.methods.push_back(parse_method(
            s["methods"][i], where + ".sweep.methods[" + std::to_string(i) + "]"));
    }
    // Validate the parameter name against the plant schema.
    ScenarioSpec probe = spec;
    apply_sweep_value(probe, sweep.param, sweep.values.front());
    spec.sweep = std::move(sweep);
  }

  if (j.contains("expectations")) {
    const ordered_json& e = j["expectations"];
    if (!e.is_object()) fail("config: " + where + ".expectations must be an object");
    for (const auto& kv : e.items()) {
      if (!method_from_name(kv.key()))
        fail("config: expectations key '" + kv.key() + "' is not a method name");
      if (!kv.value().is_object())
        fail("config: " + where + ".expectations." + kv.key() + " must be an object");
      MethodExpectation exp;
      for (const auto& field : kv.value().items()) {
        const std::string fw = where + ".expectations." + kv.key() + "." + field.key();
        if (field.key() == "collision") exp.collision = as_bool(field.value(), fw);
        else if (field.key() == "zero_infeasible") exp.zero_infeasible = as_bool(field.value(), fw);
        else if (field.key() == "settle_before") exp.settle_before = as_number(field.value(), fw);
        else if (field.key() == "reach_goal") exp.reach_goal = as_bool(field.value(), fw);
        else fail("config: unknown key '" + field.key() + "' in " + fw);
      }
      spec.expectations[kv.key()] = exp;
    }
  }
  return spec;
}

ordered_json expectation_json(const MethodExpectation& e) {
  ordered_json j = ordered_json::object();
  if (e.collision) j["collision"] = *e.collision;
  if (e.zero_infeasible) j["zero_infeasible"] = *e.zero_infeasible;
  if (e.settle_before) j["settle_before"] = *e.settle_before;
  if (e.reach_goal) j["reach_goal"] = *e.reach_goal;
  return j;
}

ordered_json scenario_json(const ScenarioSpec& spec) {
  ordered_json j;
  j["id"] = spec.id;
  j["plant"] = spec.plant == PlantKind::Acc ? "acc" : "double-integrator";
  ordered_json pp = ordered_json::object();
  if (spec.plant == PlantKind::Acc) {
    const AccParams& p = spec.acc;
    pp["m"] = p.m;
    pp["grav"] = p.grav;
    pp["t_h"] = p.t_h;
    pp["v0"] = p.v0;
    pp["v_d"] = p.v_d;
    pp["f0"] = p.f0;
    pp["f1"] = p.f1;
    pp["f2"] = p.f2;
    pp["c_a"] = p.c_a;
    pp["c_d"] = p.c_d;
    pp["lambda"] = p.lambda;
    pp["gamma"] = p.gamma;
    pp["h_weight"] = p.h_weight;
    pp["p"] = p.p;
    pp["omega0"] = p.omega0;
    pp["p_omega"] = p.p_omega;
    pp["s0"] = vector_json(p.s0);
  } else {
    const DoubleIntegratorParams& p = spec.di;
    pp["s0"] = vector_json(p.s0);
    pp["p_d"] = vector_json(p.p_d);
    ordered_json obstacles = ordered_json::array();
    for (const Obstacle& o : p.obstacles) {
      ordered_json oj;
      oj["center"] = vector_json(o.center);
      oj["radius"] = o.radius;
      obstacles.push_back(oj);
    }
    pp["obstacles"] = obstacles;
    pp["lambda"] = p.lambda;
    pp["gamma"] = p.gamma;
    pp["h_weight"] = p.h_weight;
    pp["p"] = p.p;
    pp["omega0"] = p.omega0;
    pp["p_omega"] = p.p_omega;
    pp["input_bound"] = p.input_bound;
    pp["lqr_q"] = matrix_json(p.lqr_q);
    pp["lqr_r"] = matrix_json(p.lqr_r);
  }
  j["plant_params"] = pp;
  ordered_json methods = ordered_json::array();
  for (Method m : spec.methods) methods.push_back(method_name(m));
  j["methods"] = methods;
  ordered_json sim;
  sim["dt"] = spec.sim.dt;
  sim["horizon"] = spec.sim.horizon;
  sim["integrator"] = spec.sim.integrator == IntegratorKind::Rk4 ? "rk4" : "euler";
  sim["goal_pos_tol"] = spec.sim.goal_pos_tol;
  sim["goal_vel_tol"] = spec.sim.goal_vel_tol;
  sim["stop_at_goal"] = spec.sim.stop_at_goal;
  sim["stop_on_collision"] = spec.sim.stop_on_collision;
  j["sim"] = sim;
  if (spec.sweep) {
    ordered_json sweep;
    sweep["param"] = spec.sweep->param;
    ordered_json values = ordered_json::array();
    for (double v : spec.sweep->values) values.push_back(v);
    sweep["values"] = values;
    if (!spec.sweep->methods.empty()) {
      ordered_json ms = ordered_json::array();
      for (Method m : spec.sweep->methods) ms.push_back(method_name(m));
      sweep["methods"] = ms;
    }
    j["sweep"] = sweep;
  }
  if (!spec.expectations.empty()) {
    ordered_json e = ordered_json::object();
    for (const auto& [name, exp] : spec.expectations) e[name] = expectation_json(exp);
    j["expectations"] = e;
  }
  return j;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

}  // namespace

std::vector<ScenarioSpec> built_in_scenarios() {
  std::vector<ScenarioSpec> all;

  const auto acc_case = [](const std::string& id, double v_d, double z0) {
    ScenarioSpec spec;
    spec.id = id;
    spec.plant = PlantKind::Acc;
    spec.acc.v_d = v_d;
    spec.acc.s0 << 0.0, 20.0, z0;
    spec.methods = {Method::ClfCbfQp, Method::OptimalDecay, Method::SafetyFirst};
    spec.sim.horizon = 20.0;
    return spec;
  };

  {
    ScenarioSpec spec = acc_case("acc-case1", 10.0, 100.0);
    for (const char* m : {"clf-cbf-qp", "optimal-decay", "safety-first"}) {
      MethodExpectation e;
      e.collision = false;
      e.zero_infeasible = true;
      e.settle_before = 20.0;
      spec.expectations[m] = e;
    }
    all.push_back(spec);
  }
  {
    ScenarioSpec spec = acc_case("acc-case2", 24.0, 100.0);
    for (const char* m : {"clf-cbf-qp", "optimal-decay", "safety-first"}) {
      MethodExpectation e;
      e.collision = false;
      e.zero_infeasible = true;
      e.settle_before = 20.0;
      spec.expectations[m] = e;
    }
    all.push_back(spec);
  }
  {
    ScenarioSpec spec = acc_case("acc-case3", 10.0, 20.0);
    MethodExpectation qp;
    qp.zero_infeasible = false;
    spec.expectations["clf-cbf-qp"] = qp;
    MethodExpectation od;
    od.zero_infeasible = true;
    spec.expectations["optimal-decay"] = od;
    MethodExpectation sf;
    sf.zero_infeasible = true;
    sf.collision = false;
    spec.expectations["safety-first"] = sf;
    all.push_back(spec);
  }
  {
    ScenarioSpec spec = acc_case("acc-case4", 24.0, 20.0);
    MethodExpectation od;
    od.collision = true;
    spec.expectations["optimal-decay"] = od;
    MethodExpectation sf;
    sf.collision = false;
    sf.zero_infeasible = true;
    spec.expectations["safety-first"] = sf;
    all.push_back(spec);
  }
  {
    ScenarioSpec spec = acc_case("acc-sweep-p", 10.0, 100.0);
    spec.methods = {Method::ClfCbfQp, Method::SafetyFirst};
    SweepSpec sweep;
    sweep.param = "p";
    sweep.values = {2e-3, 2e-2, 2e-1, 2.0};
    sweep.methods = {Method::ClfCbfQp};
    spec.sweep = sweep;
    all.push_back(spec);
  }

  const auto agv_case = [](const std::string& id, double p, double p_omega) {
    ScenarioSpec spec;
    spec.id = id;
    spec.plant = PlantKind::DoubleIntegrator;
    spec.di.p = p;
    spec.di.p_omega = p_omega;
    spec.methods = {Method::ClfCbfQp, Method::OptimalDecay, Method::SafetyFirst};
    spec.sim.horizon = 15.0;
    spec.sim.stop_at_goal = true;
    return spec;
  };

  {
    ScenarioSpec spec = agv_case("agv-setting-a", 1.0, 10.0);
    for (const char* m : {"clf-cbf-qp", "optimal-decay", "safety-first"}) {
      MethodExpectation e;
      e.collision = false;
      e.reach_goal = true;
      spec.expectations[m] = e;
    }
    all.push_back(spec);
  }
  {
    ScenarioSpec spec = agv_case("agv-setting-b", 0.01, 1.0);
    MethodExpectation od;
    od.collision = true;
    spec.expectations["optimal-decay"] = od;
    MethodExpectation qp;
    qp.collision = false;
    spec.expectations["clf-cbf-qp"] = qp;
    MethodExpectation sf;
    sf.collision = false;
    sf.reach_goal = true;
    spec.expectations["safety-first"] = sf;
    all.push_back(spec);
  }
  {
    ScenarioSpec spec = agv_case("agv-multi", 1.0, 10.0);
    spec.sim.horizon = 20.0;  // the six-obstacle detour lengthens the path
    spec.methods = {Method::SafetyFirst};
    spec.di.obstacles = {
        {Eigen::Vector2d{5.0, 3.0}, 1.0}, {Eigen::Vector2d{4.0, 1.0}, 1.0},
        {Eigen::Vector2d{9.0, 1.0}, 1.0}, {Eigen::Vector2d{1.0, 4.0}, 0.5},
        {Eigen::Vector2d{3.0, 3.0}, 0.5}, {Eigen::Vector2d{6.0, 1.0}, 0.3}};
    MethodExpectation sf;
    sf.collision = false;
    sf.reach_goal = true;
    spec.expectations["safety-first"] = sf;
    all.push_back(spec);
  }
  return all;
}

std::optional<ScenarioSpec> find_built_in(const std::string& id) {
  for (ScenarioSpec& spec : built_in_scenarios())
    if (spec.id == id) return std::move(spec);
  return std::nullopt;
}

std::vector<ScenarioSpec> parse_config_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    fail(std::string("config: JSON parse error: ") + err.what());
  }
  if (!j.is_object()) fail("config: top level must be an object");
  for (const auto& kv : j.items())
    if (kv.key() != "scenarios")
      fail("config: unknown top-level key '" + kv.key() + "'");
  if (!j.contains("scenarios") || !j["scenarios"].is_array())
    fail("config: top level needs a scenarios array");

  std::vector<ScenarioSpec> specs;
  for (size_t i = 0; i < j["scenarios"].size(); ++i)
    specs.push_back(parse_scenario(j["scenarios"][i], i));
  for (size_t i = 0; i < specs.size(); ++i)
    for (size_t k = i + 1; k < specs.size(); ++k)
      if (specs[i].id == specs[k].id)
        fail("config: duplicate scenario id '" + specs[i].id + "'");
  return specs;
}

std::vector<ScenarioSpec> parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("config: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string serialize_scenario(const ScenarioSpec& spec) {
  return scenario_json(spec).dump(2);
}

std::uint64_t scenario_hash(const ScenarioSpec& spec, const std::string& method,
                            const std::string& sweep_key) {
  return fnv1a(serialize_scenario(spec) + "|" + method + "|" + sweep_key);
}

ControlAffineSystem make_system(const ScenarioSpec& spec) {
  return spec.plant == PlantKind::Acc ? acc_system(spec.acc) : di_system(spec.di);
}

std::pair<Certificate, std::vector<Certificate>> make_certificates(
    const ScenarioSpec& spec) {
  if (spec.plant == PlantKind::Acc) {
    auto [clf, cbf] = acc_certificates(spec.acc);
    return {clf, {cbf}};
  }
  return di_certificates(spec.di);
}

FrameworkConfig make_framework_config(const ScenarioSpec& spec, Method method) {
  FrameworkConfig cfg;
  cfg.method = method;
  if (spec.plant == PlantKind::Acc) {
    cfg.input_weight = Eigen::MatrixXd::Constant(1, 1, spec.acc.h_weight);
    cfg.p = spec.acc.p;
    cfg.omega0 = spec.acc.omega0;
    cfg.p_omega = spec.acc.p_omega;
  } else {
    cfg.input_weight = spec.di.h_weight * Eigen::MatrixXd::Identity(2, 2);
    cfg.p = spec.di.p;
    cfg.omega0 = spec.di.omega0;
    cfg.p_omega = spec.di.p_omega;
  }
  return cfg;
}

PlantContext make_plant_context(const ScenarioSpec& spec) {
  PlantContext ctx;
  ctx.kind = spec.plant;
  if (spec.plant == PlantKind::Acc) {
    ctx.v_desired = spec.acc.v_d;
  } else {
    ctx.goal = spec.di.p_d;
    ctx.obstacles = spec.di.obstacles;
  }
  return ctx;
}

namespace {

std::optional<bool> evaluate_expectations(const ScenarioSpec& spec,
                                          const std::string& method,
                                          const RunMetrics& metrics) {
  const auto it = spec.expectations.find(method);
  if (it == spec.expectations.end()) return std::nullopt;
  const MethodExpectation& e = it->second;
  bool ok = true;
  if (e.collision) ok = ok && metrics.collision == *e.collision;
  if (e.zero_infeasible) ok = ok && (metrics.infeasible_step_count == 0) == *e.zero_infeasible;
  if (e.settle_before)
    ok = ok && metrics.settling_time && *metrics.settling_time <= *e.settle_before;
  if (e.reach_goal) ok = ok && metrics.time_to_goal.has_value() == *e.reach_goal;
  return ok;
}

}  // namespace

SummaryReport run_scenario(const ScenarioSpec& spec, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("run_scenario: cannot create '" + out_dir + "': " + ec.message());

  SummaryReport report;
  for (Method method : spec.methods) {
    const std::string method_id = method_name(method);
    const bool swept =
        spec.sweep && (spec.sweep->methods.empty() ||
                       std::find(spec.sweep->methods.begin(), spec.sweep->methods.end(),
                                 method) != spec.sweep->methods.end());
    std::vector<std::optional<double>> points;
    if (swept)
      for (double v : spec.sweep->values) points.emplace_back(v);
    else
      points.emplace_back(std::nullopt);

    for (const std::optional<double>& point : points) {
      ScenarioSpec resolved = spec;
      std::string sweep_key;
      if (point) {
        apply_sweep_value(resolved, spec.sweep->param, *point);
        sweep_key = spec.sweep->param + format_double(*point);
      }

      RunReport run;
      run.scenario = spec.id;
      run.method = method_id;
      run.sweep_key = sweep_key;
      try {
        const ControlAffineSystem sys = make_system(resolved);
        const auto [clf, cbfs] = make_certificates(resolved);
        const FrameworkConfig cfg = make_framework_config(resolved, method);
        const Eigen::VectorXd x0 =
            resolved.plant == PlantKind::Acc
                ? Eigen::VectorXd(resolved.acc.s0)
                : Eigen::VectorXd(resolved.di.s0);
        TrajectoryLog log = simulate(sys, clf, cbfs, cfg, resolved.sim, x0,
                                     make_plant_context(resolved));
        log.scenario_id = spec.id;
        log.config_hash = scenario_hash(resolved, method_id, sweep_key);
        if (log.aborted) {
          run.error = log.abort_reason;
        } else {
          run.executed = true;
        }
        run.metrics = compute_metrics(log, resolved.plant);
        const auto exp_it = spec.expectations.find(method_id);
        if (exp_it != spec.expectations.end()) run.expected = exp_it->second;
        run.passed = evaluate_expectations(spec, method_id, run.metrics);

        std::string file = spec.id + "__" + method_id;
        if (!sweep_key.empty()) file += "__" + sweep_key;
        write_trajectory_csv(log, (fs::path(out_dir) / (file + ".csv")).string());
      } catch (const SolverFailure& err) {
        run.error = err.what();
      }
      report.runs.push_back(std::move(run));
    }
  }
  write_summary(report, (fs::path(out_dir) / (spec.id + "__summary.json")).string());
  return report;
}

}  // namespace clfcbf
