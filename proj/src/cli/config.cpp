#include "cli/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rta/csv.hpp"
#include "rta/errors.hpp"

namespace rta::cli {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InvalidArgument("config: " + where + ": " + what);
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(where, "expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) fail(where, "unknown key '" + key + "'");
  }
}

const json& required(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) fail(where, std::string("missing key '") + key + "'");
  return obj.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(where, "must be finite");
  return d;
}

std::size_t count(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    fail(where, "expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::vector<double> numbers(const json& obj, const char* key) {
  std::vector<double> out;
  if (!obj.contains(key)) return out;
  const json& arr = obj.at(key);
  if (!arr.is_array()) fail(key, "expected an array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(number(arr[i], std::string(key) + "[" + std::to_string(i) + "]"));
  }
  return out;
}

PiecewiseConstant piecewise(const json& obj, const std::string& where) {
  only_keys(obj, where, {"breakpoints", "values"});
  PiecewiseConstant pc;
  const json& bps = required(obj, where, "breakpoints");
  const json& vals = required(obj, where, "values");
  if (!bps.is_array() || !vals.is_array()) fail(where, "breakpoints and values must be arrays");
  for (std::size_t i = 0; i < bps.size(); ++i) {
    pc.breakpoints.push_back(number(bps[i], where + ".breakpoints[" + std::to_string(i) + "]"));
  }
  for (std::size_t i = 0; i < vals.size(); ++i) {
    pc.values.push_back(number(vals[i], where + ".values[" + std::to_string(i) + "]"));
  }
  return pc;
}

}  // namespace

double ExperimentConfig::speed(double mu) const {
  return problem == Problem::Transport ? transport.wavespeed(mu) : elasto.celerity(mu);
}

double ExperimentConfig::timestep(std::size_t n) const {
  const Mesh1D m = mesh(n);
  if (problem == Problem::Transport) return cfl_timestep(transport, m, cfl, mu_ref);
  return cfl * m.dx() / elasto.celerity(mu_ref);
}

std::size_t ExperimentConfig::steps(double dt) const {
  if (n_steps) return *n_steps;
  return steps_for_time(*final_time, dt);
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config: not valid JSON: ") + e.what());
  }
  only_keys(root, "<root>",
            {"problem", "domain", "initial_condition", "model", "parameter_domain", "time",
             "snapshots", "targets", "times", "meshes", "output_dir"});

  ExperimentConfig cfg;
  cfg.digest = hex64(fnv1a64(root.dump()));

  const json& problem = required(root, "<root>", "problem");
  if (problem == "transport") {
    cfg.problem = Problem::Transport;
  } else if (problem == "elasto") {
    cfg.problem = Problem::Elasto;
  } else {
    fail("problem", "expected \"transport\" or \"elasto\"");
  }

  const json& domain = required(root, "<root>", "domain");
  only_keys(domain, "domain", {"x_min", "x_max", "n_cells"});
  cfg.x_min = number(required(domain, "domain", "x_min"), "domain.x_min");
  cfg.x_max = number(required(domain, "domain", "x_max"), "domain.x_max");
  cfg.n_cells = count(required(domain, "domain", "n_cells"), "domain.n_cells");
  const Mesh1D mesh = cfg.mesh();  // validates the domain

  const json& ic = required(root, "<root>", "initial_condition");
  const json& model = required(root, "<root>", "model");
  if (cfg.problem == Problem::Transport) {
    cfg.ic = piecewise(ic, "initial_condition");
    validate(cfg.ic, mesh);
    only_keys(model, "model", {"alpha", "beta"});
    cfg.transport.alpha = number(required(model, "model", "alpha"), "model.alpha");
    cfg.transport.beta = number(required(model, "model", "beta"), "model.beta");
  } else {
    only_keys(ic, "initial_condition", {"sigma", "velocity"});
    cfg.sigma_ic = piecewise(required(ic, "initial_condition", "sigma"), "initial_condition.sigma");
    cfg.velocity_ic =
        piecewise(required(ic, "initial_condition", "velocity"), "initial_condition.velocity");
    validate(cfg.sigma_ic, mesh);
    validate(cfg.velocity_ic, mesh);
    only_keys(model, "model", {"c0", "c1", "rho"});
    cfg.elasto.c0 = number(required(model, "model", "c0"), "model.c0");
    cfg.elasto.c1 = number(required(model, "model", "c1"), "model.c1");
    cfg.elasto.rho = number(required(model, "model", "rho"), "model.rho");
    if (!(cfg.elasto.rho > 0.0)) fail("model.rho", "must be positive");
  }

  if (root.contains("parameter_domain")) {
    const auto pd = numbers(root, "parameter_domain");
    if (pd.size() != 2 || !(pd[0] <= pd[1])) {
      fail("parameter_domain", "expected [mu_lo, mu_hi] with mu_lo <= mu_hi");
    }
    cfg.mu_lo = pd[0];
    cfg.mu_hi = pd[1];
  }
  cfg.transport.mu_lo = cfg.mu_lo;
  cfg.transport.mu_hi = cfg.mu_hi;

  const json& time = required(root, "<root>", "time");
  only_keys(time, "time", {"cfl", "mu_ref", "final_time", "n_steps"});
  cfg.cfl = number(required(time, "time", "cfl"), "time.cfl");
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) fail("time.cfl", "must lie in (0, 1]");
  cfg.mu_ref = number(required(time, "time", "mu_ref"), "time.mu_ref");
  if (time.contains("final_time") == time.contains("n_steps")) {
    fail("time", "give exactly one of 'final_time' and 'n_steps'");
  }
  if (time.contains("final_time")) {
    cfg.final_time = number(time.at("final_time"), "time.final_time");
    if (*cfg.final_time < 0.0) fail("time.final_time", "must be non-negative");
  } else {
    cfg.n_steps = count(time.at("n_steps"), "time.n_steps");
  }

  cfg.snapshots = numbers(root, "snapshots");
  cfg.targets = numbers(root, "targets");
  cfg.times = numbers(root, "times");
  for (double t : cfg.times) {
    if (t < 0.0) fail("times", "must be non-negative");
  }
  if (root.contains("meshes")) {
    const json& arr = root.at("meshes");
    if (!arr.is_array()) fail("meshes", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      cfg.meshes.push_back(count(arr[i], "meshes[" + std::to_string(i) + "]"));
    }
  }
  if (root.contains("output_dir")) {
    if (!root.at("output_dir").is_string()) fail("output_dir", "expected a string");
    cfg.output_dir = root.at("output_dir").get<std::string>();
  }

  for (const auto* list : {&cfg.snapshots, &cfg.targets}) {
    for (double mu : *list) {
      if (mu < cfg.mu_lo || mu > cfg.mu_hi) {
        fail(list == &cfg.snapshots ? "snapshots" : "targets",
             "parameter " + format_double(mu) + " outside the parameter domain");
      }
    }
  }
  // Reject a zero reference speed or non-positive modulus up front.
  (void)cfg.timestep();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("config: cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config(text);
}

}  // namespace rta::cli
