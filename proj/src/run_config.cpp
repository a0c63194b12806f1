#include "hfb/run_config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string>

#include "hfb/io.hpp"
#include "json.hpp"

namespace hfb {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) {
  throw ConfigError("config: " + msg);
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (item.key() == a) {
        known = true;
        break;
      }
    if (!known)
      fail("unknown key '" +
           (where.empty() ? item.key() : where + "." + item.key()) + "'");
  }
}

const json* member(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json* section(const json& root, const char* key) {
  const json* s = member(root, key);
  if (s && !s->is_object())
    fail(std::string("'") + key + "' must be an object");
  return s;
}

double num_or(const json& obj, const std::string& where, const char* key,
              double dflt) {
  const json* v = member(obj, key);
  if (!v) return dflt;
  if (!v->is_number()) fail("'" + where + "." + key + "' must be a number");
  return v->get<double>();
}

long long int_or(const json& obj, const std::string& where, const char* key,
                 long long dflt) {
  const json* v = member(obj, key);
  if (!v) return dflt;
  if (!v->is_number_integer())
    fail("'" + where + "." + key + "' must be an integer");
  return v->get<long long>();
}

bool bool_or(const json& obj, const std::string& where, const char* key,
             bool dflt) {
  const json* v = member(obj, key);
  if (!v) return dflt;
  if (!v->is_boolean()) fail("'" + where + "." + key + "' must be a boolean");
  return v->get<bool>();
}

std::string str_or(const json& obj, const std::string& where, const char* key,
                   const std::string& dflt) {
  const json* v = member(obj, key);
  if (!v) return dflt;
  if (!v->is_string()) fail("'" + where + "." + key + "' must be a string");
  return v->get<std::string>();
}

std::vector<double> numlist_or(const json& obj, const std::string& where,
                               const char* key, std::vector<double> dflt) {
  const json* v = member(obj, key);
  if (!v) return dflt;
  if (!v->is_array())
    fail("'" + where + "." + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const json& e : *v) {
    if (!e.is_number())
      fail("'" + where + "." + key + "' must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<double> default_sweep_schedule() {
  std::vector<double> out;
  for (int k = 0; k <= 8; ++k) out.push_back(std::pow(2.0, -k));
  return out;
}

void check_decreasing_positive(const std::vector<double>& v,
                               const char* field) {
  double prev = std::numeric_limits<double>::infinity();
  for (double d : v) {
    if (!(d > 0.0 && d < prev))
      fail(std::string(field) + " must be strictly decreasing and positive");
    prev = d;
  }
}

RunConfig from_json(const json& root) {
  if (!root.is_object()) fail("top level must be a JSON object");
  reject_unknown(root, "", {"grid", "operator", "energy", "solver", "boundary",
                            "sweep", "mfg", "fb", "firstvar"});
  RunConfig cfg;
  cfg.sweep_schedule = default_sweep_schedule();

  if (const json* g = section(root, "grid")) {
    reject_unknown(*g, "grid", {"n"});
    cfg.n = static_cast<int>(int_or(*g, "grid", "n", cfg.n));
  }
  if (cfg.n % 2 == 0) fail("grid.n must be odd");
  if (cfg.n < 17) fail("grid.n must be >= 17");

  if (const json* op = section(root, "operator")) {
    reject_unknown(*op, "operator", {"variant", "lambda", "eta"});
    const std::string variant =
        str_or(*op, "operator", "variant", to_string(cfg.op.variant));
    cfg.op = make_operator(operator_variant_from_string(variant),
                           num_or(*op, "operator", "lambda", cfg.op.lambda),
                           num_or(*op, "operator", "eta", cfg.op.eta));
  }

  if (const json* en = section(root, "energy")) {
    reject_unknown(*en, "energy", {"p", "lambda", "delta_schedule"});
    cfg.p = num_or(*en, "energy", "p", cfg.p);
    cfg.lambda_penalty = num_or(*en, "energy", "lambda", cfg.lambda_penalty);
    cfg.solver.delta_schedule = numlist_or(*en, "energy", "delta_schedule",
                                           cfg.solver.delta_schedule);
  }
  if (!(cfg.p > 1.0)) fail("energy.p must be > 1 (the functional needs p > 1)");
  if (!(cfg.lambda_penalty >= 0.0)) fail("energy.lambda must be >= 0");

  if (const json* so = section(root, "solver")) {
    reject_unknown(*so, "solver",
                   {"max_iters", "grad_tol", "armijo", "enforce_nonneg",
                    "seed"});
    cfg.solver.max_iters =
        static_cast<int>(int_or(*so, "solver", "max_iters",
                                cfg.solver.max_iters));
    cfg.solver.grad_tol = num_or(*so, "solver", "grad_tol",
                                 cfg.solver.grad_tol);
    if (const json* ar = member(*so, "armijo")) {
      if (!ar->is_object()) fail("'solver.armijo' must be an object");
      reject_unknown(*ar, "solver.armijo",
                     {"slope_fraction", "backtrack", "initial_step"});
      cfg.solver.armijo.slope_fraction =
          num_or(*ar, "solver.armijo", "slope_fraction",
                 cfg.solver.armijo.slope_fraction);
      cfg.solver.armijo.backtrack = num_or(*ar, "solver.armijo", "backtrack",
                                           cfg.solver.armijo.backtrack);
      cfg.solver.armijo.initial_step =
          num_or(*ar, "solver.armijo", "initial_step",
                 cfg.solver.armijo.initial_step);
    }
    cfg.solver.enforce_nonneg = bool_or(*so, "solver", "enforce_nonneg",
                                        cfg.solver.enforce_nonneg);
    const long long seed = int_or(*so, "solver", "seed",
                                  static_cast<long long>(cfg.solver.seed));
    if (seed < 0) fail("solver.seed must be >= 0");
    cfg.solver.seed = static_cast<std::uint64_t>(seed);
  }
  validate_solve_config(cfg.solver);

  if (const json* bd = section(root, "boundary")) {
    reject_unknown(*bd, "boundary", {"builtin", "csv"});
    const bool has_builtin = member(*bd, "builtin") != nullptr;
    const bool has_csv = member(*bd, "csv") != nullptr;
    if (has_builtin && has_csv)
      fail("boundary takes either 'builtin' or 'csv', not both");
    if (has_csv) {
      cfg.boundary.csv = str_or(*bd, "boundary", "csv", "");
      if (cfg.boundary.csv.empty()) fail("boundary.csv must be a non-empty path");
      cfg.boundary.builtin.clear();
    } else {
      cfg.boundary.builtin =
          str_or(*bd, "boundary", "builtin", cfg.boundary.builtin);
    }
  }
  if (cfg.boundary.csv.empty() && cfg.boundary.builtin != "bump" &&
      cfg.boundary.builtin != "ring" && cfg.boundary.builtin != "asym")
    fail("boundary.builtin must be one of bump|ring|asym");

  if (const json* sw = section(root, "sweep")) {
    reject_unknown(*sw, "sweep", {"schedule", "warm_start"});
    cfg.sweep_schedule =
        numlist_or(*sw, "sweep", "schedule", cfg.sweep_schedule);
    cfg.sweep_warm_start = bool_or(*sw, "sweep", "warm_start",
                                   cfg.sweep_warm_start);
  }
  check_decreasing_positive(cfg.sweep_schedule, "sweep.schedule");

  if (const json* mf = section(root, "mfg")) {
    reject_unknown(*mf, "mfg", {"tau"});
    cfg.mfg_tau = num_or(*mf, "mfg", "tau", cfg.mfg_tau);
  }
  if (!(cfg.mfg_tau >= 0.0)) fail("mfg.tau must be >= 0");

  if (const json* fb = section(root, "fb")) {
    reject_unknown(*fb, "fb", {"levels"});
    cfg.fb_levels = numlist_or(*fb, "fb", "levels", cfg.fb_levels);
  }
  if (cfg.fb_levels.empty()) fail("fb.levels must not be empty");
  for (double t : cfg.fb_levels)
    if (!(t >= 0.0)) fail("fb.levels entries must be >= 0");

  if (const json* fv = section(root, "firstvar")) {
    reject_unknown(*fv, "firstvar", {"t_step"});
    cfg.firstvar_t_step = num_or(*fv, "firstvar", "t_step",
                                 cfg.firstvar_t_step);
  }
  if (!(cfg.firstvar_t_step > 0.0)) fail("firstvar.t_step must be > 0");

  return cfg;
}

void apply_override(json& root, const std::string& spec) {
  const std::size_t eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    fail("override '" + spec + "' must look like section.key=value");
  const std::string path = spec.substr(0, eq);
  const std::string text = spec.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::exception&) {
    value = text;  // bare words are strings
  }
  json* node = &root;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key =
        path.substr(start, dot == std::string::npos ? std::string::npos
                                                    : dot - start);
    if (key.empty()) fail("override '" + spec + "' has an empty path segment");
    if (!node->is_object() && !node->is_null())
      fail("override '" + spec + "' descends through a non-object");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

RunConfig from_text(const std::string& text,
                    const std::vector<std::string>& overrides,
                    const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    fail("malformed JSON in " + origin + ": " + e.what());
  }
  for (const std::string& ov : overrides) apply_override(root, ov);
  return from_json(root);
}

}  // namespace

RunConfig parse_config(const std::string& path,
                       const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str(), overrides, "'" + path + "'");
}

RunConfig parse_config_text(const std::string& text,
                            const std::vector<std::string>& overrides) {
  return from_text(text, overrides, "config text");
}

std::string effective_config_json(const RunConfig& cfg) {
  json root;
  root["grid"] = {{"n", cfg.n}};
  root["operator"] = {{"variant", to_string(cfg.op.variant)},
                      {"lambda", cfg.op.lambda},
                      {"eta", cfg.op.eta}};
  root["energy"] = {{"p", cfg.p},
                    {"lambda", cfg.lambda_penalty},
                    {"delta_schedule", cfg.solver.delta_schedule}};
  root["solver"] = {
      {"max_iters", cfg.solver.max_iters},
      {"grad_tol", cfg.solver.grad_tol},
      {"armijo",
       {{"slope_fraction", cfg.solver.armijo.slope_fraction},
        {"backtrack", cfg.solver.armijo.backtrack},
        {"initial_step", cfg.solver.armijo.initial_step}}},
      {"enforce_nonneg", cfg.solver.enforce_nonneg},
      {"seed", cfg.solver.seed}};
  if (cfg.boundary.csv.empty())
    root["boundary"] = {{"builtin", cfg.boundary.builtin}};
  else
    root["boundary"] = {{"csv", cfg.boundary.csv}};
  root["sweep"] = {{"schedule", cfg.sweep_schedule},
                   {"warm_start", cfg.sweep_warm_start}};
  root["mfg"] = {{"tau", cfg.mfg_tau}};
  root["fb"] = {{"levels", cfg.fb_levels}};
  root["firstvar"] = {{"t_step", cfg.firstvar_t_step}};
  return root.dump(2) + "\n";
}

EnergyParams energy_params(const RunConfig& cfg) {
  EnergyParams prm;
  prm.p = cfg.p;
  prm.lambda_penalty = cfg.lambda_penalty;
  prm.delta = cfg.solver.delta_schedule.back();
  prm.op = cfg.op;
  return prm;
}

BoundaryData load_boundary(const RunConfig& cfg) {
  const GridSpec g(cfg.n);
  if (!cfg.boundary.csv.empty())
    return {read_scalar_csv(g, cfg.boundary.csv), cfg.boundary.csv};
  return builtin_boundary(cfg.boundary.builtin, g);
}

}  // namespace hfb
