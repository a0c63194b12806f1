#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "hfb/io.hpp"
#include "hfb/run_config.hpp"

namespace {

hfb::RunConfig parse(const std::string& text,
                     const std::vector<std::string>& ov = {}) {
  return hfb::parse_config_text(text, ov);
}

void expect_reject(const std::string& text, const std::string& needle,
                   const std::vector<std::string>& ov = {}) {
  try {
    hfb::parse_config_text(text, ov);
    FAIL_CHECK("accepted: " << text);
  } catch (const hfb::ConfigError& e) {
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

}  // namespace

TEST_CASE("config: an empty object yields every default") {
  const hfb::RunConfig cfg = parse("{}");
  CHECK(cfg.n == 33);
  CHECK(cfg.p == 2.0);
  CHECK(cfg.lambda_penalty == 1.0);
  CHECK(cfg.op.variant == hfb::OperatorVariant::SmoothedFrobenius);
  CHECK(cfg.op.lambda == 1.0);
  CHECK(cfg.op.eta == 1e-3);
  CHECK(cfg.solver.max_iters == 5000);
  CHECK(cfg.solver.grad_tol == 1e-6);
  CHECK(cfg.solver.delta_schedule == std::vector<double>{1e-1, 1e-2, 1e-3});
  CHECK(cfg.solver.enforce_nonneg);
  CHECK(cfg.boundary.builtin == "ring");
  CHECK(cfg.boundary.csv.empty());
  REQUIRE(cfg.sweep_schedule.size() == 9);
  CHECK(cfg.sweep_schedule.front() == 1.0);
  CHECK(cfg.sweep_schedule.back() == doctest::Approx(1.0 / 256.0));
  CHECK(cfg.sweep_warm_start);
  CHECK(cfg.mfg_tau == 0.0);
  CHECK(cfg.fb_levels == std::vector<double>{0.0});
  CHECK(cfg.firstvar_t_step == 1e-2);
}

TEST_CASE("config: explicit fields land where they should") {
  const hfb::RunConfig cfg = parse(R"({
    "grid": {"n": 65},
    "operator": {"variant": "scaled-frobenius", "lambda": 2.5, "eta": 0.01},
    "energy": {"p": 1.5, "lambda": 0.25, "delta_schedule": [0.01, 0.001]},
    "solver": {"max_iters": 123, "grad_tol": 1e-4,
               "armijo": {"slope_fraction": 1e-3, "backtrack": 0.25,
                          "initial_step": 0.5},
               "enforce_nonneg": false, "seed": 7},
    "boundary": {"builtin": "bump"},
    "sweep": {"schedule": [0.5, 0.125], "warm_start": false},
    "mfg": {"tau": 0.02},
    "fb": {"levels": [0.0, 0.05]},
    "firstvar": {"t_step": 0.005}
  })");
  CHECK(cfg.n == 65);
  CHECK(cfg.op.variant == hfb::OperatorVariant::ScaledFrobenius);
  CHECK(cfg.op.lambda == 2.5);
  CHECK(cfg.op.eta == 0.01);
  CHECK(cfg.p == 1.5);
  CHECK(cfg.lambda_penalty == 0.25);
  CHECK(cfg.solver.delta_schedule == std::vector<double>{0.01, 0.001});
  CHECK(cfg.solver.max_iters == 123);
  CHECK(cfg.solver.grad_tol == 1e-4);
  CHECK(cfg.solver.armijo.slope_fraction == 1e-3);
  CHECK(cfg.solver.armijo.backtrack == 0.25);
  CHECK(cfg.solver.armijo.initial_step == 0.5);
  CHECK_FALSE(cfg.solver.enforce_nonneg);
  CHECK(cfg.solver.seed == 7);
  CHECK(cfg.boundary.builtin == "bump");
  CHECK(cfg.sweep_schedule == std::vector<double>{0.5, 0.125});
  CHECK_FALSE(cfg.sweep_warm_start);
  CHECK(cfg.mfg_tau == 0.02);
  CHECK(cfg.fb_levels == std::vector<double>{0.0, 0.05});
  CHECK(cfg.firstvar_t_step == 0.005);

  const hfb::EnergyParams prm = hfb::energy_params(cfg);
  CHECK(prm.p == 1.5);
  CHECK(prm.lambda_penalty == 0.25);
  CHECK(prm.delta == 0.001);  // schedule tail
  CHECK(prm.op.variant == hfb::OperatorVariant::ScaledFrobenius);
}

TEST_CASE("config: violations are rejected by field name") {
  expect_reject(R"({"grid": {"n": 32}})", "grid.n must be odd");
  expect_reject(R"({"grid": {"n": 15}})", "grid.n must be >= 17");
  expect_reject(R"({"grid": {"n": 33.5}})", "'grid.n' must be an integer");
  expect_reject(R"({"energy": {"p": 0.5}})", "energy.p must be > 1");
  expect_reject(R"({"energy": {"p": 1.0}})", "energy.p must be > 1");
  expect_reject(R"({"energy": {"lambda": -0.5}})", "energy.lambda must be >= 0");
  expect_reject(R"({"energy": {"delta_schedule": [0.1, 0.1]}})",
                "delta schedule");
  expect_reject(R"({"operator": {"variant": "frobenius"}})", "frobenius");
  expect_reject(R"({"operator": {"lambda": 0.5}})", "lambda");
  expect_reject(R"({"solver": {"max_iters": 0}})", "max_iters");
  expect_reject(R"({"solver": {"grad_tol": 0}})", "grad_tol");
  expect_reject(R"({"solver": {"seed": -1}})", "solver.seed must be >= 0");
  expect_reject(R"({"solver": {"armijo": {"backtrack": 1.5}}})", "Armijo");
  expect_reject(R"({"boundary": {"builtin": "plateau"}})",
                "boundary.builtin must be one of bump|ring|asym");
  expect_reject(R"({"boundary": {"builtin": "ring", "csv": "g.csv"}})",
                "not both");
  expect_reject(R"({"boundary": {"csv": ""}})",
                "boundary.csv must be a non-empty path");
  expect_reject(R"({"sweep": {"schedule": [0.5, 1.0]}})",
                "sweep.schedule must be strictly decreasing and positive");
  expect_reject(R"({"sweep": {"schedule": [1.0, 0.0]}})", "sweep.schedule");
  expect_reject(R"({"mfg": {"tau": -0.1}})", "mfg.tau must be >= 0");
  expect_reject(R"({"fb": {"levels": []}})", "fb.levels must not be empty");
  expect_reject(R"({"fb": {"levels": [-0.1]}})",
                "fb.levels entries must be >= 0");
  expect_reject(R"({"firstvar": {"t_step": 0}})", "firstvar.t_step must be > 0");
  expect_reject(R"({"grid": {"n": "33"}})", "'grid.n' must be an integer");
  expect_reject(R"({"solver": {"enforce_nonneg": 1}})",
                "'solver.enforce_nonneg' must be a boolean");
  expect_reject(R"({"energy": {"delta_schedule": 0.1}})",
                "'energy.delta_schedule' must be an array of numbers");
  expect_reject(R"({"grid": 33})", "'grid' must be an object");
}

TEST_CASE("config: unknown keys are named at any depth") {
  expect_reject(R"({"gird": {"n": 33}})", "unknown key 'gird'");
  expect_reject(R"({"grid": {"m": 33}})", "unknown key 'grid.m'");
  expect_reject(R"({"solver": {"armijo": {"slope": 0.1}}})",
                "unknown key 'solver.armijo.slope'");
  expect_reject(R"({"sweep": {"schdule": [1.0]}})", "unknown key 'sweep.schdule'");
}

TEST_CASE("config: malformed JSON names the source") {
  expect_reject("{", "malformed JSON");
  expect_reject("[1, 2]", "top level must be a JSON object");
  try {
    hfb::parse_config("/nonexistent_dir_hfb/cfg.json");
    FAIL_CHECK("opened a nonexistent file");
  } catch (const hfb::ConfigError& e) {
    CHECK(std::string(e.what()).find("cannot open") != std::string::npos);
  }
}

TEST_CASE("config: overrides rewrite the raw JSON before validation") {
  const hfb::RunConfig cfg =
      parse("{}", {"grid.n=65", "energy.p=3", "boundary.builtin=asym",
                   "solver.armijo.backtrack=0.25", "sweep.warm_start=false"});
  CHECK(cfg.n == 65);
  CHECK(cfg.p == 3.0);
  CHECK(cfg.boundary.builtin == "asym");  // bare word parsed as a string
  CHECK(cfg.solver.armijo.backtrack == 0.25);
  CHECK_FALSE(cfg.sweep_warm_start);

  // overrides land before validation, so a typo'd path is still caught
  expect_reject("{}", "unknown key 'grid.nn'", {"grid.nn=65"});
  expect_reject("{}", "grid.n must be odd", {"grid.n=32"});
  expect_reject("{}", "must look like", {"grid.n"});
  expect_reject("{}", "must look like", {"=65"});
  // an override can replace a whole array
  const hfb::RunConfig sw = parse("{}", {"sweep.schedule=[1.0,0.25]"});
  CHECK(sw.sweep_schedule == std::vector<double>{1.0, 0.25});
  // ...and wins over the file's own value
  const hfb::RunConfig ov =
      parse(R"({"grid": {"n": 65}})", {"grid.n=129"});
  CHECK(ov.n == 129);
}

TEST_CASE("config: the effective echo round-trips exactly") {
  const std::string text = R"({
    "grid": {"n": 65},
    "operator": {"variant": "linear-trace", "lambda": 1.4142135623730951},
    "energy": {"p": 2.5, "lambda": 0.0, "delta_schedule": [0.001]},
    "solver": {"seed": 11, "enforce_nonneg": false},
    "boundary": {"builtin": "asym"},
    "sweep": {"schedule": [1.0, 0.5, 0.25]},
    "fb": {"levels": [0.0, 0.1]}
  })";
  const hfb::RunConfig cfg = parse(text);
  const std::string echo = hfb::effective_config_json(cfg);
  CHECK(echo.back() == '\n');
  const hfb::RunConfig back = hfb::parse_config_text(echo);
  CHECK(hfb::effective_config_json(back) == echo);
  CHECK(back.n == cfg.n);
  CHECK(back.op.variant == cfg.op.variant);
  CHECK(back.op.lambda == cfg.op.lambda);
  CHECK(back.p == cfg.p);
  CHECK(back.solver.seed == cfg.solver.seed);
  CHECK(back.solver.delta_schedule == cfg.solver.delta_schedule);
  CHECK(back.sweep_schedule == cfg.sweep_schedule);
  CHECK(back.fb_levels == cfg.fb_levels);

  // csv-backed boundary echoes only the csv selector
  hfb::RunConfig csvcfg = parse(R"({"boundary": {"csv": "datum.csv"}})");
  const std::string csvecho = hfb::effective_config_json(csvcfg);
  CHECK(csvecho.find("datum.csv") != std::string::npos);
  CHECK(csvecho.find("builtin") == std::string::npos);
}

TEST_CASE("config: parse_config reads a file and load_boundary materializes") {
  const std::string dir = "/tmp";
  const std::string cfg_path = dir + "/hfb_cfg_test.json";
  const std::string csv_path = dir + "/hfb_cfg_datum.csv";
  {
    std::ofstream out(cfg_path);
    out << R"({"grid": {"n": 17}, "boundary": {"builtin": "ring"}})";
  }
  const hfb::RunConfig cfg = hfb::parse_config(cfg_path, {"energy.lambda=0"});
  CHECK(cfg.n == 17);
  CHECK(cfg.lambda_penalty == 0.0);

  const hfb::BoundaryData ring = hfb::load_boundary(cfg);
  CHECK(ring.g.grid().n() == 17);
  CHECK(ring.g.at(8, 8) == 0.3);
  CHECK(ring.provenance == "ring");

  hfb::write_scalar_csv(ring.g, csv_path);
  const hfb::RunConfig csvcfg = hfb::parse_config_text(
      R"({"grid": {"n": 17}, "boundary": {"csv": ")" + csv_path + R"("}})");
  const hfb::BoundaryData from_csv = hfb::load_boundary(csvcfg);
  CHECK(from_csv.provenance == csv_path);
  for (int j = 0; j < 17; ++j)
    for (int i = 0; i < 17; ++i)
      CHECK(from_csv.g.at(i, j) == ring.g.at(i, j));

  // a csv written on one grid cannot be loaded onto another
  const hfb::RunConfig wrong = hfb::parse_config_text(
      R"({"grid": {"n": 33}, "boundary": {"csv": ")" + csv_path + R"("}})");
  CHECK_THROWS_AS(hfb::load_boundary(wrong), hfb::ConfigError);

  std::remove(cfg_path.c_str());
  std::remove(csv_path.c_str());
}
