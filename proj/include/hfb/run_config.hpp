#pragma once

#include <string>
#include <vector>

#include "hfb/energy.hpp"
#include "hfb/solver.hpp"

namespace hfb {

/// Boundary datum selector: a builtin name or a CSV field path, never both.
struct BoundarySource {
  std::string builtin = "ring";
  std::string csv;  // non-empty means: read the datum from this file
};

/// One fully validated run description with every default filled in.  The
/// JSON layout mirrors the fields: grid.n, operator.{variant,lambda,eta},
/// energy.{p,lambda,delta_schedule}, solver.{max_iters,grad_tol,armijo,
/// enforce_nonneg,seed}, boundary.{builtin|csv}, sweep.{schedule,warm_start},
/// mfg.tau, fb.levels, firstvar.t_step.
struct RunConfig {
  int n = 33;
  OperatorSpec op{};
  double p = 2.0;
  double lambda_penalty = 1.0;
  SolveConfig solver{};
  BoundarySource boundary{};
  std::vector<double> sweep_schedule;  // default 2^0 .. 2^-8
  bool sweep_warm_start = true;
  double mfg_tau = 0.0;  // 0 = library default (5h) at extraction time
  std::vector<double> fb_levels{0.0};
  double firstvar_t_step = 1e-2;
};

/// Parse and validate a JSON config file, applying dot-path overrides of the
/// form "section.key=value" (values parsed as JSON, bare words as strings)
/// before validation.  Unknown keys anywhere are rejected by name; every
/// invariant violation names its field.  Throws ConfigError.
RunConfig parse_config(const std::string& path,
                       const std::vector<std::string>& overrides = {});

/// Same, from an in-memory JSON string.
RunConfig parse_config_text(const std::string& text,
                            const std::vector<std::string>& overrides = {});

/// Canonical JSON echo of the effective config (all defaults filled);
/// feeding it back through parse_config_text reproduces the config exactly.
std::string effective_config_json(const RunConfig& cfg);

/// Energy parameters implied by the config; delta is the schedule tail.
EnergyParams energy_params(const RunConfig& cfg);

/// Materialize the boundary datum (builtin or CSV) on the config's grid.
BoundaryData load_boundary(const RunConfig& cfg);

}  // namespace hfb
