#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hfb/energy.hpp"
#include "hfb/errors.hpp"

namespace hfb {

struct ArmijoParams {
  double slope_fraction = 1e-4;
  double backtrack = 0.5;
  double initial_step = 1.0;
};

struct SolveConfig {
  int max_iters = 5000;       // per delta stage
  double grad_tol = 1e-6;     // projected-gradient sup-norm target
  ArmijoParams armijo{};
  std::vector<double> delta_schedule{1e-1, 1e-2, 1e-3};
  bool enforce_nonneg = true;
  std::uint64_t seed = 0;     // reserved for randomized initializations
};

/// Validates iteration, tolerance, Armijo, and delta-schedule settings;
/// throws ConfigError naming the offending field.
void validate_solve_config(const SolveConfig& cfg);

/// Dirichlet data, defined on every non-exterior node but only pinned on the
/// band.  Band values must be >= 0 and not identically 0.
struct BoundaryData {
  ScalarField g;
  std::string provenance;
};

struct MinimizeResult {
  ScalarField u_star;
  std::vector<EnergyBreakdown> energy_history;  // accepted steps, all stages
  std::vector<int> iterations;                  // accepted steps per stage
  bool converged = false;
  double final_pg_norm = 0.0;
};

/// Line search could not find a decreasing step; carries the last iterate.
struct StagnationError : Error {
  ScalarField iterate;
  StagnationError(const std::string& what, ScalarField it)
      : Error(what), iterate(std::move(it)) {}
};

/// Built-in Dirichlet data on grid g: bump (0.5 on the arc x > 0, quintic
/// taper to 0.05), ring (constant 0.3), asym (0.2 (1 + x), affine).
BoundaryData builtin_boundary(const std::string& name, const GridSpec& g);

/// Jacobi relaxation of the 5-point Laplacian with band nodes pinned to g.
/// Stops when the sup-norm sweep change drops below tol.
ScalarField harmonic_extension(const BoundaryData& bd, int max_sweeps = 20000,
                               double tol = 1e-12);

/// Projected gradient descent with Armijo backtracking and delta continuation.
/// Band nodes stay pinned to g; negatives are clipped when enforce_nonneg.
/// Accepted steps never increase the (smooth-mode) total energy.
MinimizeResult minimize(const BoundaryData& g, const EnergyParams& params,
                        const SolveConfig& cfg);

/// minimize, but seeded from init (projected first) instead of the harmonic
/// extension; init must live on the same grid.
MinimizeResult minimize_from(const ScalarField& init, const BoundaryData& g,
                             const EnergyParams& params,
                             const SolveConfig& cfg);

/// minimize with the penalty off: lambda_penalty = 0, nonnegativity clip off,
/// single delta stage (the measure term is absent either way).
MinimizeResult minimize_unpenalized(const BoundaryData& g, double p,
                                    const SolveConfig& cfg,
                                    const OperatorSpec& op = OperatorSpec{});

}  // namespace hfb
