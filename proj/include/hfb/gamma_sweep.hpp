#pragma once

#include <string>
#include <vector>

#include "hfb/energy.hpp"
#include "hfb/solver.hpp"

namespace hfb {

/// One rung of the penalty ladder: the minimizer of the lambda-penalized
/// functional together with every cross-evaluation the convergence checks
/// need.  Sharp measure mode throughout; the smoothing delta only steers
/// the solves.
struct SweepRecord {
  double lambda = 0.0;
  ScalarField u;
  EnergyBreakdown penalized{};    // G_lambda[u], sharp positivity measure
  EnergyBreakdown unpenalized{};  // G_0[u], the Dirichlet part alone
  double sobolev_w1p = 0.0;
  double sobolev_w2p = 0.0;
  double dist_to_u0 = 0.0;   // W^{1,p} distance to the unpenalized minimizer
  double recovery_gap = 0.0; // G_lambda[u0] - G_0[u0], the constant-sequence gap
  bool converged = false;
  double final_pg_norm = 0.0;
  int iterations = 0;
};

/// base holds the unpenalized minimizer u0 (lambda = 0, zero distance and
/// gap by construction); records follow the schedule order.  A solver
/// failure mid-ladder keeps the records gathered so far and sets aborted.
struct SweepOutcome {
  SweepRecord base;
  std::vector<SweepRecord> records;
  bool aborted = false;
  std::string abort_reason;
};

/// Discrete Sobolev norm: order 1 is (integral of |u|^p + |Du|^p)^(1/p),
/// order 2 adds the Frobenius power |D2u|_F^p.  ConfigError for p <= 1 or
/// an order outside {1, 2}.
double discrete_sobolev_norm(const ScalarField& u, int order, double p);

/// Minimize the penalized functional along a strictly decreasing positive
/// lambda schedule, after solving the unpenalized problem once.  base
/// supplies p, the operator, and the smoothing delta; its lambda_penalty is
/// ignored.  Warm starts chain each solve from the previous minimizer
/// (the first from u0), which makes the penalized energies non-increasing
/// along the ladder by monotone descent; cold starts solve independently.
SweepOutcome run_sweep(const BoundaryData& bd, const EnergyParams& base,
                       const std::vector<double>& lambdas,
                       const SolveConfig& cfg, bool warm_start = true);

/// Verdict of the four convergence certificates over a sweep.
struct GammaVerdict {
  bool equicoercive = false;  // max W^{2,p} within 2x of the median
  double max_w2p = 0.0;
  double median_w2p = 0.0;
  double worst_lambda = 0.0;  // rung carrying the largest W^{2,p} norm
  bool liminf_ok = false;     // G_0[u0] <= min_n G_lambda[u_n] + tol
  double liminf_gap = 0.0;    // G_0[u0] - min_n G_lambda[u_n]
  bool recovery_ok = false;   // gap == lambda * measure{u0 > 0} per rung
  double recovery_worst_err = 0.0;
  bool dist_ok = false;       // last distance < first and < 0.1 |u0|_W1p
  double first_dist = 0.0;
  double last_dist = 0.0;
  double u0_w1p = 0.0;
  bool all_ok = false;
};

/// Evaluate the certificates on at least 3 records (ConfigError otherwise).
/// The report is consistency-checking only: it can flag a violation but
/// never proves the Gamma-limit.
GammaVerdict gamma_report(const SweepOutcome& sweep, double liminf_tol = 1e-4);

/// Line chart of penalized energy and distance-to-u0 against the lambda
/// ladder (log2 axis), written as a small self-contained SVG.  ConfigError
/// when the file cannot be opened or there are no records.
void write_sweep_svg(const SweepOutcome& sweep, const std::string& path);

}  // namespace hfb
