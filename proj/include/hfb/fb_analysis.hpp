#pragma once

#include <vector>

#include "hfb/calculus.hpp"
#include "hfb/energy.hpp"

namespace hfb {

/// Polyline pieces of the level set boundary of {u > t}: one or two
/// segments per crossed grid cell, endpoints on cell edges.
struct BoundaryCurve {
  struct Segment {
    Vec2 a, b;
  };
  std::vector<Segment> segments;
  double level = 0.0;
  double length = 0.0;  // sum of segment lengths
};

/// Marching squares on the node values u - t over cells whose four corners
/// are all non-exterior.  A corner is inside when u - t > 0; the two
/// ambiguous saddle cases connect so that the sign of the cell-average
/// value decides.  An empty curve is a valid result.
/// Throws ConfigError for t < 0.
BoundaryCurve level_perimeter(const ScalarField& u, double t);

struct CoareaResult {
  double integral = 0.0;   // midpoint estimate of int_0^eps length(t) dt
  double implied_c = 0.0;  // integral / eps
};

/// Midpoint rule over `samples` equispaced levels in (0, eps).
/// Throws ConfigError unless eps > 0 and samples >= 2.
CoareaResult coarea_scan(const ScalarField& u, double eps, int samples);

/// Quadrature of F(D^2 u)^p restricted to nodes with 0 <= u <= eps.
/// Throws ConfigError unless eps > 0 and prm is valid.
double slab_energy(const ScalarField& u, const EnergyParams& prm, double eps);

struct FbSample {
  Vec2 point;             // segment midpoint on the level-tau curve
  double statement_form;  // F^{p-1} (dF_ij/dx_i) u_{x_j} - Lambda/(2p)
  double proof_form;      // 2p d/dx_i(F^{p-1} F_ij) u_{x_j} + Lambda
};

struct FbReport {
  double level = 0.0;
  std::vector<FbSample> samples;
  double statement_mean = 0.0;  // signed mean over samples
  double statement_sup = 0.0;   // max |value|
  double proof_mean = 0.0;
  double proof_sup = 0.0;
};

/// Free-boundary condition residuals sampled along the level-tau curve.
/// The two published forms of the condition disagree in where the x_i
/// derivative falls and in the sign and weight of Lambda, so both are
/// computed side by side and neither is asserted against zero.  The
/// derivative of the F_ij = f_grad field uses the same per-node stencil
/// plans as the rest of the calculus; samples bilinearly interpolate the
/// assembled node fields at segment midpoints.
/// Throws EmptyCurveError when u has no boundary at level tau, ConfigError
/// for invalid params; f_grad singularities (eta = 0 at a zero Hessian)
/// propagate from the operator module.
FbReport fb_condition_residual(const ScalarField& u, const EnergyParams& prm,
                               double tau);

}  // namespace hfb
