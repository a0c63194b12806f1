#pragma once

#include "hfb/bump.hpp"
#include "hfb/calculus.hpp"
#include "hfb/energy.hpp"

namespace hfb {

/// General (not necessarily symmetric) 2x2 matrix; row-major names.
struct Mat2 {
  double xx = 0.0, xy = 0.0;
  double yx = 0.0, yy = 0.0;
};

enum class DeformationKind {
  Directional,      // xi = a * phi
  RotatedGradient,  // xi = (-psi_y, psi_x), divergence-free by construction
  Radial,           // xi = (x - c) * phi
};

/// Compactly supported C^2 vector field with analytic first and second
/// derivatives, carried by the polynomial bump profile phi (= psi).
/// The support disk must lie strictly inside the unit disk.
struct DeformationField {
  DeformationKind kind = DeformationKind::Directional;
  Bump support;              // carrier profile: center and radius
  Vec2 direction{1.0, 0.0};  // directional kind only ((0,0) gives xi = 0)
};

Vec2 xi_value(const DeformationField& xi, double x, double y);
Mat2 xi_jacobian(const DeformationField& xi, double x, double y);
void xi_hessians(const DeformationField& xi, double x, double y, SymMat2* hx,
                 SymMat2* hy);
/// Exactly 0 for RotatedGradient; trace of the jacobian otherwise.
double xi_divergence(const DeformationField& xi, double x, double y);

/// M = D2u Dxi + (Dxi)^T D2u + Du . D2xi per node, assembled in symmetric
/// form (the first two summands add up to a symmetric matrix; the cross
/// entry stores the average of the two off-diagonals).
/// Throws PlacementError when the support disk is not strictly inside B1.
SymMatField build_M(const ScalarField& u, const DeformationField& xi);

/// Inner-variation derivative of the Dirichlet term in its
/// pre-integration-by-parts form:
///   -p * int F^{p-1} <f_grad(D2u), M> + int F^p div xi,
/// quadratured with the cut-cell weights.  Requires eta > 0
/// (NondifferentiableError otherwise) and p > 1 (ConfigError).
double energy_variation_analytic(const ScalarField& u,
                                 const DeformationField& xi,
                                 const EnergyParams& prm);

/// Domain-variation derivative of the measure term: quadrature of div xi
/// over the sharp positivity set {u > 0}.
double measure_variation(const ScalarField& u, const DeformationField& xi);

/// u composed with the inverse flow of x + t xi: for each node x solve
/// y = x - t xi(y) by fixed point (<= 20 iterations, tol 1e-12) and return
/// the Catmull-Rom bicubic interpolation of u at y.  Nodes the deformation
/// does not move keep their values bitwise.
/// Throws DeformationError when |t| sup||Dxi|| >= 1/2 or the fixed point
/// stalls.
ScalarField pushforward(const ScalarField& u, const DeformationField& xi,
                        double t);

/// Central difference of the Dirichlet energy along the deformation flow,
/// Richardson-extrapolated over t_step and t_step/2.
double energy_variation_numeric(const ScalarField& u,
                                const DeformationField& xi,
                                const EnergyParams& prm, double t_step);

}  // namespace hfb
