#pragma once

#include <vector>

#include "hfb/bump.hpp"
#include "hfb/energy.hpp"

namespace hfb {

/// Game density m = F(D2 u)^{p-1} restricted to the thresholded positivity
/// set {u > tau}; zero elsewhere (including the exterior).
struct DensityField {
  ScalarField m;
  std::vector<std::uint8_t> support;  // 1 on {u > tau}, node-indexed
  double tau = 0.0;
};

/// Compactly supported C^2 test bumps; each support disk must sit inside the
/// density support (and inside the unit disk).
struct TestFunctionFamily {
  std::vector<Bump> bumps;
};

/// Threshold must be positive (tau excludes the rim where one-sided Hessian
/// stencils are least accurate); throws ThresholdError otherwise.
DensityField extract_density(const ScalarField& u, const EnergyParams& prm,
                             double tau);

/// Pointwise Hamilton-Jacobi defect F(D2 u) - m^{1/(p-1)} on the support,
/// zero off it.  Exponent-1 powers are evaluated exactly, so an extracted
/// pair at p = 2 gives a bitwise-zero residual.  Negative density values on
/// the support raise DomainError.
ScalarField hj_residual(const ScalarField& u, const DensityField& m,
                        const EnergyParams& prm);

/// Weak Fokker-Planck residuals: for each bump phi, the quadrature of
/// F_ij(D2 u) m phi_{x_i x_j} with the bump Hessian evaluated analytically
/// and integrated per dual cell, so the residual isolates the error carried
/// by the m and F_ij fields rather than the bump's own support edge.
/// A bump escaping the support raises PlacementError naming its index.
std::vector<double> fp_residual(const ScalarField& u, const DensityField& m,
                                const EnergyParams& prm,
                                const TestFunctionFamily& tests);

/// L^{p/(p-1)} norm of the density (finite by construction on a grid).
double density_integrability(const DensityField& m, double p);

}  // namespace hfb
