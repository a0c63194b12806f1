#pragma once

#include <cstdint>

#include "hfb/calculus.hpp"
#include "hfb/operators.hpp"

namespace hfb {

enum class MeasureMode : std::uint8_t { Sharp, Smooth };

/// Parameters of the penalized functional: integral of F(D2 u)^p plus
/// lambda_penalty times the (smoothed) area of the positivity set.
struct EnergyParams {
  double p = 2.0;              // Dirichlet exponent, > 1
  double lambda_penalty = 1.0; // positivity penalty, >= 0
  double delta = 1e-2;         // Heaviside smoothing width; 0 = evaluation only
  OperatorSpec op{};
};

struct EnergyBreakdown {
  double dirichlet = 0.0;
  double measure = 0.0;
  double total = 0.0;  // always dirichlet + measure, bitwise
};

/// C1 cubic ramp: 0 for s <= 0, s^2 (3 delta - 2 s) / delta^3 on (0, delta),
/// 1 for s >= delta.  Increases toward the sharp indicator as delta drops.
double heaviside_ramp(double s, double delta);
/// Ramp derivative: 6 s (delta - s) / delta^3 on (0, delta), else 0.
double heaviside_ramp_deriv(double s, double delta);

/// Quadrature of the positivity indicator of u: sharp mode integrates
/// [u > 0], smooth mode integrates heaviside_ramp(u, delta) (needs delta > 0).
double smoothed_measure(const ScalarField& u, double delta, MeasureMode mode);

/// Evaluates both terms of the functional.  A non-finite contribution raises
/// NumericOverflowError carrying the offending node.
EnergyBreakdown energy(const ScalarField& u, const EnergyParams& prm,
                       MeasureMode mode);

/// Analytic gradient of the smooth-mode energy with quadrature weights folded
/// in: dot(energy_gradient(u), v) equals the exact directional derivative of
/// energy(., Smooth).total along any v vanishing on the exterior.  Requires
/// delta > 0 and eta > 0; throws NondifferentiableError otherwise.
ScalarField energy_gradient(const ScalarField& u, const EnergyParams& prm);

}  // namespace hfb
