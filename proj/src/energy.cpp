#include "hfb/energy.hpp"

#include <cmath>
#include <string>

#include "hfb/errors.hpp"

namespace hfb {

namespace {

void check_params(const EnergyParams& prm) {
  if (!(prm.p > 1.0)) throw ConfigError("energy: exponent p must be > 1");
  if (!(prm.lambda_penalty >= 0.0))
    throw ConfigError("energy: penalty must be >= 0");
  if (!(prm.delta >= 0.0)) throw ConfigError("energy: delta must be >= 0");
  make_operator(prm.op.variant, prm.op.lambda, prm.op.eta);
}

[[noreturn]] void overflow_at(int node) {
  throw NumericOverflowError(
      "energy: non-finite contribution at node " + std::to_string(node), node);
}

}  // namespace

double heaviside_ramp(double s, double delta) {
  if (s <= 0.0) return 0.0;
  if (s >= delta) return 1.0;
  return s * s * (3.0 * delta - 2.0 * s) / (delta * delta * delta);
}

double heaviside_ramp_deriv(double s, double delta) {
  if (s <= 0.0 || s >= delta) return 0.0;
  return 6.0 * s * (delta - s) / (delta * delta * delta);
}

double smoothed_measure(const ScalarField& u, double delta, MeasureMode mode) {
  if (mode == MeasureMode::Smooth && !(delta > 0.0))
    throw ConfigError("smoothed_measure: smooth mode needs delta > 0");
  const GridSpec& g = u.grid();
  double acc = 0.0;
  for (int k = 0; k < u.size(); ++k) {
    if (g.node_class(k) == NodeClass::Exterior) continue;
    acc += g.weights()[k] * (mode == MeasureMode::Sharp
                                 ? (u[k] > 0.0 ? 1.0 : 0.0)
                                 : heaviside_ramp(u[k], delta));
  }
  return acc;
}

EnergyBreakdown energy(const ScalarField& u, const EnergyParams& prm,
                       MeasureMode mode) {
  check_params(prm);
  const GridSpec& g = u.grid();
  const SymMatField H = hessian(u);
  double dirichlet = 0.0;
  for (int k = 0; k < u.size(); ++k) {
    if (g.node_class(k) == NodeClass::Exterior) continue;
    const double fp = std::pow(f_eval(prm.op, H[k]), prm.p);
    if (!std::isfinite(fp)) overflow_at(k);
    dirichlet += g.weights()[k] * fp;
    if (!std::isfinite(dirichlet)) overflow_at(k);
  }
  const double measure =
      prm.lambda_penalty * smoothed_measure(u, prm.delta, mode);
  if (!std::isfinite(measure)) {
    for (int k = 0; k < u.size(); ++k)
      if (g.node_class(k) != NodeClass::Exterior && !std::isfinite(u[k]))
        overflow_at(k);
    overflow_at(-1);
  }
  return {dirichlet, measure, dirichlet + measure};
}

ScalarField energy_gradient(const ScalarField& u, const EnergyParams& prm) {
  check_params(prm);
  if (!(prm.delta > 0.0))
    throw NondifferentiableError(
        "energy_gradient: delta = 0, sharp measure has no derivative");
  if (!(prm.op.eta > 0.0))
    throw NondifferentiableError(
        "energy_gradient: eta = 0, operator has a kink at M = 0");
  const GridSpec& g = u.grid();
  const SymMatField H = hessian(u);
  SymMatField w(g);
  for (int k = 0; k < u.size(); ++k) {
    if (g.node_class(k) == NodeClass::Exterior) continue;
    const double f = f_eval(prm.op, H[k]);
    const double c = g.weights()[k] * prm.p * std::pow(f, prm.p - 1.0);
    if (!std::isfinite(c)) overflow_at(k);
    w[k] = c * f_grad(prm.op, H[k]);
  }
  ScalarField grad = hessian_transpose(w);
  for (int k = 0; k < u.size(); ++k) {
    if (g.node_class(k) == NodeClass::Exterior) continue;
    grad[k] += prm.lambda_penalty * g.weights()[k] *
               heaviside_ramp_deriv(u[k], prm.delta);
    if (!std::isfinite(grad[k])) overflow_at(k);
  }
  return grad;
}

}  // namespace hfb
