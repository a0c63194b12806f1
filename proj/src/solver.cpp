#include "hfb/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hfb {

namespace {

void check_cfg(const SolveConfig& cfg) { validate_solve_config(cfg); }

void check_boundary(const BoundaryData& bd) {
  const GridSpec& g = bd.g.grid();
  double top = 0.0;
  for (int k = 0; k < bd.g.size(); ++k) {
    if (g.node_class(k) != NodeClass::Band) continue;
    if (!(bd.g[k] >= 0.0))
      throw ConfigError("solver: boundary data must be >= 0 on the band");
    top = std::max(top, bd.g[k]);
  }
  if (top == 0.0)
    throw ConfigError("solver: boundary data must not vanish on the band");
}

double quintic_step(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

// Pin the band to g, zero the exterior, clip interior negatives if asked.
void project(ScalarField& u, const ScalarField& g, bool clip) {
  const GridSpec& gr = u.grid();
  for (int k = 0; k < u.size(); ++k) {
    switch (gr.node_class(k)) {
      case NodeClass::Exterior:
        u[k] = 0.0;
        break;
      case NodeClass::Band:
        u[k] = g[k];
        break;
      case NodeClass::Interior:
        if (clip && u[k] < 0.0) u[k] = 0.0;
        break;
    }
  }
}

double projected_grad_norm(const ScalarField& u, const ScalarField& grad,
                           bool clip) {
  const GridSpec& g = u.grid();
  double sup = 0.0;
  for (int k = 0; k < u.size(); ++k) {
    if (g.node_class(k) != NodeClass::Interior) continue;
    const double pg = clip ? u[k] - std::max(u[k] - grad[k], 0.0) : grad[k];
    sup = std::max(sup, std::abs(pg));
  }
  return sup;
}

MinimizeResult minimize_impl(const BoundaryData& bd, EnergyParams prm,
                             const SolveConfig& cfg, bool clip,
                             const std::vector<double>& schedule,
                             const ScalarField* init = nullptr) {
  check_cfg(cfg);
  check_boundary(bd);
  if (init && init->grid().n() != bd.g.grid().n())
    throw ConfigError("minimize: initial iterate lives on a different grid");
  ScalarField u = init ? *init : harmonic_extension(bd);
  project(u, bd.g, clip);

  MinimizeResult out{u, {}, {}, false, 0.0};
  ScalarField prev_u = u;
  ScalarField prev_grad = u;
  for (double delta : schedule) {
    prm.delta = delta;
    bool have_memory = false;  // Barzilai-Borwein memory resets per stage
    bool stage_converged = false;
    int accepted = 0;
    double e_total = 0.0;
    bool have_e = false;
    for (int it = 0; it < cfg.max_iters; ++it) {
      const ScalarField grad = energy_gradient(u, prm);
      out.final_pg_norm = projected_grad_norm(u, grad, clip);
      if (out.final_pg_norm <= cfg.grad_tol) {
        stage_converged = true;
        break;
      }
      if (!have_e) {
        e_total = energy(u, prm, MeasureMode::Smooth).total;
        have_e = true;
      }
      // spectral (BB1) seed for the backtracking, safeguarded; the energy's
      // h^-4 stiffness makes a unit first step hopeless on fine grids
      double step = cfg.armijo.initial_step;
      if (have_memory) {
        double ss = 0.0, sy = 0.0;
        for (int k = 0; k < u.size(); ++k) {
          const double s = u[k] - prev_u[k];
          const double y = grad[k] - prev_grad[k];
          ss += s * s;
          sy += s * y;
        }
        if (sy > 0.0 && std::isfinite(ss / sy))
          step = std::clamp(ss / sy, 1e-12, 1e3);
      }
      prev_u = u;
      prev_grad = grad;
      bool found = false;
      ScalarField trial = u;
      EnergyBreakdown trial_e{};
      for (int bt = 0; bt < 60; ++bt) {
        trial = u;
        for (int k = 0; k < trial.size(); ++k) trial[k] -= step * grad[k];
        project(trial, bd.g, clip);
        trial_e = energy(trial, prm, MeasureMode::Smooth);
        double slope = 0.0;
        for (int k = 0; k < u.size(); ++k)
          slope += grad[k] * (trial[k] - u[k]);
        if (trial_e.total <= e_total + cfg.armijo.slope_fraction * slope) {
          found = true;
          break;
        }
        step *= cfg.armijo.backtrack;
      }
      if (!found)
        throw StagnationError(
            "minimize: no decreasing step after 60 backtracks at delta = " +
                std::to_string(delta),
            u);
      u = trial;
      e_total = trial_e.total;
      out.energy_history.push_back(trial_e);
      ++accepted;
      have_memory = true;
    }
    out.iterations.push_back(accepted);
    out.converged = stage_converged;
  }
  out.u_star = u;
  return out;
}

}  // namespace

void validate_solve_config(const SolveConfig& cfg) {
  if (cfg.max_iters < 1) throw ConfigError("solver: max_iters must be >= 1");
  if (!(cfg.grad_tol > 0.0)) throw ConfigError("solver: grad_tol must be > 0");
  const ArmijoParams& a = cfg.armijo;
  if (!(a.slope_fraction > 0.0 && a.slope_fraction < 1.0) ||
      !(a.backtrack > 0.0 && a.backtrack < 1.0) || !(a.initial_step > 0.0))
    throw ConfigError("solver: Armijo parameters out of range");
  if (cfg.delta_schedule.empty())
    throw ConfigError("solver: delta schedule must not be empty");
  double prev = std::numeric_limits<double>::infinity();
  for (double d : cfg.delta_schedule) {
    if (!(d > 0.0 && d < prev))
      throw ConfigError(
          "solver: delta schedule must be strictly decreasing and positive");
    prev = d;
  }
}

BoundaryData builtin_boundary(const std::string& name, const GridSpec& g) {
  if (name == "bump") {
    auto f = [](double x, double) {
      return 0.05 + 0.45 * quintic_step((x + 0.5) / 0.5);
    };
    return {ScalarField::from_function(g, f), name};
  }
  if (name == "ring") {
    auto f = [](double, double) { return 0.3; };
    return {ScalarField::from_function(g, f), name};
  }
  if (name == "asym") {
    auto f = [](double x, double) { return 0.4 * (1.0 + x) / 2.0; };
    return {ScalarField::from_function(g, f), name};
  }
  throw ConfigError("builtin_boundary: unknown name '" + name + "'");
}

ScalarField harmonic_extension(const BoundaryData& bd, int max_sweeps,
                               double tol) {
  check_boundary(bd);
  const GridSpec& g = bd.g.grid();
  const int n = g.n();
  ScalarField u = bd.g;  // off-band values of g seed the relaxation
  u.clamp_exterior();
  ScalarField next = u;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double change = 0.0;
    for (int i = 1; i + 1 < n; ++i)
      for (int j = 1; j + 1 < n; ++j) {
        const int k = g.idx(i, j);
        if (g.node_class(k) != NodeClass::Interior) continue;
        const double v = 0.25 * (u[k - 1] + u[k + 1] + u[k - n] + u[k + n]);
        change = std::max(change, std::abs(v - u[k]));
        next[k] = v;
      }
    std::swap(u, next);
    if (change <= tol) break;
  }
  return u;
}

MinimizeResult minimize(const BoundaryData& g, const EnergyParams& params,
                        const SolveConfig& cfg) {
  return minimize_impl(g, params, cfg, cfg.enforce_nonneg, cfg.delta_schedule);
}

MinimizeResult minimize_from(const ScalarField& init, const BoundaryData& g,
                             const EnergyParams& params,
                             const SolveConfig& cfg) {
  return minimize_impl(g, params, cfg, cfg.enforce_nonneg, cfg.delta_schedule,
                       &init);
}

MinimizeResult minimize_unpenalized(const BoundaryData& g, double p,
                                    const SolveConfig& cfg,
                                    const OperatorSpec& op) {
  check_cfg(cfg);
  EnergyParams prm;
  prm.p = p;
  prm.lambda_penalty = 0.0;
  prm.delta = cfg.delta_schedule.back();
  prm.op = op;
  return minimize_impl(g, prm, cfg, /*clip=*/false, {prm.delta});
}

}  // namespace hfb
