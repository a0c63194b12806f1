#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "hfb/acceptance.hpp"
#include "hfb/calculus.hpp"
#include "hfb/energy.hpp"
#include "hfb/errors.hpp"
#include "hfb/fb_analysis.hpp"
#include "hfb/gamma_sweep.hpp"
#include "hfb/mfg.hpp"
#include "hfb/solver.hpp"

namespace py = pybind11;
using namespace hfb;

namespace {

py::array_t<double> to_numpy(const ScalarField& f) {
  const int n = f.grid().n();
  py::array_t<double> a({n, n});
  std::memcpy(a.mutable_data(), f.values().data(),
              sizeof(double) * f.values().size());
  return a;
}

ScalarField from_numpy(
    const py::array_t<double, py::array::c_style | py::array::forcecast>&
        arr) {
  if (arr.ndim() != 2 || arr.shape(0) != arr.shape(1))
    throw ConfigError("field array must be square (n, n)");
  const GridSpec g(static_cast<int>(arr.shape(0)));
  ScalarField f(g);
  std::memcpy(f.values().data(), arr.data(),
              sizeof(double) * f.values().size());
  f.clamp_exterior();  // exterior entries are dead storage by convention
  return f;
}

EnergyParams params(double p, double lam, double delta, double eta) {
  EnergyParams prm;
  prm.p = p;
  prm.lambda_penalty = lam;
  prm.delta = delta;
  prm.op.eta = eta;
  return prm;
}

SolveConfig solve_config(int max_iters, double grad_tol,
                         const std::vector<double>& delta_schedule,
                         bool enforce_nonneg) {
  SolveConfig cfg;
  cfg.max_iters = max_iters;
  cfg.grad_tol = grad_tol;
  cfg.delta_schedule = delta_schedule;
  cfg.enforce_nonneg = enforce_nonneg;
  validate_solve_config(cfg);
  return cfg;
}

py::dict breakdown_dict(const EnergyBreakdown& b) {
  py::dict d;
  d["dirichlet"] = b.dirichlet;
  d["measure"] = b.measure;
  d["total"] = b.total;
  return d;
}

py::dict result_dict(const MinimizeResult& res, const EnergyParams& prm) {
  py::dict d;
  d["u"] = to_numpy(res.u_star);
  d["converged"] = res.converged;
  d["final_pg_norm"] = res.final_pg_norm;
  d["iterations"] = res.iterations;
  d["energy"] = breakdown_dict(energy(res.u_star, prm, MeasureMode::Sharp));
  return d;
}

py::dict record_dict(const SweepRecord& r) {
  py::dict d;
  d["lambda"] = r.lambda;
  d["u"] = to_numpy(r.u);
  d["penalized"] = breakdown_dict(r.penalized);
  d["unpenalized"] = breakdown_dict(r.unpenalized);
  d["sobolev_w1p"] = r.sobolev_w1p;
  d["sobolev_w2p"] = r.sobolev_w2p;
  d["dist_to_u0"] = r.dist_to_u0;
  d["recovery_gap"] = r.recovery_gap;
  d["converged"] = r.converged;
  d["final_pg_norm"] = r.final_pg_norm;
  d["iterations"] = r.iterations;
  return d;
}

py::dict criterion_dict(const CriterionResult& r) {
  py::dict d;
  d["id"] = r.id;
  d["name"] = r.name;
  d["passed"] = r.passed;
  d["detail"] = r.detail;
  return d;
}

}  // namespace

PYBIND11_MODULE(hessfb, m) {
  m.doc() = "Hessian-energy free-boundary problems on the unit disk";
  py::register_exception<Error>(m, "Error");

  m.def(
      "boundary",
      [](const std::string& name, int n) {
        return to_numpy(builtin_boundary(name, GridSpec(n)).g);
      },
      py::arg("name"), py::arg("n") = 33,
      "Built-in Dirichlet datum ('bump', 'ring', 'asym') as an (n, n) array.");

  m.def(
      "solve",
      [](const std::string& boundary, int n, double p, double lam,
         int max_iters, double grad_tol,
         const std::vector<double>& delta_schedule, bool enforce_nonneg,
         double eta) {
        const BoundaryData bd = builtin_boundary(boundary, GridSpec(n));
        const SolveConfig cfg =
            solve_config(max_iters, grad_tol, delta_schedule, enforce_nonneg);
        const EnergyParams prm =
            params(p, lam, delta_schedule.back(), eta);
        const MinimizeResult res =
            lam == 0.0 ? minimize_unpenalized(bd, p, cfg, prm.op)
                       : minimize(bd, prm, cfg);
        return result_dict(res, prm);
      },
      py::arg("boundary") = "ring", py::arg("n") = 33, py::arg("p") = 2.0,
      py::arg("lam") = 1.0, py::arg("max_iters") = 5000,
      py::arg("grad_tol") = 1e-6,
      py::arg("delta_schedule") = std::vector<double>{1e-1, 1e-2, 1e-3},
      py::arg("enforce_nonneg") = true, py::arg("eta") = 1e-3,
      "Minimize the penalized functional (unconstrained base problem when "
      "lam == 0); returns u with energies and solver state.");

  m.def(
      "energy",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>&
             u,
         double p, double lam, double delta, double eta) {
        const ScalarField f = from_numpy(u);
        const MeasureMode mode =
            delta > 0.0 ? MeasureMode::Smooth : MeasureMode::Sharp;
        return breakdown_dict(energy(f, params(p, lam, delta, eta), mode));
      },
      py::arg("u"), py::arg("p") = 2.0, py::arg("lam") = 1.0,
      py::arg("delta") = 0.0, py::arg("eta") = 1e-3,
      "Energy breakdown of a field; sharp positivity measure unless "
      "delta > 0.");

  m.def(
      "extract_density",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>&
             u,
         double p, double tau, double eta) {
        const ScalarField f = from_numpy(u);
        return to_numpy(
            extract_density(f, params(p, 1.0, 1e-3, eta), tau).m);
      },
      py::arg("u"), py::arg("p") = 2.0, py::arg("tau") = 0.1,
      py::arg("eta") = 1e-3,
      "Game density F(D2 u)^(p-1) on {u > tau}, zero elsewhere.");

  m.def(
      "mfg_residuals",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>&
             u,
         double p, double tau, double eta) {
        const ScalarField f = from_numpy(u);
        const EnergyParams prm = params(p, 1.0, 1e-3, eta);
        const DensityField den = extract_density(f, prm, tau);
        const ScalarField r = hj_residual(f, den, prm);
        double sup = 0.0;
        for (int k = 0; k < r.size(); ++k)
          sup = std::max(sup, std::abs(r[k]));
        int nodes = 0;
        for (std::uint8_t s : den.support) nodes += s;
        py::dict d;
        d["hj_sup"] = sup;
        d["support_nodes"] = nodes;
        d["mass"] = integrate(den.m);
        d["lp_norm"] = density_integrability(den, p);
        return d;
      },
      py::arg("u"), py::arg("p") = 2.0, py::arg("tau") = 0.1,
      py::arg("eta") = 1e-3,
      "Extract the density and summarize the pointwise coupling residual.");

  m.def(
      "level_perimeter",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>&
             u,
         double t) {
        const BoundaryCurve c = level_perimeter(from_numpy(u), t);
        py::array_t<double> seg(
            {static_cast<py::ssize_t>(c.segments.size()), py::ssize_t(4)});
        double* s = seg.mutable_data();
        for (const BoundaryCurve::Segment& q : c.segments) {
          *s++ = q.a.x;
          *s++ = q.a.y;
          *s++ = q.b.x;
          *s++ = q.b.y;
        }
        py::dict d;
        d["level"] = c.level;
        d["length"] = c.length;
        d["segments"] = seg;
        return d;
      },
      py::arg("u"), py::arg("t") = 0.0,
      "Marching-squares curve of {u > t}: total length plus an (m, 4) "
      "segment array.");

  m.def(
      "coarea_scan",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>&
             u,
         double eps, int samples) {
        const CoareaResult c = coarea_scan(from_numpy(u), eps, samples);
        py::dict d;
        d["integral"] = c.integral;
        d["implied_c"] = c.implied_c;
        return d;
      },
      py::arg("u"), py::arg("eps") = 0.1, py::arg("samples") = 10);

  m.def(
      "slab_energy",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>&
             u,
         double p, double eps, double eta) {
        return slab_energy(from_numpy(u), params(p, 1.0, 1e-3, eta), eps);
      },
      py::arg("u"), py::arg("p") = 2.0, py::arg("eps") = 0.1,
      py::arg("eta") = 1e-3,
      "Quadrature of F(D2 u)^p over the slab {0 <= u <= eps}.");

  m.def(
      "sweep",
      [](const std::string& boundary, int n, double p,
         const std::vector<double>& schedule, int max_iters, double grad_tol,
         bool warm_start, double eta) {
        const BoundaryData bd = builtin_boundary(boundary, GridSpec(n));
        const SolveConfig cfg = solve_config(
            max_iters, grad_tol, std::vector<double>{1e-1, 1e-2, 1e-3}, true);
        const EnergyParams prm = params(p, 1.0, 1e-3, eta);
        const SweepOutcome sw = run_sweep(bd, prm, schedule, cfg, warm_start);
        py::dict d;
        d["base"] = record_dict(sw.base);
        py::list recs;
        for (const SweepRecord& r : sw.records) recs.append(record_dict(r));
        d["records"] = recs;
        d["aborted"] = sw.aborted;
        d["abort_reason"] = sw.abort_reason;
        if (sw.records.size() >= 3) {
          const GammaVerdict v = gamma_report(sw);
          py::dict jv;
          jv["equicoercive"] = v.equicoercive;
          jv["liminf_ok"] = v.liminf_ok;
          jv["liminf_gap"] = v.liminf_gap;
          jv["recovery_ok"] = v.recovery_ok;
          jv["recovery_worst_err"] = v.recovery_worst_err;
          jv["dist_ok"] = v.dist_ok;
          jv["last_dist"] = v.last_dist;
          jv["all_ok"] = v.all_ok;
          d["verdict"] = jv;
        }
        return d;
      },
      py::arg("boundary") = "bump", py::arg("n") = 33, py::arg("p") = 2.0,
      py::arg("schedule") =
          std::vector<double>{1.0, 0.5, 0.25, 0.125, 0.0625},
      py::arg("max_iters") = 5000, py::arg("grad_tol") = 1e-6,
      py::arg("warm_start") = true, py::arg("eta") = 1e-3,
      "Penalty ladder with cross-evaluations; includes the convergence "
      "certificates when the ladder has at least 3 rungs.");

  m.def(
      "acceptance",
      [](bool extended) {
        py::list out;
        for (const CriterionResult& r : run_acceptance(extended))
          out.append(criterion_dict(r));
        return out;
      },
      py::arg("extended") = false, "Run the full acceptance battery.");

  m.def(
      "acceptance_criterion",
      [](int id, bool extended) {
        return criterion_dict(run_criterion(id, extended));
      },
      py::arg("id"), py::arg("extended") = false,
      "Run one acceptance criterion by number (1-12).");
}
