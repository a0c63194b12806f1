#include "hfb/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <random>
#include <string>

#include "hfb/fb_analysis.hpp"
#include "hfb/gamma_sweep.hpp"
#include "hfb/mfg.hpp"
#include "hfb/solver.hpp"
#include "hfb/variation.hpp"
#include "json.hpp"

namespace hfb {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

EnergyParams params(double p, double lam, double delta = 1e-3,
                    double eta = 1e-3) {
  EnergyParams prm;
  prm.p = p;
  prm.lambda_penalty = lam;
  prm.delta = delta;
  prm.op = make_operator(OperatorVariant::SmoothedFrobenius, 1.0, eta);
  return prm;
}

double min_interior(const ScalarField& u) {
  const GridSpec& g = u.grid();
  double m = 1e300;
  for (int k = 0; k < u.size(); ++k)
    if (g.node_class(k) == NodeClass::Interior) m = std::min(m, u[k]);
  return m;
}

// Random field with values held away from the ramp breakpoints 0 and delta,
// so central differences of the energy see a smooth function.
ScalarField banded_random_field(const GridSpec& g, double delta,
                                std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ScalarField u(g);
  for (int k = 0; k < u.size(); ++k) {
    if (g.node_class(k) == NodeClass::Exterior) continue;
    const double pick = unit(rng);
    const double t = unit(rng);
    if (pick < 1.0 / 3.0)
      u[k] = -0.4 + 0.3 * t;
    else if (pick < 2.0 / 3.0)
      u[k] = delta * (0.2 + 0.6 * t);
    else
      u[k] = 0.1 + 0.3 * t;
  }
  return u;
}

ScalarField interior_direction(const GridSpec& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  ScalarField v(g);
  for (int k = 0; k < v.size(); ++k)
    if (g.node_class(k) == NodeClass::Interior) v[k] = sym(rng);
  return v;
}

double central_diff_richardson(const ScalarField& u, const ScalarField& v,
                               const EnergyParams& prm, double eps) {
  auto total_at = [&](double t) {
    ScalarField w = u;
    for (int k = 0; k < w.size(); ++k) w[k] += t * v[k];
    return energy(w, prm, MeasureMode::Smooth).total;
  };
  const double coarse = (total_at(eps) - total_at(-eps)) / (2.0 * eps);
  const double fine = (total_at(0.5 * eps) - total_at(-0.5 * eps)) / eps;
  return (4.0 * fine - coarse) / 3.0;
}

// The ten fixed test bumps for the residual-refinement check; drawn once
// from a pinned seed into the window that sits inside the thresholded asym
// support at every tested resolution.
TestFunctionFamily fixed_bumps() {
  std::mt19937_64 rng(555);
  std::uniform_real_distribution<double> cx(0.70, 0.84);
  std::uniform_real_distribution<double> cy(-0.10, 0.10);
  std::uniform_real_distribution<double> rr(0.05, 0.10);
  TestFunctionFamily fam;
  for (int b = 0; b < 10; ++b) {
    const double x = cx(rng), y = cy(rng), r = rr(rng);
    fam.bumps.push_back({{x, y}, r});
  }
  return fam;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Per-battery solve cache: criteria share converged fields, and a fresh
// battery recomputes everything (what the determinism check relies on).
class Battery {
 public:
  explicit Battery(bool extended) : extended_(extended) {}

  CriterionResult run(int id);
  std::vector<CriterionResult> run_all() {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= 11; ++id) out.push_back(run(id));
    return out;
  }

 private:
  struct Solve {
    MinimizeResult res;
    double grad_tol = 0.0;
  };

  bool extended_;
  std::map<std::string, Solve> cache_;

  // Penalty off, clip off: the nonnegativity of the result is substantive.
  const Solve& unpenalized(const std::string& datum, int n) {
    const std::string key = "unpen:" + datum + ":" + std::to_string(n);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      GridSpec g(n);
      SolveConfig cfg;
      cfg.max_iters = 8000;
      cfg.grad_tol = 1e-6;
      it = cache_
               .emplace(key, Solve{minimize_unpenalized(
                                       builtin_boundary(datum, g), 2.0, cfg),
                                   cfg.grad_tol})
               .first;
    }
    return it->second;
  }

  // Penalized solve with the default continuation; `deep` buys the budget a
  // converged minimizer needs at n=33 and is shared by every check that
  // wants that field.
  const Solve& penalized(const std::string& datum, double lam, int n,
                         bool deep) {
    const std::string key = fmt("pen:%s:%g:%d:%d", datum.c_str(), lam, n,
                                deep ? 1 : 0);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      GridSpec g(n);
      SolveConfig cfg;
      cfg.max_iters = deep ? 20000 : 4000;
      cfg.grad_tol = 1e-5;
      it = cache_
               .emplace(key, Solve{minimize(builtin_boundary(datum, g),
                                            params(2.0, lam), cfg),
                                   cfg.grad_tol})
               .first;
    }
    return it->second;
  }

  CriterionResult c1_gradient_exactness();
  CriterionResult c2_operator_axioms();
  CriterionResult c3_nonnegativity();
  CriterionResult c4_energy_descent();
  CriterionResult c5_fp_refinement();
  CriterionResult c6_hj_identity();
  CriterionResult c7_slab_bound();
  CriterionResult c8_perimeter();
  CriterionResult c9_first_variation();
  CriterionResult c10_stationarity();
  CriterionResult c11_sweep_orderings();
};

CriterionResult Battery::c1_gradient_exactness() {
  GridSpec g(17);
  std::mt19937_64 rng(20240917);
  const double delta = 1e-2;
  const ScalarField u = banded_random_field(g, delta, rng);
  double worst = 0.0;
  for (double p : {1.5, 2.0, 3.0}) {
    for (double lam : {0.0, 0.1, 1.0}) {
      const EnergyParams prm = params(p, lam, delta);
      const ScalarField grad = energy_gradient(u, prm);
      for (int trial = 0; trial < 20; ++trial) {
        const ScalarField v = interior_direction(g, rng);
        const double analytic = dot(grad, v);
        const double fd = central_diff_richardson(u, v, prm, 1e-5);
        const double denom = std::max({1e-10, std::abs(analytic), std::abs(fd)});
        worst = std::max(worst, std::abs(fd - analytic) / denom);
      }
    }
  }
  return {1, "gradient exactness", worst <= 1e-6,
          fmt("9 parameter combos x 20 directions on a 17x17 field; worst "
              "relative error %.3g (bound 1e-6)",
              worst)};
}

CriterionResult Battery::c2_operator_axioms() {
  const OperatorSpec sf =
      make_operator(OperatorVariant::SmoothedFrobenius, 1.0, 1e-3);
  const OperatorSpec lt =
      make_operator(OperatorVariant::LinearTrace, std::sqrt(2.0), 0.0);
  const AxiomReport a2 = axiom_sampler(sf, Axiom::A2, 10000, 42);
  const AxiomReport a3s = axiom_sampler(sf, Axiom::A3, 10000, 43);
  const AxiomReport a1 = axiom_sampler(lt, Axiom::A1, 10000, 42);
  const AxiomReport a3f = axiom_sampler(lt, Axiom::A3, 10000, 42);
  const bool clean =
      a2.pass_rate == 1.0 && a3s.pass_rate == 1.0 && a1.pass_rate == 1.0;
  const bool flagged = a3f.pass_rate < 1.0 && a3f.worst_violation > 0.0;
  return {2, "operator axioms", clean && flagged,
          fmt("smoothed-frobenius convexity/growth clean on 1e4 draws; "
              "linear-trace ellipticity clean, growth breached %ld/%ld times "
              "(breach expected, worst %.3g)",
              a3f.trials - a3f.passes, a3f.trials, a3f.worst_violation)};
}

CriterionResult Battery::c3_nonnegativity() {
  double worst = 1e300;
  std::string at;
  for (const char* datum : {"bump", "ring", "asym"}) {
    for (double lam : {0.0, 1.0, 10.0}) {
      const ScalarField& u =
          lam == 0.0
              ? unpenalized(datum, 33).res.u_star
              : penalized(datum, lam, 33, lam == 1.0 && datum[0] == 'b')
                    .res.u_star;
      const double m = min_interior(u);
      if (m < worst) {
        worst = m;
        at = fmt("%s/lambda=%g", datum, lam);
      }
    }
  }
  return {3, "minimizer nonnegativity", worst >= -1e-8,
          fmt("9 data/penalty combos at n=33 (clip off on the unpenalized "
              "legs); smallest interior value %.3g at %s (bound -1e-8)",
              worst, at.c_str())};
}

CriterionResult Battery::c4_energy_descent() {
  const Solve* solves[3] = {&unpenalized("bump", 17), &unpenalized("bump", 33),
                            &penalized("bump", 1.0, 33, true)};
  long steps = 0;
  int rises = 0;
  bool truthful = true;
  for (const Solve* s : solves) {
    // compare accepted totals stage by stage: the smoothing width (and with
    // it the objective) changes at stage boundaries
    std::size_t pos = 0;
    for (int count : s->res.iterations) {
      for (int k = 1; k < count; ++k) {
        const double prev = s->res.energy_history[pos + k - 1].total;
        const double cur = s->res.energy_history[pos + k].total;
        if (cur > prev) ++rises;
      }
      pos += count;
      steps += count;
    }
    if (s->res.converged && s->res.final_pg_norm > s->grad_tol)
      truthful = false;
  }
  const Solve& witness = unpenalized("bump", 17);
  const bool converges =
      witness.res.converged && witness.res.final_pg_norm <= 1e-6;
  return {4, "energy descent", rises == 0 && truthful && converges,
          fmt("%ld accepted steps over 3 solves, %d energy rises; tightest "
              "converged solve reaches pg %.3g (bound 1e-6)",
              steps, rises, witness.res.final_pg_norm)};
}

CriterionResult Battery::c5_fp_refinement() {
  const TestFunctionFamily fam = fixed_bumps();
  auto max_residual = [&](int n) {
    const Solve& s = unpenalized("asym", n);
    const EnergyParams prm = params(2.0, 0.0);
    const GridSpec g(n);
    const DensityField d = extract_density(s.res.u_star, prm, 5.0 * g.h());
    return max_abs(fp_residual(s.res.u_star, d, prm, fam));
  };
  const double r33 = max_residual(33);
  const double r65 = max_residual(65);
  bool ok = r65 <= 0.5 * r33;
  std::string tail;
  if (extended_) {
    const double r129 = max_residual(129);
    ok = ok && r129 <= 0.5 * r65;
    tail = fmt(", %.3g at n=129", r129);
  }
  return {5, "weak Fokker-Planck residual decay", ok,
          fmt("10 fixed bumps against the affine-datum pair: max residual "
              "%.3g at n=33, %.3g at n=65%s (halving required; the affine "
              "minimizer's density vanishes identically)",
              r33, r65, tail.c_str())};
}

CriterionResult Battery::c6_hj_identity() {
  double sup = 0.0;
  int pairs = 0;
  auto probe = [&](const ScalarField& u, const EnergyParams& prm) {
    const GridSpec& g = u.grid();
    const DensityField d = extract_density(u, prm, 5.0 * g.h());
    const ScalarField res = hj_residual(u, d, prm);
    for (int k = 0; k < res.size(); ++k)
      sup = std::max(sup, std::abs(res[k]));
    ++pairs;
  };
  probe(unpenalized("asym", 33).res.u_star, params(2.0, 0.0));
  probe(unpenalized("asym", 65).res.u_star, params(2.0, 0.0));
  probe(penalized("bump", 1.0, 33, true).res.u_star, params(2.0, 1.0));
  if (extended_) probe(unpenalized("asym", 129).res.u_star, params(2.0, 0.0));
  return {6, "Hamilton-Jacobi identity", sup == 0.0,
          fmt("%d extracted pairs at p=2; residual sup-norm %.3g (exact zero "
              "required: the exponent-1 powers round-trip bitwise)",
              pairs, sup)};
}

CriterionResult Battery::c7_slab_bound() {
  const Solve& s = penalized("bump", 1.0, 33, true);
  const EnergyParams prm = params(2.0, 1.0);
  const double s05 = slab_energy(s.res.u_star, prm, 0.05);
  const double s10 = slab_energy(s.res.u_star, prm, 0.1);
  return {7, "slab-energy bound", s05 < 0.05 && s10 < 0.1,
          fmt("slab(0.05) = %.4g (bound 0.05), slab(0.1) = %.4g (bound 0.1); "
              "no dead zone forms at this penalty, so the slab keeps a fat "
              "region of order-one curvature",
              s05, s10)};
}

CriterionResult Battery::c8_perimeter() {
  GridSpec g(129);
  const ScalarField cone = ScalarField::from_function(
      g, [](double x, double y) { return 0.5 - std::hypot(x, y); });
  const double per = level_perimeter(cone, 0.0).length;
  const double co = coarea_scan(cone, 0.1, 10).integral;
  const double per_rel = std::abs(per - kPi) / kPi;
  const double co_rel = std::abs(co - 0.09 * kPi) / (0.09 * kPi);
  return {8, "perimeter calibration", per_rel <= 0.02 && co_rel <= 0.05,
          fmt("cone at n=129: level-0 perimeter off by %.3g rel (bound 0.02), "
              "coarea integral off by %.3g rel (bound 0.05)",
              per_rel, co_rel)};
}

CriterionResult Battery::c9_first_variation() {
  GridSpec g(65);
  const EnergyParams prm = params(2.0, 0.0);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double A = 0.10 + 0.06 * U(rng);
    const double k1 = 1.4 + 1.0 * U(rng);
    const double k2 = 1.4 + 1.0 * U(rng);
    const double ph1 = 2.0 * kPi * U(rng);
    const double ph2 = 2.0 * kPi * U(rng);
    DeformationField xi;
    xi.kind =
        (i % 2 == 0) ? DeformationKind::Directional : DeformationKind::Radial;
    xi.support.center = {0.24 * U(rng) - 0.12, 0.24 * U(rng) - 0.12};
    const double cr = std::hypot(xi.support.center.x, xi.support.center.y);
    xi.support.radius = 0.45 + 0.15 * U(rng);
    if (cr + xi.support.radius > 0.75) xi.support.radius = 0.75 - cr;
    const double ang = 2.0 * kPi * U(rng);
    xi.direction = {std::cos(ang), std::sin(ang)};
    const ScalarField u = ScalarField::from_function(g, [&](double x, double y) {
      return 0.15 * (x * x + y * y) +
             A * std::sin(k1 * x + ph1) * std::cos(k2 * y + ph2);
    });
    const double va = energy_variation_analytic(u, xi, prm);
    const double vn = energy_variation_numeric(u, xi, prm, 1e-3);
    worst = std::max(worst,
                     std::abs(va - vn) / std::max(std::abs(va), std::abs(vn)));
  }

  // compactly supported fields integrate their divergence to zero over the
  // full disk; the lattice sum must land there too
  const ScalarField one =
      ScalarField::from_function(g, [](double, double) { return 1.0; });
  const DeformationField dir{DeformationKind::Directional,
                             {{0.2, -0.1}, 0.4},
                             {1.0, 0.0}};
  const DeformationField rad{DeformationKind::Radial,
                             {{-0.15, 0.1}, 0.5},
                             {1.0, 0.0}};
  const double mv_dir = std::abs(measure_variation(one, dir));
  const double mv_rad = std::abs(measure_variation(one, rad));
  const bool ok = worst <= 1e-2 && mv_dir <= 1e-3 && mv_rad <= 1e-3;
  return {9, "first-variation cross-validation", ok,
          fmt("5 seeded pairs at n=65: worst analytic/numeric gap %.3g rel "
              "(bound 1e-2); full-disk divergence integrals %.3g and %.3g "
              "(bound 1e-3)",
              worst, mv_dir, mv_rad)};
}

CriterionResult Battery::c10_stationarity() {
  const DeformationField xi{DeformationKind::Directional,
                            {{0.0, 0.0}, 0.35},
                            {1.0, 0.0}};
  const EnergyParams prm = params(2.0, 0.0);
  double v[2] = {0.0, 0.0};
  bool supported = true;
  int q = 0;
  for (int n : {17, 33}) {
    const Solve& s = unpenalized("bump", n);
    const GridSpec g(n);
    double umin = 1e300;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (std::hypot(g.x(j), g.y(i)) <= 0.35)
          umin = std::min(umin, s.res.u_star.at(i, j));
    if (umin <= 0.05) supported = false;  // xi must live where u is positive
    v[q++] = energy_variation_analytic(s.res.u_star, xi, prm);
  }
  const double extrap = std::abs(v[1] - v[0]) / 3.0 + 1e-10;
  const bool ok = supported && std::abs(v[1]) <= 10.0 * extrap;
  return {10, "stationarity at the minimizer", ok,
          fmt("variation %.3g at n=17 and %.3g at n=33; extrapolated "
              "discretization error %.3g, ratio %.2f (bound 10)",
              v[0], v[1], extrap, std::abs(v[1]) / extrap)};
}

CriterionResult Battery::c11_sweep_orderings() {
  std::vector<double> schedule;
  for (int k = 0; k <= 8; ++k) schedule.push_back(std::pow(2.0, -k));
  std::string detail;
  bool all = true;
  for (int n : extended_ ? std::vector<int>{33, 65} : std::vector<int>{33}) {
    GridSpec g(n);
    SolveConfig cfg;
    cfg.max_iters = 20000;
    cfg.grad_tol = (n == 33) ? 1e-5 : 1e-2;  // per-scale attainable floor
    cfg.delta_schedule = {1e-3};  // warm rungs only need the final width
    const SweepOutcome sw =
        run_sweep(builtin_boundary("bump", g), params(2.0, 1.0), schedule, cfg);
    const GammaVerdict verdict = gamma_report(sw, 1e-4);
    bool ordered = true;
    for (std::size_t k = 1; k < sw.records.size(); ++k)
      if (sw.records[k].penalized.total > sw.records[k - 1].penalized.total + 1e-4)
        ordered = false;
    bool tail_dist = true;  // non-increasing over the final 4 (exact ties pass)
    const std::size_t nr = sw.records.size();
    for (std::size_t k = nr - 3; k < nr; ++k)
      if (sw.records[k].dist_to_u0 > sw.records[k - 1].dist_to_u0)
        tail_dist = false;
    const bool ok = ordered && verdict.liminf_ok && verdict.recovery_ok &&
                    tail_dist && verdict.last_dist < 0.1 * verdict.u0_w1p &&
                    verdict.equicoercive;
    all = all && ok;
    detail += fmt("%sn=%d: energies ordered %s, liminf gap %.3g, recovery "
                  "err %.3g, last dist %.3g, norm spread %.2fx median",
                  detail.empty() ? "" : "; ", n, ordered ? "yes" : "NO",
                  verdict.liminf_gap, verdict.recovery_worst_err,
                  verdict.last_dist, verdict.max_w2p / verdict.median_w2p);
  }
  return {11, "penalty-sweep orderings", all, detail};
}

CriterionResult Battery::run(int id) {
  switch (id) {
    case 1:
      return c1_gradient_exactness();
    case 2:
      return c2_operator_axioms();
    case 3:
      return c3_nonnegativity();
    case 4:
      return c4_energy_descent();
    case 5:
      return c5_fp_refinement();
    case 6:
      return c6_hj_identity();
    case 7:
      return c7_slab_bound();
    case 8:
      return c8_perimeter();
    case 9:
      return c9_first_variation();
    case 10:
      return c10_stationarity();
    case 11:
      return c11_sweep_orderings();
    default:
      throw ConfigError("acceptance: no criterion with id " +
                        std::to_string(id));
  }
}

// The determinism check re-runs the other eleven from a cold cache and
// compares the serialized outcomes byte for byte.
CriterionResult criterion12(const std::vector<CriterionResult>& first,
                            bool extended) {
  Battery fresh(extended);
  const std::vector<CriterionResult> second = fresh.run_all();
  const std::string a = acceptance_json(first);
  const std::string b = acceptance_json(second);
  return {12, "report determinism", a == b,
          fmt("two cold-cache battery passes serialize to %zu bytes each; "
              "byte-identical: %s",
              a.size(), a == b ? "yes" : "NO")};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(bool extended) {
  Battery battery(extended);
  std::vector<CriterionResult> results = battery.run_all();
  results.push_back(criterion12(results, extended));
  return results;
}

CriterionResult run_criterion(int id, bool extended) {
  if (id == 12) {
    Battery battery(extended);
    return criterion12(battery.run_all(), extended);
  }
  Battery battery(extended);
  return battery.run(id);
}

std::string acceptance_json(const std::vector<CriterionResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const CriterionResult& r : results)
    arr.push_back({{"id", r.id},
                   {"name", r.name},
                   {"passed", r.passed},
                   {"detail", r.detail}});
  return arr.dump(2) + "\n";
}

}  // namespace hfb
