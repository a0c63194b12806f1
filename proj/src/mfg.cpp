#include "hfb/mfg.hpp"

#include <cmath>
#include <string>

#include "hfb/errors.hpp"

namespace hfb {

namespace {

// pow with an exact exponent-1 path so p = 2 round-trips bitwise
double powx(double base, double e) {
  return e == 1.0 ? base : std::pow(base, e);
}

}  // namespace

DensityField extract_density(const ScalarField& u, const EnergyParams& prm,
                             double tau) {
  if (!(tau > 0.0))
    throw ThresholdError("extract_density: threshold must be > 0");
  if (!(prm.p > 1.0)) throw ConfigError("extract_density: p must be > 1");
  const GridSpec& g = u.grid();
  const SymMatField H = hessian(u);
  DensityField out{ScalarField(g), std::vector<std::uint8_t>(u.size(), 0), tau};
  for (int k = 0; k < u.size(); ++k) {
    if (g.node_class(k) == NodeClass::Exterior) continue;
    if (!(u[k] > tau)) continue;
    out.support[k] = 1;
    out.m[k] = powx(f_eval(prm.op, H[k]), prm.p - 1.0);
  }
  return out;
}

ScalarField hj_residual(const ScalarField& u, const DensityField& m,
                        const EnergyParams& prm) {
  const GridSpec& g = u.grid();
  const SymMatField H = hessian(u);
  ScalarField r(g);
  for (int k = 0; k < u.size(); ++k) {
    if (!m.support[k]) continue;
    if (m.m[k] < 0.0)
      throw DomainError("hj_residual: negative density at node " +
                        std::to_string(k));
    r[k] = f_eval(prm.op, H[k]) - powx(m.m[k], 1.0 / (prm.p - 1.0));
  }
  return r;
}

std::vector<double> fp_residual(const ScalarField& u, const DensityField& m,
                                const EnergyParams& prm,
                                const TestFunctionFamily& tests) {
  const GridSpec& g = u.grid();
  const SymMatField H = hessian(u);
  // placement: every node of each support disk must carry the density mask,
  // and the disk may not poke out of the unit disk
  for (std::size_t b = 0; b < tests.bumps.size(); ++b) {
    const Bump& bb = tests.bumps[b];
    const double cr = std::sqrt(bb.center.x * bb.center.x +
                                bb.center.y * bb.center.y);
    bool inside = bb.radius > 0.0 && cr + bb.radius <= 1.0;
    for (int i = 0; inside && i < g.n(); ++i)
      for (int j = 0; j < g.n(); ++j) {
        const double dx = g.x(j) - bb.center.x;
        const double dy = g.y(i) - bb.center.y;
        if (dx * dx + dy * dy >= bb.radius * bb.radius) continue;
        if (!m.support[g.idx(i, j)]) {
          inside = false;
          break;
        }
      }
    if (!inside)
      throw PlacementError("fp_residual: bump " + std::to_string(b) +
                           " escapes the density support");
  }
  // The coefficient field F_ij m is nodewise constant while the bump Hessian
  // is integrated over each dual cell (8x8 subsamples, clipped to the unit
  // disk like the cut-cell weights).  A raw nodal sample of the Hessian would
  // leave the C^2 support edge dominating the residual instead of the
  // coefficient error this residual is meant to expose.
  const double h = g.h();
  std::vector<double> out;
  out.reserve(tests.bumps.size());
  for (const Bump& bb : tests.bumps) {
    double acc = 0.0;
    for (int i = 0; i < g.n(); ++i)
      for (int j = 0; j < g.n(); ++j) {
        const int k = g.idx(i, j);
        if (!m.support[k] || m.m[k] == 0.0) continue;
        const double cx = g.x(j), cy = g.y(i);
        if ((cx - bb.center.x) * (cx - bb.center.x) +
                (cy - bb.center.y) * (cy - bb.center.y) >
            (bb.radius + h) * (bb.radius + h))
          continue;
        SymMat2 cell{};
        for (int a = 0; a < 8; ++a)
          for (int b = 0; b < 8; ++b) {
            const double sx = cx + h * ((a + 0.5) / 8.0 - 0.5);
            const double sy = cy + h * ((b + 0.5) / 8.0 - 0.5);
            if (sx * sx + sy * sy > 1.0) continue;
            cell = cell + bump_hessian(bb, sx, sy);
          }
        cell = (h * h / 64.0) * cell;
        acc += m.m[k] * contract(f_grad(prm.op, H[k]), cell);
      }
    out.push_back(acc);
  }
  return out;
}

double density_integrability(const DensityField& m, double p) {
  if (!(p > 1.0)) throw ConfigError("density_integrability: p must be > 1");
  const GridSpec& g = m.m.grid();
  const double q = p / (p - 1.0);
  double acc = 0.0;
  for (int k = 0; k < m.m.size(); ++k)
    if (m.support[k]) acc += g.weights()[k] * powx(std::abs(m.m[k]), q);
  return powx(acc, 1.0 / q);
}

}  // namespace hfb
