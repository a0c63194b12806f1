#include "hfb/variation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hfb/errors.hpp"
#include "hfb/operators.hpp"

namespace hfb {
namespace {

void check_xi(const char* where, const DeformationField& xi) {
  const Bump& b = xi.support;
  if (!(b.radius > 0.0))
    throw PlacementError(std::string(where) + ": support radius must be > 0");
  const double cr = std::hypot(b.center.x, b.center.y);
  if (!(cr + b.radius < 1.0))
    throw PlacementError(std::string(where) +
                         ": support disk must sit strictly inside the domain");
}

void check_prm(const char* where, const EnergyParams& prm) {
  if (!(prm.p > 1.0))
    throw ConfigError(std::string(where) + ": exponent p must be > 1");
  make_operator(prm.op.variant, prm.op.lambda, prm.op.eta);
}

void catmull(double s, double w[4]) {
  w[0] = ((-0.5 * s + 1.0) * s - 0.5) * s;
  w[1] = (1.5 * s - 2.5) * s * s + 1.0;
  w[2] = ((-1.5 * s + 2.0) * s + 0.5) * s;
  w[3] = (0.5 * s - 0.5) * s * s;
}

double bicubic(const ScalarField& f, double x, double y) {
  const GridSpec& g = f.grid();
  const int n = g.n();
  const double fx = (x + 1.0) / g.h();
  const double fy = (y + 1.0) / g.h();
  const int j = std::clamp(static_cast<int>(std::floor(fx)), 0, n - 2);
  const int i = std::clamp(static_cast<int>(std::floor(fy)), 0, n - 2);
  double wx[4], wy[4];
  catmull(fx - j, wx);
  catmull(fy - i, wy);
  double acc = 0.0;
  for (int b = 0; b < 4; ++b) {
    const int ii = std::clamp(i - 1 + b, 0, n - 1);
    double row = 0.0;
    for (int a = 0; a < 4; ++a)
      row += wx[a] * f.at(ii, std::clamp(j - 1 + a, 0, n - 1));
    acc += wy[b] * row;
  }
  return acc;
}

}  // namespace

Vec2 xi_value(const DeformationField& xi, double x, double y) {
  const double phi = bump_value(xi.support, x, y);
  switch (xi.kind) {
    case DeformationKind::Directional:
      return {xi.direction.x * phi, xi.direction.y * phi};
    case DeformationKind::RotatedGradient: {
      const Vec2 gp = bump_gradient(xi.support, x, y);
      return {-gp.y, gp.x};
    }
    case DeformationKind::Radial:
      return {(x - xi.support.center.x) * phi, (y - xi.support.center.y) * phi};
  }
  return {};
}

Mat2 xi_jacobian(const DeformationField& xi, double x, double y) {
  switch (xi.kind) {
    case DeformationKind::Directional: {
      const Vec2 gp = bump_gradient(xi.support, x, y);
      return {xi.direction.x * gp.x, xi.direction.x * gp.y,
              xi.direction.y * gp.x, xi.direction.y * gp.y};
    }
    case DeformationKind::RotatedGradient: {
      const SymMat2 hp = bump_hessian(xi.support, x, y);
      return {-hp.xy, -hp.yy, hp.xx, hp.xy};
    }
    case DeformationKind::Radial: {
      const double phi = bump_value(xi.support, x, y);
      const Vec2 gp = bump_gradient(xi.support, x, y);
      const double rx = x - xi.support.center.x;
      const double ry = y - xi.support.center.y;
      return {phi + rx * gp.x, rx * gp.y, ry * gp.x, phi + ry * gp.y};
    }
  }
  return {};
}

void xi_hessians(const DeformationField& xi, double x, double y, SymMat2* hx,
                 SymMat2* hy) {
  switch (xi.kind) {
    case DeformationKind::Directional: {
      const SymMat2 hp = bump_hessian(xi.support, x, y);
      *hx = xi.direction.x * hp;
      *hy = xi.direction.y * hp;
      return;
    }
    case DeformationKind::RotatedGradient: {
      const SymTensor3 t = bump_third(xi.support, x, y);
      *hx = {-t.xxy, -t.xyy, -t.yyy};
      *hy = {t.xxx, t.xxy, t.xyy};
      return;
    }
    case DeformationKind::Radial: {
      const Vec2 gp = bump_gradient(xi.support, x, y);
      const SymMat2 hp = bump_hessian(xi.support, x, y);
      const double rx = x - xi.support.center.x;
      const double ry = y - xi.support.center.y;
      *hx = {2.0 * gp.x + rx * hp.xx, gp.y + rx * hp.xy, rx * hp.yy};
      *hy = {ry * hp.xx, gp.x + ry * hp.xy, 2.0 * gp.y + ry * hp.yy};
      return;
    }
  }
}

double xi_divergence(const DeformationField& xi, double x, double y) {
  if (xi.kind == DeformationKind::RotatedGradient) return 0.0;
  const Mat2 j = xi_jacobian(xi, x, y);
  return j.xx + j.yy;
}

SymMatField build_M(const ScalarField& u, const DeformationField& xi) {
  check_xi("build_M", xi);
  const GridSpec& g = u.grid();
  const SymMatField h = hessian(u);
  const VecField du = gradient(u);
  SymMatField out(g);
  const int n = g.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int k = g.idx(i, j);
      if (g.node_class(k) == NodeClass::Exterior) continue;
      const Mat2 jac = xi_jacobian(xi, g.x(j), g.y(i));
      SymMat2 hx, hy;
      xi_hessians(xi, g.x(j), g.y(i), &hx, &hy);
      const SymMat2& m = h[k];
      const double hj_xx = m.xx * jac.xx + m.xy * jac.yx;
      const double hj_xy = m.xx * jac.xy + m.xy * jac.yy;
      const double hj_yx = m.xy * jac.xx + m.yy * jac.yx;
      const double hj_yy = m.xy * jac.xy + m.yy * jac.yy;
      out[k] = {2.0 * hj_xx + du[k].x * hx.xx + du[k].y * hy.xx,
                (hj_xy + hj_yx) + du[k].x * hx.xy + du[k].y * hy.xy,
                2.0 * hj_yy + du[k].x * hx.yy + du[k].y * hy.yy};
    }
  return out;
}

double energy_variation_analytic(const ScalarField& u,
                                 const DeformationField& xi,
                                 const EnergyParams& prm) {
  check_prm("energy_variation_analytic", prm);
  if (!(prm.op.eta > 0.0))
    throw NondifferentiableError(
        "energy_variation_analytic: needs eta > 0 away from the F kink");
  const GridSpec& g = u.grid();
  const SymMatField h = hessian(u);
  const SymMatField m = build_M(u, xi);
  ScalarField contraction(g), transport(g);
  const int n = g.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int k = g.idx(i, j);
      if (g.node_class(k) == NodeClass::Exterior) continue;
      const double f = f_eval(prm.op, h[k]);
      contraction[k] =
          std::pow(f, prm.p - 1.0) * contract(f_grad(prm.op, h[k]), m[k]);
      transport[k] =
          std::pow(f, prm.p) * xi_divergence(xi, g.x(j), g.y(i));
    }
  return -prm.p * integrate(contraction) + integrate(transport);
}

double measure_variation(const ScalarField& u, const DeformationField& xi) {
  check_xi("measure_variation", xi);
  const GridSpec& g = u.grid();
  const std::vector<double>& q = g.weights();
  double acc = 0.0;
  const int n = g.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int k = g.idx(i, j);
      if (q[k] == 0.0 || !(u[k] > 0.0)) continue;
      acc += q[k] * xi_divergence(xi, g.x(j), g.y(i));
    }
  return acc;
}

ScalarField pushforward(const ScalarField& u, const DeformationField& xi,
                        double t) {
  check_xi("pushforward", xi);
  // diffeomorphism precondition, sup||Dxi|| estimated on a support lattice
  double sup = 0.0;
  for (int a = 0; a <= 32; ++a)
    for (int b = 0; b <= 32; ++b) {
      const double sx =
          xi.support.center.x + xi.support.radius * (a / 16.0 - 1.0);
      const double sy =
          xi.support.center.y + xi.support.radius * (b / 16.0 - 1.0);
      const Mat2 j = xi_jacobian(xi, sx, sy);
      sup = std::max(sup, std::sqrt(j.xx * j.xx + j.xy * j.xy + j.yx * j.yx +
                                    j.yy * j.yy));
    }
  if (!(std::abs(t) * sup < 0.5))
    throw DeformationError("pushforward: |t| sup||Dxi|| = " +
                           std::to_string(std::abs(t) * sup) +
                           " leaves the diffeomorphism regime");
  const GridSpec& g = u.grid();
  ScalarField out = u;
  const int n = g.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int k = g.idx(i, j);
      if (g.node_class(k) == NodeClass::Exterior) continue;
      const double x0 = g.x(j), y0 = g.y(i);
      double yx = x0, yy = y0;
      bool settled = false;
      for (int it = 0; it < 20 && !settled; ++it) {
        const Vec2 v = xi_value(xi, yx, yy);
        const double nx = x0 - t * v.x, ny = y0 - t * v.y;
        settled = std::max(std::abs(nx - yx), std::abs(ny - yy)) <= 1e-12;
        yx = nx;
        yy = ny;
      }
      if (!settled)
        throw DeformationError("pushforward: fixed point stalled at node " +
                               std::to_string(k));
      // undisplaced nodes keep their values bitwise
      if (yx != x0 || yy != y0) out[k] = bicubic(u, yx, yy);
    }
  return out;
}

double energy_variation_numeric(const ScalarField& u,
                                const DeformationField& xi,
                                const EnergyParams& prm, double t_step) {
  if (!(t_step > 0.0))
    throw ConfigError("energy_variation_numeric: t_step must be > 0");
  const auto slope = [&](double t) {
    const double ahead =
        energy(pushforward(u, xi, t), prm, MeasureMode::Sharp).dirichlet;
    const double behind =
        energy(pushforward(u, xi, -t), prm, MeasureMode::Sharp).dirichlet;
    return (ahead - behind) / (2.0 * t);
  };
  const double full = slope(t_step);
  const double half = slope(0.5 * t_step);
  return (4.0 * half - full) / 3.0;
}

}  // namespace hfb
