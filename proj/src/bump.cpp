#include "hfb/bump.hpp"

namespace hfb {

namespace {

struct Local {
  double sx, sy, t;  // s = (x - c)/R, t = 1 - |s|^2
  bool inside;
};

Local local(const Bump& b, double x, double y) {
  const double sx = (x - b.center.x) / b.radius;
  const double sy = (y - b.center.y) / b.radius;
  const double t = 1.0 - (sx * sx + sy * sy);
  return {sx, sy, t, t > 0.0};
}

}  // namespace

double bump_value(const Bump& b, double x, double y) {
  const Local l = local(b, x, y);
  return l.inside ? l.t * l.t * l.t : 0.0;
}

Vec2 bump_gradient(const Bump& b, double x, double y) {
  const Local l = local(b, x, y);
  if (!l.inside) return {};
  const double c = -6.0 * l.t * l.t / b.radius;
  return {c * l.sx, c * l.sy};
}

SymMat2 bump_hessian(const Bump& b, double x, double y) {
  const Local l = local(b, x, y);
  if (!l.inside) return {};
  const double r2 = b.radius * b.radius;
  const double a = 24.0 * l.t / r2;
  const double d = -6.0 * l.t * l.t / r2;
  return {a * l.sx * l.sx + d, a * l.sx * l.sy, a * l.sy * l.sy + d};
}

SymTensor3 bump_third(const Bump& b, double x, double y) {
  const Local l = local(b, x, y);
  if (!l.inside) return {};
  const double r3 = b.radius * b.radius * b.radius;
  const double cub = -48.0 / r3;
  const double lin = 24.0 * l.t / r3;
  // d_ijk = -48 s_i s_j s_k / R^3 + 24 t (d_ik s_j + d_jk s_i + d_ij s_k) / R^3
  return {cub * l.sx * l.sx * l.sx + lin * 3.0 * l.sx,
          cub * l.sx * l.sx * l.sy + lin * l.sy,
          cub * l.sx * l.sy * l.sy + lin * l.sx,
          cub * l.sy * l.sy * l.sy + lin * 3.0 * l.sy};
}

}  // namespace hfb
