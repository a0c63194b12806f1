#include "hfb/fb_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hfb/errors.hpp"
#include "hfb/operators.hpp"

namespace hfb {
namespace {

struct Corner {
  double v;  // u - t
  Vec2 p;
};

// Linear crossing between corners of opposite classification; the inside
// corner has v > 0 and the outside one v <= 0, so the gap never vanishes.
Vec2 crossing(const Corner& a, const Corner& b) {
  const double s = a.v / (a.v - b.v);
  return {a.p.x + s * (b.p.x - a.p.x), a.p.y + s * (b.p.y - a.p.y)};
}

double bilinear(const ScalarField& f, double x, double y) {
  const GridSpec& g = f.grid();
  const int n = g.n();
  const double fx = (x + 1.0) / g.h();
  const double fy = (y + 1.0) / g.h();
  const int j = std::clamp(static_cast<int>(std::floor(fx)), 0, n - 2);
  const int i = std::clamp(static_cast<int>(std::floor(fy)), 0, n - 2);
  const double ax = fx - j;
  const double ay = fy - i;
  return (1.0 - ay) * ((1.0 - ax) * f.at(i, j) + ax * f.at(i, j + 1)) +
         ay * ((1.0 - ax) * f.at(i + 1, j) + ax * f.at(i + 1, j + 1));
}

// Row-wise divergence of a symmetric matrix field, component derivatives
// through the per-node stencil plans.
VecField divergence(const SymMatField& w) {
  const GridSpec& g = w.grid();
  ScalarField xx(g), xy(g), yy(g);
  for (int k = 0; k < w.size(); ++k) {
    xx[k] = w[k].xx;
    xy[k] = w[k].xy;
    yy[k] = w[k].yy;
  }
  const ScalarField dxx_x = apply_d1(xx, Axis::X);
  const ScalarField dxy_x = apply_d1(xy, Axis::X);
  const ScalarField dxy_y = apply_d1(xy, Axis::Y);
  const ScalarField dyy_y = apply_d1(yy, Axis::Y);
  VecField out(g);
  for (int k = 0; k < out.size(); ++k)
    out[k] = {dxx_x[k] + dxy_y[k], dxy_x[k] + dyy_y[k]};
  return out;
}

void check_prm(const char* where, const EnergyParams& prm) {
  if (!(prm.p > 1.0))
    throw ConfigError(std::string(where) + ": exponent p must be > 1");
  make_operator(prm.op.variant, prm.op.lambda, prm.op.eta);
}

}  // namespace

BoundaryCurve level_perimeter(const ScalarField& u, double t) {
  if (t < 0.0) throw ConfigError("level_perimeter: level must be >= 0");
  const GridSpec& g = u.grid();
  const int n = g.n();
  BoundaryCurve out;
  out.level = t;
  for (int i = 0; i + 1 < n; ++i) {
    for (int j = 0; j + 1 < n; ++j) {
      if (g.exterior(i, j) || g.exterior(i, j + 1) || g.exterior(i + 1, j) ||
          g.exterior(i + 1, j + 1))
        continue;
      const Corner bl{u.at(i, j) - t, {g.x(j), g.y(i)}};
      const Corner br{u.at(i, j + 1) - t, {g.x(j + 1), g.y(i)}};
      const Corner tl{u.at(i + 1, j) - t, {g.x(j), g.y(i + 1)}};
      const Corner tr{u.at(i + 1, j + 1) - t, {g.x(j + 1), g.y(i + 1)}};
      const int c = (bl.v > 0.0 ? 1 : 0) | (br.v > 0.0 ? 2 : 0) |
                    (tr.v > 0.0 ? 4 : 0) | (tl.v > 0.0 ? 8 : 0);
      if (c == 0 || c == 15) continue;
      const auto emit = [&](const Vec2& a, const Vec2& b) {
        out.segments.push_back({a, b});
      };
      const auto bottom = [&] { return crossing(bl, br); };
      const auto right = [&] { return crossing(br, tr); };
      const auto top = [&] { return crossing(tl, tr); };
      const auto left = [&] { return crossing(bl, tl); };
      switch (c) {
        case 1:
        case 14:
          emit(left(), bottom());
          break;
        case 2:
        case 13:
          emit(bottom(), right());
          break;
        case 3:
        case 12:
          emit(left(), right());
          break;
        case 4:
        case 11:
          emit(right(), top());
          break;
        case 6:
        case 9:
          emit(bottom(), top());
          break;
        case 7:
        case 8:
          emit(top(), left());
          break;
        case 5: {  // bl, tr inside
          if (0.25 * (bl.v + br.v + tl.v + tr.v) > 0.0) {
            emit(left(), top());
            emit(bottom(), right());
          } else {
            emit(left(), bottom());
            emit(right(), top());
          }
          break;
        }
        case 10: {  // br, tl inside
          if (0.25 * (bl.v + br.v + tl.v + tr.v) > 0.0) {
            emit(left(), bottom());
            emit(right(), top());
          } else {
            emit(bottom(), right());
            emit(top(), left());
          }
          break;
        }
      }
    }
  }
  for (const auto& s : out.segments)
    out.length += std::hypot(s.b.x - s.a.x, s.b.y - s.a.y);
  return out;
}

CoareaResult coarea_scan(const ScalarField& u, double eps, int samples) {
  if (!(eps > 0.0)) throw ConfigError("coarea_scan: eps must be > 0");
  if (samples < 2) throw ConfigError("coarea_scan: need at least 2 samples");
  const double dt = eps / samples;
  double acc = 0.0;
  for (int k = 0; k < samples; ++k)
    acc += level_perimeter(u, (k + 0.5) * dt).length;
  CoareaResult r;
  r.integral = acc * dt;
  r.implied_c = r.integral / eps;
  return r;
}

double slab_energy(const ScalarField& u, const EnergyParams& prm, double eps) {
  if (!(eps > 0.0)) throw ConfigError("slab_energy: eps must be > 0");
  check_prm("slab_energy", prm);
  const SymMatField H = hessian(u);
  const std::vector<double>& q = u.grid().weights();
  double acc = 0.0;
  for (int k = 0; k < u.size(); ++k) {
    if (q[k] == 0.0 || u[k] < 0.0 || u[k] > eps) continue;
    acc += q[k] * std::pow(f_eval(prm.op, H[k]), prm.p);
  }
  return acc;
}

FbReport fb_condition_residual(const ScalarField& u, const EnergyParams& prm,
                               double tau) {
  check_prm("fb_condition_residual", prm);
  const BoundaryCurve curve = level_perimeter(u, tau);
  if (curve.segments.empty())
    throw EmptyCurveError("fb_condition_residual: no boundary at level " +
                          std::to_string(tau));
  const GridSpec& g = u.grid();
  const SymMatField H = hessian(u);
  const VecField du = gradient(u);
  SymMatField fg(g), w(g);
  ScalarField fp1(g);
  for (int k = 0; k < u.size(); ++k) {
    if (g.node_class(k) == NodeClass::Exterior) continue;
    const SymMat2 d = f_grad(prm.op, H[k]);
    fp1[k] = std::pow(f_eval(prm.op, H[k]), prm.p - 1.0);
    fg[k] = d;
    w[k] = fp1[k] * d;
  }
  const VecField div_fg = divergence(fg);
  const VecField div_w = divergence(w);
  ScalarField statement(g), proof(g);
  for (int k = 0; k < u.size(); ++k) {
    if (g.node_class(k) == NodeClass::Exterior) continue;
    statement[k] = fp1[k] * dot(div_fg[k], du[k]);
    proof[k] = 2.0 * prm.p * dot(div_w[k], du[k]);
  }
  FbReport rep;
  rep.level = tau;
  for (const auto& s : curve.segments) {
    FbSample smp;
    smp.point = {0.5 * (s.a.x + s.b.x), 0.5 * (s.a.y + s.b.y)};
    smp.statement_form = bilinear(statement, smp.point.x, smp.point.y) -
                         prm.lambda_penalty / (2.0 * prm.p);
    smp.proof_form =
        bilinear(proof, smp.point.x, smp.point.y) + prm.lambda_penalty;
    rep.samples.push_back(smp);
  }
  for (const auto& s : rep.samples) {
    rep.statement_mean += s.statement_form;
    rep.proof_mean += s.proof_form;
    rep.statement_sup = std::max(rep.statement_sup, std::abs(s.statement_form));
    rep.proof_sup = std::max(rep.proof_sup, std::abs(s.proof_form));
  }
  rep.statement_mean /= static_cast<double>(rep.samples.size());
  rep.proof_mean /= static_cast<double>(rep.samples.size());
  return rep;
}

}  // namespace hfb
