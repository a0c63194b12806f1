#include "hfb/calculus.hpp"

#include <string>

namespace hfb {

namespace {

struct Tap {
  int off;
  double c;
};

// First-derivative taps, coefficients already divided by h.
int d1_taps(FdPlan p, double h, Tap t[3]) {
  switch (p) {
    case FdPlan::Centered:
      t[0] = {-1, -0.5 / h};
      t[1] = {1, 0.5 / h};
      return 2;
    case FdPlan::Forward2:
      t[0] = {0, -1.5 / h};
      t[1] = {1, 2.0 / h};
      t[2] = {2, -0.5 / h};
      return 3;
    case FdPlan::Backward2:
      t[0] = {0, 1.5 / h};
      t[1] = {-1, -2.0 / h};
      t[2] = {-2, 0.5 / h};
      return 3;
    case FdPlan::Forward1:
      t[0] = {0, -1.0 / h};
      t[1] = {1, 1.0 / h};
      return 2;
    case FdPlan::Backward1:
      t[0] = {0, 1.0 / h};
      t[1] = {-1, -1.0 / h};
      return 2;
    case FdPlan::None:
    case FdPlan::ShiftedCentered:  // resolved to Centered by the caller
      return 0;
  }
  return 0;
}

// Second-derivative taps, coefficients divided by h^2.
int d2_taps(FdPlan p, double h, Tap t[4]) {
  const double s = 1.0 / (h * h);
  switch (p) {
    case FdPlan::Centered:
      t[0] = {-1, s};
      t[1] = {0, -2.0 * s};
      t[2] = {1, s};
      return 3;
    case FdPlan::Forward2:
      t[0] = {0, 2.0 * s};
      t[1] = {1, -5.0 * s};
      t[2] = {2, 4.0 * s};
      t[3] = {3, -s};
      return 4;
    case FdPlan::Backward2:
      t[0] = {0, 2.0 * s};
      t[1] = {-1, -5.0 * s};
      t[2] = {-2, 4.0 * s};
      t[3] = {-3, -s};
      return 4;
    case FdPlan::Forward1:
      t[0] = {0, s};
      t[1] = {1, -2.0 * s};
      t[2] = {2, s};
      return 3;
    case FdPlan::Backward1:
      t[0] = {0, s};
      t[1] = {-1, -2.0 * s};
      t[2] = {-2, s};
      return 3;
    case FdPlan::None:
    case FdPlan::ShiftedCentered:  // resolved to Centered by the caller
      return 0;
  }
  return 0;
}

template <bool Second>
ScalarField apply(const ScalarField& u, Axis a, bool transpose) {
  const GridSpec& g = u.grid();
  const int n = g.n();
  const int stride = (a == Axis::X) ? 1 : n;
  ScalarField out(g);
  Tap t[4];
  for (int k = 0; k < g.size(); ++k) {
    if (g.node_class(k) == NodeClass::Exterior) continue;
    FdPlan p = Second ? g.d2_plan(a, k) : g.d1_plan(a, k);
    int m;
    int base = k;
    if (p == FdPlan::ShiftedCentered) {
      // Pole fallback: centered stencil one row/column inward.  The inward
      // sign matches the plan-selection convention in GridSpec.
      const int i = k / n, j = k - i * n;
      base += (a == Axis::X) ? ((g.y(i) > 0.0 ? -1 : 1) * n)
                             : (g.x(j) > 0.0 ? -1 : 1);
      m = Second ? d2_taps(FdPlan::Centered, g.h(), t)
                 : d1_taps(FdPlan::Centered, g.h(), t);
    } else {
      m = Second ? d2_taps(p, g.h(), t) : d1_taps(p, g.h(), t);
    }
    if (transpose) {
      const double w = u[k];
      if (w != 0.0)
        for (int q = 0; q < m; ++q) out[base + t[q].off * stride] += t[q].c * w;
    } else {
      double acc = 0.0;
      for (int q = 0; q < m; ++q) acc += t[q].c * u[base + t[q].off * stride];
      out[k] = acc;
    }
  }
  return out;
}

}  // namespace

ScalarField apply_d1(const ScalarField& u, Axis a) {
  return apply<false>(u, a, false);
}
ScalarField apply_d2(const ScalarField& u, Axis a) {
  return apply<true>(u, a, false);
}
ScalarField apply_d1_transpose(const ScalarField& w, Axis a) {
  return apply<false>(w, a, true);
}
ScalarField apply_d2_transpose(const ScalarField& w, Axis a) {
  return apply<true>(w, a, true);
}

VecField gradient(const ScalarField& u) {
  ScalarField dx = apply_d1(u, Axis::X);
  ScalarField dy = apply_d1(u, Axis::Y);
  VecField out(u.grid());
  for (int k = 0; k < out.size(); ++k) out[k] = {dx[k], dy[k]};
  return out;
}

SymMatField hessian(const ScalarField& u) {
  const GridSpec& g = u.grid();
  if (g.n() < 5)
    throw SizingError("hessian needs n >= 5, got " + std::to_string(g.n()));
  ScalarField dxx = apply_d2(u, Axis::X);
  ScalarField dyy = apply_d2(u, Axis::Y);
  ScalarField dxy = apply_d1(apply_d1(u, Axis::X), Axis::Y);
  SymMatField out(g);
  for (int k = 0; k < out.size(); ++k) out[k] = {dxx[k], dxy[k], dyy[k]};
  return out;
}

ScalarField hessian_transpose(const SymMatField& w) {
  const GridSpec& g = w.grid();
  ScalarField wxx(g), wyy(g), wxy2(g);
  for (int k = 0; k < w.size(); ++k) {
    wxx[k] = w[k].xx;
    wyy[k] = w[k].yy;
    wxy2[k] = 2.0 * w[k].xy;  // cross entry paired twice in the contraction
  }
  ScalarField out = apply_d2_transpose(wxx, Axis::X);
  ScalarField oyy = apply_d2_transpose(wyy, Axis::Y);
  ScalarField oxy = apply_d1_transpose(apply_d1_transpose(wxy2, Axis::Y), Axis::X);
  for (int k = 0; k < out.size(); ++k) out[k] += oyy[k] + oxy[k];
  return out;
}

double integrate(const ScalarField& f) {
  const std::vector<double>& w = f.grid().weights();
  double acc = 0.0;
  for (int k = 0; k < f.size(); ++k) acc += w[k] * f[k];
  return acc;
}

double dot(const ScalarField& a, const ScalarField& b) {
  double acc = 0.0;
  for (int k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

}  // namespace hfb
