#include "hfb/grid.hpp"

#include <string>

namespace hfb {

namespace {

inline bool inside_disk(double x, double y) { return x * x + y * y <= 1.0; }

}  // namespace

GridSpec::GridSpec(int n) {
  if (n < 3 || n % 2 == 0)
    throw SizingError("grid size must be odd and >= 3, got " +
                      std::to_string(n));
  auto d = std::make_shared<Data>();
  d->n = n;
  d->h = 2.0 / (n - 1);
  const int nn = n * n;
  const double h = d->h;

  auto coord = [n](int k) { return (2.0 * k) / (n - 1) - 1.0; };

  d->cls.assign(nn, NodeClass::Exterior);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (inside_disk(coord(j), coord(i)))
        d->cls[i * n + j] = NodeClass::Interior;  // provisional

  // Band pass: non-exterior nodes with any of 8 neighbors exterior
  // (array edges count as exterior).
  auto ext = [&](int i, int j) {
    if (i < 0 || j < 0 || i >= n || j >= n) return true;
    return d->cls[i * n + j] == NodeClass::Exterior;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (d->cls[i * n + j] == NodeClass::Exterior) continue;
      bool touches = false;
      for (int di = -1; di <= 1 && !touches; ++di)
        for (int dj = -1; dj <= 1 && !touches; ++dj)
          if ((di || dj) && ext(i + di, j + dj)) touches = true;
      if (touches) d->cls[i * n + j] = NodeClass::Band;
    }

  // Cut-cell quadrature: cells fully inside the disk carry h^2, rim cells a
  // 4x4-subsampled fraction, exterior nodes nothing.
  d->weight.assign(nn, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (d->cls[i * n + j] == NodeClass::Exterior) continue;
      const double cx = coord(j), cy = coord(i);
      const double x0 = cx - 0.5 * h, y0 = cy - 0.5 * h;
      bool full = inside_disk(x0, y0) && inside_disk(x0 + h, y0) &&
                  inside_disk(x0, y0 + h) && inside_disk(x0 + h, y0 + h);
      if (full) {
        d->weight[i * n + j] = h * h;
      } else {
        int cnt = 0;
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b)
            if (inside_disk(x0 + (a + 0.5) * h / 4.0,
                            y0 + (b + 0.5) * h / 4.0))
              ++cnt;
        d->weight[i * n + j] = h * h * cnt / 16.0;
      }
    }

  // Stencil plans.  ok() = usable value at that node.
  auto ok = [&](int i, int j) { return !ext(i, j); };
  d->d1x.assign(nn, FdPlan::None);
  d->d1y.assign(nn, FdPlan::None);
  d->d2x.assign(nn, FdPlan::None);
  d->d2y.assign(nn, FdPlan::None);
  auto pick1 = [&](bool m1, bool p1, bool p2, bool m2, bool sh) {
    if (m1 && p1) return FdPlan::Centered;
    if (p1 && p2) return FdPlan::Forward2;
    if (m1 && m2) return FdPlan::Backward2;
    if (p1) return FdPlan::Forward1;
    if (m1) return FdPlan::Backward1;
    if (sh) return FdPlan::ShiftedCentered;
    return FdPlan::None;
  };
  auto pick2 = [&](bool m1, bool p1, bool p2, bool p3, bool m2, bool m3,
                   bool sh) {
    if (m1 && p1) return FdPlan::Centered;
    if (p1 && p2 && p3) return FdPlan::Forward2;
    if (m1 && m2 && m3) return FdPlan::Backward2;
    if (p1 && p2) return FdPlan::Forward1;
    if (m1 && m2) return FdPlan::Backward1;
    if (sh) return FdPlan::ShiftedCentered;
    return FdPlan::None;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int k = i * n + j;
      if (d->cls[k] == NodeClass::Exterior) continue;
      // Inward row/column for the pole fallback (sign convention shared
      // with the stencil application code).
      const int si = coord(i) > 0.0 ? -1 : 1;
      const int sj = coord(j) > 0.0 ? -1 : 1;
      const bool shx = ok(i + si, j - 1) && ok(i + si, j) && ok(i + si, j + 1);
      const bool shy = ok(i - 1, j + sj) && ok(i, j + sj) && ok(i + 1, j + sj);
      d->d1x[k] = pick1(ok(i, j - 1), ok(i, j + 1), ok(i, j + 2), ok(i, j - 2),
                        shx);
      d->d1y[k] = pick1(ok(i - 1, j), ok(i + 1, j), ok(i + 2, j), ok(i - 2, j),
                        shy);
      d->d2x[k] = pick2(ok(i, j - 1), ok(i, j + 1), ok(i, j + 2), ok(i, j + 3),
                        ok(i, j - 2), ok(i, j - 3), shx);
      d->d2y[k] = pick2(ok(i - 1, j), ok(i + 1, j), ok(i + 2, j), ok(i + 3, j),
                        ok(i - 2, j), ok(i - 3, j), shy);
    }

  d_ = std::move(d);
}

int GridSpec::count(NodeClass c) const {
  int out = 0;
  for (auto v : d_->cls)
    if (v == c) ++out;
  return out;
}

}  // namespace hfb
