#pragma once

#include <cmath>
#include <vector>

#include "hfb/grid.hpp"

namespace hfb {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double norm(const Vec2& v) { return std::sqrt(v.x * v.x + v.y * v.y); }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

/// Symmetric 2x2 matrix, single stored cross component.
struct SymMat2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
};

/// Squared Frobenius norm; the cross entry counts twice.
inline double frob2(const SymMat2& m) {
  return m.xx * m.xx + 2.0 * m.xy * m.xy + m.yy * m.yy;
}
inline double frob(const SymMat2& m) { return std::sqrt(frob2(m)); }

/// Full contraction A:B = sum_ij A_ij B_ij.
inline double contract(const SymMat2& a, const SymMat2& b) {
  return a.xx * b.xx + 2.0 * a.xy * b.xy + a.yy * b.yy;
}

inline SymMat2 operator+(const SymMat2& a, const SymMat2& b) {
  return {a.xx + b.xx, a.xy + b.xy, a.yy + b.yy};
}
inline SymMat2 operator-(const SymMat2& a, const SymMat2& b) {
  return {a.xx - b.xx, a.xy - b.xy, a.yy - b.yy};
}
inline SymMat2 operator*(double t, const SymMat2& a) {
  return {t * a.xx, t * a.xy, t * a.yy};
}

/// One real per node; exterior entries are kept at 0 by every operation.
class ScalarField {
 public:
  explicit ScalarField(GridSpec grid)
      : grid_(std::move(grid)), v_(grid_.size(), 0.0) {}

  template <class F>
  static ScalarField from_function(const GridSpec& g, F&& f) {
    ScalarField out(g);
    const int n = g.n();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!g.exterior(i, j)) out.v_[g.idx(i, j)] = f(g.x(j), g.y(i));
    return out;
  }

  const GridSpec& grid() const { return grid_; }
  double& operator[](int k) { return v_[k]; }
  double operator[](int k) const { return v_[k]; }
  double& at(int i, int j) { return v_[grid_.idx(i, j)]; }
  double at(int i, int j) const { return v_[grid_.idx(i, j)]; }
  const std::vector<double>& values() const { return v_; }
  std::vector<double>& values() { return v_; }
  int size() const { return static_cast<int>(v_.size()); }

  /// Force exterior entries back to 0 (after bulk writes).
  void clamp_exterior() {
    for (int k = 0; k < size(); ++k)
      if (grid_.node_class(k) == NodeClass::Exterior) v_[k] = 0.0;
  }

 private:
  GridSpec grid_;
  std::vector<double> v_;
};

class VecField {
 public:
  explicit VecField(GridSpec grid)
      : grid_(std::move(grid)), v_(grid_.size()) {}

  const GridSpec& grid() const { return grid_; }
  Vec2& operator[](int k) { return v_[k]; }
  const Vec2& operator[](int k) const { return v_[k]; }
  int size() const { return static_cast<int>(v_.size()); }

 private:
  GridSpec grid_;
  std::vector<Vec2> v_;
};

class SymMatField {
 public:
  explicit SymMatField(GridSpec grid)
      : grid_(std::move(grid)), v_(grid_.size()) {}

  const GridSpec& grid() const { return grid_; }
  SymMat2& operator[](int k) { return v_[k]; }
  const SymMat2& operator[](int k) const { return v_[k]; }
  int size() const { return static_cast<int>(v_.size()); }

 private:
  GridSpec grid_;
  std::vector<SymMat2> v_;
};

}  // namespace hfb
