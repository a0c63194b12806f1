#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "hfb/errors.hpp"

namespace hfb {

enum class NodeClass : std::uint8_t { Interior, Band, Exterior };

/// Finite-difference stencil selector for one axis at one node.
/// Centered where both neighbors exist, second-order one-sided where a
/// deep enough run exists into the domain, first-order one-sided on thin
/// rim slivers.  ShiftedCentered covers the four on-circle pole nodes,
/// whose tangential neighbors are both exterior: the centered stencil is
/// evaluated one row/column inward (exact for affine fields, and for the
/// second derivative exact on constant-Hessian quadratics).
enum class FdPlan : std::uint8_t {
  None,
  Centered,
  Forward2,
  Backward2,
  Forward1,
  Backward1,
  ShiftedCentered,
};

enum class Axis : std::uint8_t { X, Y };

/// Uniform n x n grid on [-1,1]^2 masked against the closed unit disk.
///
/// Node (i,j) sits at (x_j, y_i) with x_j = 2j/(n-1) - 1; i is the row
/// (y coordinate) and j the column, row-major layout i*n + j.  A node is
/// exterior when x^2+y^2 > 1, boundary-band when it is not exterior but one
/// of its 8 neighbors is (array edges count as exterior), interior otherwise.
/// Quadrature weights are cell-clipped: full h^2 for cells entirely inside
/// the disk, 4x4-subsampled fraction for rim cells, 0 on exterior nodes.
///
/// Copies share immutable state, so fields can hold a GridSpec by value.
class GridSpec {
 public:
  /// Throws SizingError unless n is odd and >= 3.
  explicit GridSpec(int n);

  int n() const { return d_->n; }
  double h() const { return d_->h; }
  int size() const { return d_->n * d_->n; }

  double x(int j) const { return (2.0 * j) / (d_->n - 1) - 1.0; }
  double y(int i) const { return (2.0 * i) / (d_->n - 1) - 1.0; }
  int idx(int i, int j) const { return i * d_->n + j; }

  NodeClass node_class(int i, int j) const { return d_->cls[idx(i, j)]; }
  NodeClass node_class(int k) const { return d_->cls[k]; }
  bool exterior(int i, int j) const {
    return node_class(i, j) == NodeClass::Exterior;
  }
  bool interior(int i, int j) const {
    return node_class(i, j) == NodeClass::Interior;
  }

  /// Cell quadrature weight per node; zero on exterior nodes.
  const std::vector<double>& weights() const { return d_->weight; }

  /// Stencil plans, one per node, chosen once from the mask.
  FdPlan d1_plan(Axis a, int k) const {
    return (a == Axis::X ? d_->d1x : d_->d1y)[k];
  }
  FdPlan d2_plan(Axis a, int k) const {
    return (a == Axis::X ? d_->d2x : d_->d2y)[k];
  }

  int count(NodeClass c) const;

  /// Same underlying immutable state (cheap identity check).
  bool same(const GridSpec& other) const { return d_ == other.d_; }

 private:
  struct Data {
    int n = 0;
    double h = 0.0;
    std::vector<NodeClass> cls;
    std::vector<double> weight;
    std::vector<FdPlan> d1x, d1y, d2x, d2y;
  };
  std::shared_ptr<const Data> d_;
};

}  // namespace hfb
