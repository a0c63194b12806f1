#pragma once

#include "hfb/field.hpp"

namespace hfb {

/// Compactly supported polynomial bump b((x - c)/R) with b(s) = (1 - |s|^2)^3
/// inside the unit disk and 0 outside.  C^2 across the support edge; all
/// derivatives below are closed-form, no numerical differentiation.
struct Bump {
  Vec2 center{};
  double radius = 1.0;
};

/// Fully symmetric third-derivative tensor in 2d.
struct SymTensor3 {
  double xxx = 0.0;
  double xxy = 0.0;
  double xyy = 0.0;
  double yyy = 0.0;
};

double bump_value(const Bump& b, double x, double y);
Vec2 bump_gradient(const Bump& b, double x, double y);
SymMat2 bump_hessian(const Bump& b, double x, double y);
SymTensor3 bump_third(const Bump& b, double x, double y);

}  // namespace hfb
