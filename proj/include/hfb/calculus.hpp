#pragma once

#include "hfb/field.hpp"

namespace hfb {

/// First derivative along one axis using the per-node stencil plan.
ScalarField apply_d1(const ScalarField& u, Axis a);
/// Second derivative along one axis.
ScalarField apply_d2(const ScalarField& u, Axis a);
/// Exact transposes of the same linear stencils (scatter form).
ScalarField apply_d1_transpose(const ScalarField& w, Axis a);
ScalarField apply_d2_transpose(const ScalarField& w, Axis a);

/// Centered first differences at interior nodes, one-sided at the band.
VecField gradient(const ScalarField& u);

/// Discrete Hessian: centered 5-point second differences and 4-corner cross
/// stencil at interior nodes, one-sided second-order stencils at the band.
/// The cross component is the composition d/dy(d/dx u).
/// Throws SizingError for n < 5.
SymMatField hessian(const ScalarField& u);

/// Transpose of the hessian operator under the full contraction pairing:
/// for the linear map H with <H u, W> := sum_k (W:Hu)_k (plain sum, cross
/// entries counted twice), returns HT W with <H u, W> = <u, HT W> exactly.
ScalarField hessian_transpose(const SymMatField& w);

/// Quadrature sum over non-exterior nodes with cut-cell weights.
double integrate(const ScalarField& f);

/// Plain (unweighted) euclidean dot product of the nodal vectors.
double dot(const ScalarField& a, const ScalarField& b);

}  // namespace hfb
