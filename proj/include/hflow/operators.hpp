#pragma once

#include <Eigen/Sparse>

#include "hflow/graph_geometry.hpp"

namespace hflow {

using SpMat = Eigen::SparseMatrix<double>;

// Centered-difference derivative matrix along one axis, honoring the grid's
// periodic/pole ghost rules. `parity` is the pole parity of the operand
// component (fields produced by theta-derivatives flip parity).
SpMat deriv1_matrix(const ChartGrid& grid, int axis, PoleParity parity);
SpMat deriv2_matrix(const ChartGrid& grid, int axis, PoleParity parity);
// Mixed second derivative (4-point cross stencil), m = 2 grids.
SpMat deriv11_matrix(const ChartGrid& grid, PoleParity parity);

// Assembles the frozen-coefficient principal operator of the height flows,
//   A(rho) u = (1/beta) L_rho [ (beta/m) g^{ij}(rho) D2_ij u ],
// where D2 are the centered Hessian stencils and L_rho the discrete
// Laplace-Beltrami of g(rho). This is exactly the top-order part of the
// discrete right-hand side (same stencil composition), so the IMEX
// remainder rhs + A(rho) rho is genuinely lower order on the grid --
// including at the sawtooth modes an independent first-difference
// discretization of nabla^4 would miss. Principal symbol: |xi|^4_{g*(rho)}/m.
class PrincipalOperatorBuilder {
 public:
  explicit PrincipalOperatorBuilder(const ReferenceSurface& surface);

  SpMat assemble(const GraphGeometry& geom) const;

  const ReferenceSurface& surface() const { return *surf_; }

 private:
  const ReferenceSurface* surf_;
  int m_;
  SpMat d1_[2];   // first derivatives of a scalar operand
  SpMat d2_[2];   // pure second derivatives
  SpMat d11_;     // mixed second derivative (m = 2)
};

}  // namespace hflow
