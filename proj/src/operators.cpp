#include "hflow/operators.hpp"

#include <vector>

namespace hflow {

namespace {

using Triplet = Eigen::Triplet<double>;

void add_entry(std::vector<Triplet>& t, const ChartGrid& grid, int row, int di0, int di1,
               PoleParity parity, double value) {
  int i0, i1;
  grid.unflat(row, i0, i1);
  GhostRef r = grid.resolve(i0 + di0, i1 + di1, parity);
  t.emplace_back(row, r.index, r.sign * value);
}

}  // namespace

SpMat deriv1_matrix(const ChartGrid& grid, int axis, PoleParity parity) {
  int n = grid.size();
  double h = grid.axis[axis].spacing;
  int e0 = axis == 0 ? 1 : 0, e1 = axis == 1 ? 1 : 0;
  std::vector<Triplet> t;
  t.reserve(2 * n);
  for (int row = 0; row < n; ++row) {
    add_entry(t, grid, row, e0, e1, parity, 0.5 / h);
    add_entry(t, grid, row, -e0, -e1, parity, -0.5 / h);
  }
  SpMat a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

SpMat deriv2_matrix(const ChartGrid& grid, int axis, PoleParity parity) {
  int n = grid.size();
  double h = grid.axis[axis].spacing;
  int e0 = axis == 0 ? 1 : 0, e1 = axis == 1 ? 1 : 0;
  std::vector<Triplet> t;
  t.reserve(3 * n);
  for (int row = 0; row < n; ++row) {
    add_entry(t, grid, row, e0, e1, parity, 1.0 / (h * h));
    add_entry(t, grid, row, 0, 0, parity, -2.0 / (h * h));
    add_entry(t, grid, row, -e0, -e1, parity, 1.0 / (h * h));
  }
  SpMat a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

SpMat deriv11_matrix(const ChartGrid& grid, PoleParity parity) {
  int n = grid.size();
  double w = 1.0 / (4.0 * grid.axis[0].spacing * grid.axis[1].spacing);
  std::vector<Triplet> t;
  t.reserve(4 * n);
  for (int row = 0; row < n; ++row) {
    add_entry(t, grid, row, +1, +1, parity, w);
    add_entry(t, grid, row, +1, -1, parity, -w);
    add_entry(t, grid, row, -1, +1, parity, -w);
    add_entry(t, grid, row, -1, -1, parity, w);
  }
  SpMat a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

PrincipalOperatorBuilder::PrincipalOperatorBuilder(const ReferenceSurface& s)
    : surf_(&s), m_(s.m) {
  for (int ax = 0; ax < m_; ++ax) {
    d1_[ax] = deriv1_matrix(s.grid, ax, PoleParity::Even);
    d2_[ax] = deriv2_matrix(s.grid, ax, PoleParity::Even);
  }
  if (m_ == 2) d11_ = deriv11_matrix(s.grid, PoleParity::Even);
}

SpMat PrincipalOperatorBuilder::assemble(const GraphGeometry& geo) const {
  int n = surf_->size(), m = m_;

  auto diag = [&](auto&& per_node) {
    Eigen::VectorXd v(n);
    for (int idx = 0; idx < n; ++idx) v[idx] = per_node(idx);
    return SpMat(v.asDiagonal());
  };

  // Inner factor: the d2-rho dependence of H_rho,
  //   B u = (beta/m) g^{ij}(rho) D2_ij u.
  SpMat inner = diag([&](int i) { return geo.beta[i] * geo.grho_inv[i][0][0] / m; }) * d2_[0];
  if (m == 2) {
    inner += diag([&](int i) { return geo.beta[i] * geo.grho_inv[i][1][1] / m; }) * d2_[1];
    inner += diag([&](int i) { return 2.0 * geo.beta[i] * geo.grho_inv[i][0][1] / m; }) * d11_;
  }

  // Outer factor: (1/beta) times the discrete Laplace-Beltrami of g(rho).
  SpMat outer = diag([&](int i) { return geo.grho_inv[i][0][0] / geo.beta[i]; }) * d2_[0];
  if (m == 2) {
    outer += diag([&](int i) { return geo.grho_inv[i][1][1] / geo.beta[i]; }) * d2_[1];
    outer += diag([&](int i) { return 2.0 * geo.grho_inv[i][0][1] / geo.beta[i]; }) * d11_;
  }
  for (int c = 0; c < m; ++c) {
    outer -= diag([&](int i) {
               double v = 0.0;
               for (int k = 0; k < m; ++k)
                 for (int l = 0; l < m; ++l)
                   v += geo.grho_inv[i][k][l] * geo.chr_rho[i][c][k][l];
               return v / geo.beta[i];
             }) *
             d1_[c];
  }

  SpMat a = outer * inner;
  a.makeCompressed();
  return a;
}

}  // namespace hflow
