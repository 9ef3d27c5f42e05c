#include "hflow/grid.hpp"

namespace hflow {

ChartGrid::ChartGrid(int m_, Axis a0, Axis a1) : m(m_) {
  axis[0] = a0;
  axis[1] = a1;
  if (m == 1) axis[1] = Axis{1, 1.0, 0.0, AxisKind::Periodic};
  for (int ax = 0; ax < m; ++ax) {
    if (axis[ax].n < 8) throw ConstructionError("grid axis needs at least 8 nodes");
    if (!(axis[ax].spacing > 0.0)) throw ConstructionError("grid spacing must be positive");
  }
  if (axis[0].kind == AxisKind::Pole) {
    if (m != 2) throw ConstructionError("pole axis requires a 2d chart");
    if (axis[1].kind != AxisKind::Periodic)
      throw ConstructionError("pole axis requires the other axis to be periodic");
    if (axis[1].n % 2 != 0)
      throw ConstructionError("pole rule requires an even node count on the periodic axis");
  }
  if (axis[1].kind == AxisKind::Pole) throw ConstructionError("pole axis must be axis 0");
}

GhostRef ChartGrid::resolve(int i0, int i1, PoleParity parity) const {
  double sign = 1.0;
  const Axis& a0 = axis[0];
  if (a0.kind == AxisKind::Pole) {
    while (i0 < 0 || i0 >= a0.n) {
      if (i0 < 0)
        i0 = -1 - i0;
      else
        i0 = 2 * a0.n - 1 - i0;
      i1 += axis[1].n / 2;
      if (parity == PoleParity::Odd) sign = -sign;
    }
  } else {
    i0 = wrap_index(i0, a0.n);
  }
  i1 = (m > 1) ? wrap_index(i1, axis[1].n) : 0;
  return {flat(i0, i1), sign};
}

double ChartGrid::d1(const std::vector<double>& u, int i0, int i1, int ax) const {
  int e0 = ax == 0 ? 1 : 0, e1 = ax == 1 ? 1 : 0;
  return (fetch(u, i0 + e0, i1 + e1) - fetch(u, i0 - e0, i1 - e1)) / (2.0 * axis[ax].spacing);
}

double ChartGrid::d2(const std::vector<double>& u, int i0, int i1, int ax) const {
  int e0 = ax == 0 ? 1 : 0, e1 = ax == 1 ? 1 : 0;
  double h = axis[ax].spacing;
  return (fetch(u, i0 + e0, i1 + e1) - 2.0 * u[flat(i0, i1)] + fetch(u, i0 - e0, i1 - e1)) /
         (h * h);
}

double ChartGrid::d11(const std::vector<double>& u, int i0, int i1) const {
  double h0 = axis[0].spacing, h1 = axis[1].spacing;
  return (fetch(u, i0 + 1, i1 + 1) - fetch(u, i0 + 1, i1 - 1) - fetch(u, i0 - 1, i1 + 1) +
          fetch(u, i0 - 1, i1 - 1)) /
         (4.0 * h0 * h1);
}

}  // namespace hflow
