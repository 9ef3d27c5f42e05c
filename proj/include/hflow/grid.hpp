#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hflow/errors.hpp"

namespace hflow {

// How ghost-value access behaves past an axis endpoint.
//  Periodic: index wraps.
//  Pole: the axis terminates at coordinate poles (sphere latitude); a fetch
//        past the pole reflects the index and shifts the other (periodic)
//        axis by half its period. Chart tensor components with an odd number
//        of indices along the pole axis pick up a sign under the reflection.
enum class AxisKind { Periodic, Pole };

struct Axis {
  int n = 1;
  double spacing = 0.0;
  double origin = 0.0;
  AxisKind kind = AxisKind::Periodic;
};

// Sign parity of a chart tensor component under reflection across a pole:
// (-1)^(number of pole-axis indices).
enum class PoleParity : std::uint8_t { Even, Odd };

struct GhostRef {
  int index;     // flat node index
  double sign;   // +1 or -1 (only -1 for odd-parity components across a pole)
};

struct ChartGrid {
  int m = 2;  // chart dimension, 1 or 2
  std::array<Axis, 2> axis;

  ChartGrid() = default;
  ChartGrid(int m_, Axis a0, Axis a1 = Axis{});

  int size() const { return axis[0].n * axis[1].n; }
  int flat(int i0, int i1) const { return i0 * axis[1].n + i1; }
  void unflat(int idx, int& i0, int& i1) const {
    i0 = idx / axis[1].n;
    i1 = idx % axis[1].n;
  }
  double coord(int ax, int i) const { return axis[ax].origin + i * axis[ax].spacing; }

  // Resolve a possibly out-of-range logical index pair to a real node,
  // applying the wrap/pole rules. `parity` matters only across a pole.
  GhostRef resolve(int i0, int i1, PoleParity parity = PoleParity::Even) const;

  double fetch(const std::vector<double>& u, int i0, int i1,
               PoleParity parity = PoleParity::Even) const {
    GhostRef r = resolve(i0, i1, parity);
    return r.sign * u[r.index];
  }

  // Centered first/second/mixed differences of a scalar grid function.
  double d1(const std::vector<double>& u, int i0, int i1, int ax) const;
  double d2(const std::vector<double>& u, int i0, int i1, int ax) const;
  double d11(const std::vector<double>& u, int i0, int i1) const;  // mixed, m = 2
};

inline int wrap_index(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

}  // namespace hflow
