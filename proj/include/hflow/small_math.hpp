#pragma once

#include <array>
#include <cmath>

#include "hflow/errors.hpp"

namespace hflow {

using Vec3 = std::array<double, 3>;
using Mat2 = std::array<std::array<double, 2>, 2>;   // chart-frame m x m, m <= 2
using Ten3 = std::array<Mat2, 2>;                    // e.g. Christoffel [k][i][j]

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

inline Mat2 zero2() { return {{{0.0, 0.0}, {0.0, 0.0}}}; }

inline Mat2 identity2(int m) {
  Mat2 r = zero2();
  for (int i = 0; i < m; ++i) r[i][i] = 1.0;
  return r;
}

inline double det_m(int m, const Mat2& a) {
  if (m == 1) return a[0][0];
  return a[0][0] * a[1][1] - a[0][1] * a[1][0];
}

// Inverse of an m x m chart-frame matrix; throws when singular.
inline Mat2 inverse_m(int m, const Mat2& a, const char* context) {
  Mat2 r = zero2();
  double d = det_m(m, a);
  if (d == 0.0 || !std::isfinite(d))
    throw AdmissibilityError(std::string("singular matrix in ") + context);
  if (m == 1) {
    r[0][0] = 1.0 / d;
  } else {
    r[0][0] = a[1][1] / d;
    r[1][1] = a[0][0] / d;
    r[0][1] = -a[0][1] / d;
    r[1][0] = -a[1][0] / d;
  }
  return r;
}

inline Mat2 mul_m(int m, const Mat2& a, const Mat2& b) {
  Mat2 r = zero2();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

inline double trace_m(int m, const Mat2& a) {
  double t = 0.0;
  for (int i = 0; i < m; ++i) t += a[i][i];
  return t;
}

// Eigenvalues of an m x m matrix with real spectrum (products of symmetric
// matrices w.r.t. a metric, as for Weingarten maps).
inline std::array<double, 2> real_eigenvalues_m(int m, const Mat2& a) {
  if (m == 1) return {a[0][0], 0.0};
  double tr = a[0][0] + a[1][1];
  double dt = det_m(2, a);
  double disc = tr * tr / 4.0 - dt;
  double s = disc > 0.0 ? std::sqrt(disc) : 0.0;
  return {tr / 2.0 - s, tr / 2.0 + s};
}

}  // namespace hflow
