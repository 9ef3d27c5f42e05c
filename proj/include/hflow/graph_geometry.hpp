#pragma once

#include <vector>

#include "hflow/parallel.hpp"
#include "hflow/reference_surface.hpp"

namespace hflow {

// Scalar height field rho on the chart grid of a reference surface.
// Admissible when sup|rho| < tubular radius.
struct HeightField {
  const ReferenceSurface* surface = nullptr;
  std::vector<double> values;

  HeightField() = default;
  HeightField(const ReferenceSurface& s, double constant = 0.0)
      : surface(&s), values(s.size(), constant) {}

  double sup() const;
  void require_admissible() const;  // throws AdmissibilityError
};

// All derived fields of the normal graph Gamma_rho at every node.
// Built in one pass from analytic reference data plus centered differences
// of rho; immutable snapshot once built.
struct GraphGeometry {
  const ReferenceSurface* surface = nullptr;
  int m = 2;

  std::vector<double> rho;                      // the height field this snapshot was built from
  std::vector<std::array<double, 2>> drho;      // chart gradient components d_i rho
  std::vector<Mat2> d2rho;                      // chart second derivatives
  std::vector<Mat2> m0;                         // (I - rho L)^{-1}, mixed components
  std::vector<std::array<double, 2>> a_up, a_lo;  // a(rho) vector / covector components
  std::vector<double> beta;                     // (1 + |a|^2)^{-1/2}
  std::vector<Mat2> grho, grho_inv;             // pull-back metric and algebraic inverse
  std::vector<double> detg_rho;
  std::vector<Vec3> psi;                        // embedded position Psi_rho
  std::vector<Vec3> nu_gamma;                   // unit normal of Gamma_rho
  std::vector<std::array<Vec3, 2>> tangent;     // d_j Psi_rho (algebraic)
  std::vector<Mat2> l_rho;                      // second fundamental form of Gamma_rho
  std::vector<Mat2> weingarten_rho;             // g^{ki}(rho) l_ij(rho)
  std::vector<double> mean_curv;                // H_rho (average-of-curvatures sign convention)
  std::vector<double> gauss_curv;               // K_rho (meaningful for m = 2)
  std::vector<Ten3> chr_rho;                    // Christoffel symbols of g(rho), [k][i][j]

  int size() const { return surface->size(); }
};

GraphGeometry build_graph_geometry(const ReferenceSurface& surface,
                                   const std::vector<double>& rho,
                                   Execution exec = Execution::Parallel);

inline GraphGeometry build_graph_geometry(const HeightField& rho,
                                          Execution exec = Execution::Parallel) {
  return build_graph_geometry(*rho.surface, rho.values, exec);
}

// Laplace-Beltrami of g(rho): g^{ij}(rho)(d_i d_j - Gamma^k_ij(rho) d_k) u.
std::vector<double> laplace_beltrami(const GraphGeometry& geom, const std::vector<double>& u,
                                     Execution exec = Execution::Parallel);

// Gauss curvature accessor; rejects m != 2.
const std::vector<double>& gauss_curvature(const GraphGeometry& geom);

}  // namespace hflow
