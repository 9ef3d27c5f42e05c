#include "hflow/graph_geometry.hpp"

#include <atomic>
#include <cmath>

namespace hflow {

double HeightField::sup() const {
  double s = 0.0;
  for (double v : values) s = std::max(s, std::abs(v));
  return s;
}

void HeightField::require_admissible() const {
  if (sup() >= surface->tubular_radius)
    throw AdmissibilityError("height field reaches the tubular radius (sup|rho| >= a)");
}

GraphGeometry build_graph_geometry(const ReferenceSurface& s, const std::vector<double>& rho,
                                   Execution exec) {
  if (static_cast<int>(rho.size()) != s.size())
    throw ConstructionError("height field size does not match the surface grid");
  {
    double sup = 0.0;
    for (double v : rho) sup = std::max(sup, std::abs(v));
    if (sup >= s.tubular_radius)
      throw AdmissibilityError("height field reaches the tubular radius (sup|rho| >= a)");
  }

  GraphGeometry geo;
  geo.surface = &s;
  geo.m = s.m;
  int n = s.size(), m = s.m, n1 = s.grid.axis[1].n;
  geo.rho = rho;
  geo.drho.resize(n);
  geo.d2rho.resize(n);
  geo.m0.resize(n);
  geo.a_up.resize(n);
  geo.a_lo.resize(n);
  geo.beta.resize(n);
  geo.grho.resize(n);
  geo.grho_inv.resize(n);
  geo.detg_rho.resize(n);
  geo.psi.resize(n);
  geo.nu_gamma.resize(n);
  geo.tangent.resize(n);
  geo.l_rho.resize(n);
  geo.weingarten_rho.resize(n);
  geo.mean_curv.resize(n);
  geo.gauss_curv.resize(n, 0.0);
  geo.chr_rho.resize(n, Ten3{zero2(), zero2()});

  std::atomic<bool> degenerate{false};

  for_each_node(n, exec, [&](int idx) {
    int i0 = idx / n1, i1 = idx % n1;
    double r = rho[idx];

    std::array<double, 2> dr = {0.0, 0.0};
    Mat2 d2r = zero2();
    for (int ax = 0; ax < m; ++ax) {
      dr[ax] = s.grid.d1(rho, i0, i1, ax);
      d2r[ax][ax] = s.grid.d2(rho, i0, i1, ax);
    }
    if (m == 2) d2r[0][1] = d2r[1][0] = s.grid.d11(rho, i0, i1);
    geo.drho[idx] = dr;
    geo.d2rho[idx] = d2r;

    // Shape factors: M0 = (I - rho L)^{-1}, a = M0 grad rho, beta.
    Mat2 S = zero2();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) S[i][j] = (i == j ? 1.0 : 0.0) - r * s.l_mix[idx][i][j];
    Mat2 M0 = inverse_m(m, S, "I - rho*L (tubular regime left)");
    geo.m0[idx] = M0;

    std::array<double, 2> grad_up = {0.0, 0.0};
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) grad_up[i] += s.ginv[idx][i][j] * dr[j];
    std::array<double, 2> aup = {0.0, 0.0};
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) aup[i] += M0[i][j] * grad_up[j];
    std::array<double, 2> alo = {0.0, 0.0};
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) alo[i] += s.g[idx][i][j] * aup[j];
    double a2 = 0.0;
    for (int i = 0; i < m; ++i) a2 += alo[i] * aup[i];
    double beta = 1.0 / std::sqrt(1.0 + a2);
    geo.a_up[idx] = aup;
    geo.a_lo[idx] = alo;
    geo.beta[idx] = beta;

    // Pull-back metric g_ij(rho) = g_ij - 2 rho l_ij + rho^2 l^r_i l_jr + d_i rho d_j rho.
    Mat2 gr = zero2();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double ll = 0.0;
        for (int k = 0; k < m; ++k) ll += s.l_mix[idx][k][i] * s.l_lo[idx][j][k];
        gr[i][j] = s.g[idx][i][j] - 2.0 * r * s.l_lo[idx][i][j] + r * r * ll + dr[i] * dr[j];
      }
    geo.grho[idx] = gr;
    double dg = det_m(m, gr);
    geo.detg_rho[idx] = dg;
    if (!(dg > 0.0)) degenerate.store(true);

    // Cotangent metric from the closed-form inverse
    // K^{-1} = M0 [I - beta^2 a (x) a] M0, then raised with g^{-1}.
    Mat2 mid = zero2();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) mid[i][j] = (i == j ? 1.0 : 0.0) - beta * beta * aup[i] * alo[j];
    Mat2 nmat = mul_m(m, M0, mul_m(m, mid, M0));
    Mat2 gri = mul_m(m, nmat, s.ginv[idx]);
    // Symmetry holds algebraically; enforce it against roundoff.
    if (m == 2) {
      double off = 0.5 * (gri[0][1] + gri[1][0]);
      gri[0][1] = gri[1][0] = off;
    }
    geo.grho_inv[idx] = gri;

    // Embedding and its algebraic tangents/normal.
    geo.psi[idx] = s.pos[idx] + r * s.nu[idx];
    for (int j = 0; j < m; ++j) {
      Vec3 t = dr[j] * s.nu[idx];
      for (int k = 0; k < m; ++k) t = t + S[k][j] * s.tau[idx][k];
      geo.tangent[idx][j] = t;
    }
    Vec3 ng = s.nu[idx];
    for (int k = 0; k < m; ++k) ng = ng - aup[k] * s.tau[idx][k];
    geo.nu_gamma[idx] = beta * ng;

    // Second fundamental form of Gamma_rho, from the Gauss formula applied to
    // the algebraic tangent frame (only rho and the stored analytic dl are
    // differenced; exact for the concentric family).
    Mat2 lr = zero2();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double normal_part = d2r[i][j];
        for (int k = 0; k < m; ++k) normal_part += S[k][j] * s.l_lo[idx][i][k];
        double tangential = 0.0;
        for (int k = 0; k < m; ++k) {
          double dS = -dr[i] * s.l_mix[idx][k][j] - r * s.dl_mix[idx][i][k][j];
          double chr = 0.0;
          for (int l = 0; l < m; ++l) chr += S[l][j] * s.christoffel[idx][k][i][l];
          tangential += alo[k] * (dS + chr - dr[j] * s.l_mix[idx][k][i]);
        }
        lr[i][j] = beta * (normal_part - tangential);
      }
    if (m == 2) {
      double off = 0.5 * (lr[0][1] + lr[1][0]);
      lr[0][1] = lr[1][0] = off;
    }
    geo.l_rho[idx] = lr;

    Mat2 w = mul_m(m, gri, lr);
    geo.weingarten_rho[idx] = w;
    geo.mean_curv[idx] = trace_m(m, w) / m;
    if (m == 2) geo.gauss_curv[idx] = det_m(2, w);
  });

  if (degenerate.load())
    throw AdmissibilityError("pull-back metric lost positivity (surface left the tubular regime)");

  // Second pass: Christoffel symbols of g(rho) from parity-aware centered
  // differences of the metric field.
  std::array<std::vector<double>, 4> gcomp;
  for (auto& v : gcomp) v.resize(n);
  for (int idx = 0; idx < n; ++idx)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) gcomp[2 * i + j][idx] = geo.grho[idx][i][j];

  for_each_node(n, exec, [&](int idx) {
    int i0 = idx / n1, i1 = idx % n1;
    auto d_g = [&](int ax, int i, int j) {
      PoleParity par = (((i == 0) + (j == 0)) % 2 == 1) ? PoleParity::Odd : PoleParity::Even;
      int e0 = ax == 0 ? 1 : 0, e1 = ax == 1 ? 1 : 0;
      const std::vector<double>& u = gcomp[2 * i + j];
      return (s.grid.fetch(u, i0 + e0, i1 + e1, par) - s.grid.fetch(u, i0 - e0, i1 - e1, par)) /
             (2.0 * s.grid.axis[ax].spacing);
    };
    Ten3 chr{zero2(), zero2()};
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
          double v = 0.0;
          for (int l = 0; l < m; ++l)
            v += 0.5 * geo.grho_inv[idx][k][l] * (d_g(i, j, l) + d_g(j, i, l) - d_g(l, i, j));
          chr[k][i][j] = chr[k][j][i] = v;
        }
    geo.chr_rho[idx] = chr;
  });

  return geo;
}

std::vector<double> laplace_beltrami(const GraphGeometry& geo, const std::vector<double>& u,
                                     Execution exec) {
  const ReferenceSurface& s = *geo.surface;
  int n = s.size(), m = s.m, n1 = s.grid.axis[1].n;
  if (static_cast<int>(u.size()) != n)
    throw ConstructionError("laplace_beltrami: field size does not match the grid");
  std::vector<double> out(n);
  for_each_node(n, exec, [&](int idx) {
    int i0 = idx / n1, i1 = idx % n1;
    Mat2 d2u = zero2();
    std::array<double, 2> du = {0.0, 0.0};
    for (int ax = 0; ax < m; ++ax) {
      du[ax] = s.grid.d1(u, i0, i1, ax);
      d2u[ax][ax] = s.grid.d2(u, i0, i1, ax);
    }
    if (m == 2) d2u[0][1] = d2u[1][0] = s.grid.d11(u, i0, i1);
    double v = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double t = d2u[i][j];
        for (int k = 0; k < m; ++k) t -= geo.chr_rho[idx][k][i][j] * du[k];
        v += geo.grho_inv[idx][i][j] * t;
      }
    out[idx] = v;
  });
  return out;
}

const std::vector<double>& gauss_curvature(const GraphGeometry& geom) {
  if (geom.m != 2)
    throw UnsupportedDimensionError("Gauss curvature is defined for m = 2 hypersurfaces only");
  return geom.gauss_curv;
}

}  // namespace hflow
