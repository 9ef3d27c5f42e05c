#include "hflow/observables.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace hflow {

SphereFit sphere_fit(std::span<const Vec3> points, int dim) {
  int n = static_cast<int>(points.size());
  if (dim != 2 && dim != 3) throw ConstructionError("sphere_fit: dim must be 2 or 3");
  if (n < dim + 2) throw ConstructionError("sphere_fit: not enough points");

  // |x|^2 = 2 c.x + (R^2 - |c|^2): linear in (c, R^2 - |c|^2).
  Eigen::MatrixXd A(n, dim + 1);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) {
      A(i, d) = 2.0 * points[i][d];
      s += points[i][d] * points[i][d];
    }
    A(i, dim) = 1.0;
    b[i] = s;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-10);
  if (qr.rank() < dim + 1)
    throw ConstructionError("sphere_fit: degenerate point set");
  Eigen::VectorXd sol = qr.solve(b);

  SphereFit fit;
  double c2 = 0.0;
  for (int d = 0; d < dim; ++d) {
    fit.center[d] = sol[d];
    c2 += sol[d] * sol[d];
  }
  double r2 = sol[dim] + c2;
  if (!(r2 > 0.0)) throw ConstructionError("sphere_fit: degenerate point set");
  fit.radius = std::sqrt(r2);

  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    double d2 = 0.0;
    for (int d = 0; d < dim; ++d) {
      double v = points[i][d] - fit.center[d];
      d2 += v * v;
    }
    double e = std::sqrt(d2) - fit.radius;
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

SphereFit cylinder_cross_section_fit(const GraphGeometry& geom) {
  const ReferenceSurface& s = *geom.surface;
  if (s.spec.kind != SurfaceKindTag::Cylinder)
    throw ConstructionError("cylinder_cross_section_fit requires a cylinder reference");
  int n0 = s.grid.axis[0].n, n1 = s.grid.axis[1].n;
  SphereFit out;
  std::vector<Vec3> ring(n1);
  double cx = 0.0, cy = 0.0, cz = 0.0, rsum = 0.0;
  for (int i0 = 0; i0 < n0; ++i0) {
    for (int i1 = 0; i1 < n1; ++i1) {
      const Vec3& p = geom.psi[i0 * n1 + i1];
      ring[i1] = {p[1], p[2], 0.0};
      cx += p[0];
    }
    SphereFit f = sphere_fit(ring, 2);
    cy += f.center[0];
    cz += f.center[1];
    rsum += f.radius;
    out.residual = std::max(out.residual, f.residual);
  }
  out.center = {cx / (n0 * n1), cy / n0, cz / n0};
  out.radius = rsum / n0;
  return out;
}

namespace {

double cell_weight(const ReferenceSurface& s) {
  double w = s.grid.axis[0].spacing;
  if (s.m == 2) w *= s.grid.axis[1].spacing;
  return w;
}

}  // namespace

double surface_area(const GraphGeometry& geom) {
  double w = cell_weight(*geom.surface);
  double a = 0.0;
  for (int i = 0; i < geom.size(); ++i) a += std::sqrt(geom.detg_rho[i]);
  return a * w;
}

double enclosed_volume(const GraphGeometry& geom) {
  const ReferenceSurface& s = *geom.surface;
  if (!s.closed)
    throw ConstructionError("enclosed volume requested on a non-closed reference surface");
  double w = cell_weight(s);
  double v = 0.0;
  if (s.spec.kind == SurfaceKindTag::Cylinder) {
    // One axial period has open ends; flux of (0, y, z)/2 (unit divergence,
    // no axial component) makes the missing caps contribute nothing.
    for (int i = 0; i < geom.size(); ++i)
      v += 0.5 *
           (geom.psi[i][1] * geom.nu_gamma[i][1] + geom.psi[i][2] * geom.nu_gamma[i][2]) *
           std::sqrt(geom.detg_rho[i]);
    return v * w;
  }
  for (int i = 0; i < geom.size(); ++i)
    v += dot(geom.psi[i], geom.nu_gamma[i]) * std::sqrt(geom.detg_rho[i]);
  return v * w / (s.m + 1);
}

double willmore_energy(const GraphGeometry& geom) {
  double w = cell_weight(*geom.surface);
  double e = 0.0;
  for (int i = 0; i < geom.size(); ++i)
    e += geom.mean_curv[i] * geom.mean_curv[i] * std::sqrt(geom.detg_rho[i]);
  return e * w;
}

ObservableRecord measure(const GraphGeometry& geom, double t, double alpha) {
  const ReferenceSurface& s = *geom.surface;
  int n = geom.size(), m = s.m, n1 = s.grid.axis[1].n;

  ObservableRecord rec;
  rec.t = t;
  rec.area = surface_area(geom);
  rec.volume = s.closed ? enclosed_volume(geom) : std::numeric_limits<double>::quiet_NaN();
  rec.willmore_energy = willmore_energy(geom);

  std::vector<Vec3> grad(n);  // ambient gradient of rho in the reference metric
  for (int idx = 0; idx < n; ++idx) {
    rec.sup_rho = std::max(rec.sup_rho, std::abs(geom.rho[idx]));
    double g2 = 0.0;
    Vec3 gv = {0.0, 0.0, 0.0};
    for (int i = 0; i < m; ++i) {
      double up = 0.0;
      for (int j = 0; j < m; ++j) up += s.ginv[idx][i][j] * geom.drho[idx][j];
      g2 += up * geom.drho[idx][i];
      gv = gv + up * s.tau[idx][i];
    }
    rec.sup_grad_rho = std::max(rec.sup_grad_rho, std::sqrt(std::max(0.0, g2)));
    grad[idx] = gv;
  }

  // Discrete Hoelder seminorm of the gradient over pairs within a two-cell
  // stencil (forward half only, so each pair is visited once).
  for (int idx = 0; idx < n; ++idx) {
    int i0 = idx / n1, i1 = idx % n1;
    for (int d0 = 0; d0 <= 2; ++d0)
      for (int d1 = (d0 == 0 ? 1 : -2); d1 <= 2; ++d1) {
        if (m == 1 && d1 != 0) continue;
        GhostRef q = s.grid.resolve(i0 + d0, i1 + d1);
        if (q.index == idx) continue;
        double dist = norm(s.pos[q.index] - s.pos[idx]);
        if (dist < 1e-14) continue;
        double dg = norm(grad[q.index] - grad[idx]);
        rec.holder_seminorm = std::max(rec.holder_seminorm, dg / std::pow(dist, alpha));
      }
  }

  try {
    if (s.spec.kind == SurfaceKindTag::Cylinder)
      rec.fit = cylinder_cross_section_fit(geom);
    else
      rec.fit = sphere_fit(geom.psi, m == 1 ? 2 : 3);
  } catch (const ConstructionError&) {
    // Degenerate cloud (e.g. a flat graph): report no fit rather than fail.
    rec.fit.radius = std::numeric_limits<double>::quiet_NaN();
    rec.fit.residual = std::numeric_limits<double>::quiet_NaN();
  }
  return rec;
}

DecayFit decay_fit(std::span<const double> t, std::span<const double> value) {
  int n = static_cast<int>(t.size());
  if (n != static_cast<int>(value.size()))
    throw ConstructionError("decay_fit: series lengths differ");
  if (n < 10) throw ConstructionError("decay_fit: need at least 10 samples");

  double st = 0.0, sy = 0.0;
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) {
    if (!(value[i] > 0.0)) throw ConstructionError("decay_fit: values must be positive");
    y[i] = std::log(value[i]);
    st += t[i];
    sy += y[i];
  }
  double tbar = st / n, ybar = sy / n;
  double stt = 0.0, sty = 0.0;
  for (int i = 0; i < n; ++i) {
    stt += (t[i] - tbar) * (t[i] - tbar);
    sty += (t[i] - tbar) * (y[i] - ybar);
  }
  if (!(stt > 0.0)) throw ConstructionError("decay_fit: degenerate time samples");
  double slope = sty / stt;

  double ss_res = 0.0, ss_tot = 0.0;
  for (int i = 0; i < n; ++i) {
    double pred = ybar + slope * (t[i] - tbar);
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  DecayFit fit;
  fit.rate = -slope;
  // A constant series has ss_tot at round-off scale; call that a perfect
  // zero-rate fit.
  double floor = 1e-20 * n * (1.0 + ybar * ybar);
  if (ss_tot > floor) {
    fit.r_squared = 1.0 - ss_res / ss_tot;
  } else {
    fit.rate = 0.0;
    fit.r_squared = 1.0;
  }
  return fit;
}

}  // namespace hflow
