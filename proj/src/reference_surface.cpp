#include "hflow/reference_surface.hpp"

#include <cmath>

namespace hflow {

std::string to_string(SurfaceKindTag k) {
  switch (k) {
    case SurfaceKindTag::Circle: return "circle";
    case SurfaceKindTag::Sphere: return "sphere";
    case SurfaceKindTag::Cylinder: return "cylinder";
    case SurfaceKindTag::Torus: return "torus";
    case SurfaceKindTag::Graph: return "graph";
  }
  return "?";
}

namespace {

void validate(const SurfaceSpec& spec) {
  switch (spec.kind) {
    case SurfaceKindTag::Circle:
    case SurfaceKindTag::Sphere:
      if (!(spec.radius > 0.0)) throw ConstructionError("radius must be positive");
      break;
    case SurfaceKindTag::Cylinder:
      if (!(spec.radius > 0.0)) throw ConstructionError("radius must be positive");
      if (!(spec.length > 0.0)) throw ConstructionError("cylinder length must be positive");
      break;
    case SurfaceKindTag::Torus:
      if (!(spec.radius > 0.0)) throw ConstructionError("torus tube radius must be positive");
      if (!(spec.ring_radius > spec.radius))
        throw ConstructionError("torus requires 0 < tube radius < ring radius");
      break;
    case SurfaceKindTag::Graph:
      if (spec.graph_dim != 1 && spec.graph_dim != 2)
        throw ConstructionError("graph dimension must be 1 or 2");
      for (int ax = 0; ax < spec.graph_dim; ++ax)
        if (!(spec.box[ax] > 0.0)) throw ConstructionError("graph box lengths must be positive");
      if (!(spec.graph_radius_cap > 0.0))
        throw ConstructionError("graph radius cap must be positive");
      break;
  }
}

void allocate(ReferenceSurface& s) {
  int n = s.grid.size();
  s.pos.resize(n);
  s.nu.resize(n);
  s.tau.resize(n);
  s.g.resize(n);
  s.ginv.resize(n);
  s.detg.resize(n);
  s.l_lo.resize(n);
  s.l_mix.resize(n);
  s.christoffel.resize(n, Ten3{zero2(), zero2()});
  s.dl_mix.resize(n, Ten3{zero2(), zero2()});
  s.kappa.resize(n);
}

void fill_circle(ReferenceSurface& s, Execution exec) {
  double r = s.spec.radius;
  for_each_node(s.size(), exec, [&](int idx) {
    double phi = s.grid.coord(0, idx);
    double c = std::cos(phi), sn = std::sin(phi);
    s.pos[idx] = {r * c, r * sn, 0.0};
    s.nu[idx] = {c, sn, 0.0};
    s.tau[idx][0] = {-r * sn, r * c, 0.0};
    s.tau[idx][1] = {0, 0, 0};
    s.g[idx] = zero2();
    s.g[idx][0][0] = r * r;
    s.ginv[idx] = zero2();
    s.ginv[idx][0][0] = 1.0 / (r * r);
    s.detg[idx] = r * r;
    s.l_lo[idx] = zero2();
    s.l_lo[idx][0][0] = -r;
    s.l_mix[idx] = zero2();
    s.l_mix[idx][0][0] = -1.0 / r;
    s.kappa[idx] = {-1.0 / r, 0.0};
  });
  s.tubular_radius = r;
  s.closed = true;
}

void fill_sphere(ReferenceSurface& s, Execution exec) {
  double r = s.spec.radius;
  int n1 = s.grid.axis[1].n;
  for_each_node(s.size(), exec, [&](int idx) {
    int i0 = idx / n1, i1 = idx % n1;
    double th = s.grid.coord(0, i0), ph = s.grid.coord(1, i1);
    double st = std::sin(th), ct = std::cos(th), sp = std::sin(ph), cp = std::cos(ph);
    Vec3 n = {st * cp, st * sp, ct};
    s.pos[idx] = r * n;
    s.nu[idx] = n;
    s.tau[idx][0] = {r * ct * cp, r * ct * sp, -r * st};
    s.tau[idx][1] = {-r * st * sp, r * st * cp, 0.0};
    Mat2 g = zero2();
    g[0][0] = r * r;
    g[1][1] = r * r * st * st;
    s.g[idx] = g;
    Mat2 gi = zero2();
    gi[0][0] = 1.0 / (r * r);
    gi[1][1] = 1.0 / (r * r * st * st);
    s.ginv[idx] = gi;
    s.detg[idx] = g[0][0] * g[1][1];
    Mat2 l = zero2();
    l[0][0] = -g[0][0] / r;
    l[1][1] = -g[1][1] / r;
    s.l_lo[idx] = l;
    Mat2 lm = zero2();
    lm[0][0] = -1.0 / r;
    lm[1][1] = -1.0 / r;
    s.l_mix[idx] = lm;
    Ten3 chr{zero2(), zero2()};
    chr[0][1][1] = -st * ct;           // Gamma^theta_{phi phi}
    chr[1][0][1] = chr[1][1][0] = ct / st;  // Gamma^phi_{theta phi}
    s.christoffel[idx] = chr;
    // l^i_j is constant, so its chart derivative vanishes.
    s.kappa[idx] = {-1.0 / r, -1.0 / r};
  });
  s.tubular_radius = r;
  s.closed = true;
}

void fill_cylinder(ReferenceSurface& s, Execution exec) {
  double r = s.spec.radius;
  int n1 = s.grid.axis[1].n;
  for_each_node(s.size(), exec, [&](int idx) {
    int i0 = idx / n1, i1 = idx % n1;
    double x = s.grid.coord(0, i0), ph = s.grid.coord(1, i1);
    double c = std::cos(ph), sn = std::sin(ph);
    s.pos[idx] = {x, r * c, r * sn};
    s.nu[idx] = {0.0, c, sn};
    s.tau[idx][0] = {1.0, 0.0, 0.0};
    s.tau[idx][1] = {0.0, -r * sn, r * c};
    Mat2 g = zero2();
    g[0][0] = 1.0;
    g[1][1] = r * r;
    s.g[idx] = g;
    Mat2 gi = zero2();
    gi[0][0] = 1.0;
    gi[1][1] = 1.0 / (r * r);
    s.ginv[idx] = gi;
    s.detg[idx] = r * r;
    Mat2 l = zero2();
    l[1][1] = -r;
    s.l_lo[idx] = l;
    Mat2 lm = zero2();
    lm[1][1] = -1.0 / r;
    s.l_mix[idx] = lm;
    s.kappa[idx] = {-1.0 / r, 0.0};
  });
  s.tubular_radius = r;
  s.closed = true;  // encloses a volume per axial period
}

void fill_torus(ReferenceSurface& s, Execution exec) {
  double R = s.spec.ring_radius, r = s.spec.radius;
  int n1 = s.grid.axis[1].n;
  for_each_node(s.size(), exec, [&](int idx) {
    int i0 = idx / n1, i1 = idx % n1;
    double th = s.grid.coord(0, i0), ph = s.grid.coord(1, i1);
    double st = std::sin(th), ct = std::cos(th), sp = std::sin(ph), cp = std::cos(ph);
    double w = R + r * ct;  // distance from the axis
    s.pos[idx] = {w * cp, w * sp, r * st};
    s.nu[idx] = {ct * cp, ct * sp, st};
    s.tau[idx][0] = {-r * st * cp, -r * st * sp, r * ct};
    s.tau[idx][1] = {-w * sp, w * cp, 0.0};
    Mat2 g = zero2();
    g[0][0] = r * r;
    g[1][1] = w * w;
    s.g[idx] = g;
    Mat2 gi = zero2();
    gi[0][0] = 1.0 / (r * r);
    gi[1][1] = 1.0 / (w * w);
    s.ginv[idx] = gi;
    s.detg[idx] = g[0][0] * g[1][1];
    Mat2 l = zero2();
    l[0][0] = -r;
    l[1][1] = -w * ct;
    s.l_lo[idx] = l;
    Mat2 lm = zero2();
    lm[0][0] = -1.0 / r;
    lm[1][1] = -ct / w;
    s.l_mix[idx] = lm;
    Ten3 chr{zero2(), zero2()};
    chr[0][1][1] = w * st / r;                    // Gamma^theta_{phi phi}
    chr[1][0][1] = chr[1][1][0] = -r * st / w;    // Gamma^phi_{theta phi}
    s.christoffel[idx] = chr;
    Ten3 dl{zero2(), zero2()};
    dl[0][1][1] = R * st / (w * w);  // d_theta l^phi_phi
    s.dl_mix[idx] = dl;
    s.kappa[idx] = {-1.0 / r, -ct / w};
  });
  s.tubular_radius = r;
  s.closed = true;
}

void fill_graph(ReferenceSurface& s, Execution exec) {
  const ModeSum& f = s.spec.graph_profile;
  int md = s.spec.graph_dim;
  int n1 = s.grid.axis[1].n;
  std::vector<double> node_c(s.size(), 0.0);  // Hessian bound per node
  for_each_node(s.size(), exec, [&](int idx) {
    int i0 = idx / n1, i1 = idx % n1;
    double x = s.grid.coord(0, i0);
    double y = md == 2 ? s.grid.coord(1, i1) : 0.0;

    // f derivatives up to third order (analytic).
    double fv = f.eval(x, y);
    double d1f[2] = {f.eval(x, y, 1, 0), md == 2 ? f.eval(x, y, 0, 1) : 0.0};
    double d2f[2][2] = {{f.eval(x, y, 2, 0), 0.0}, {0.0, 0.0}};
    double d3f[2][2][2] = {};
    if (md == 2) {
      d2f[0][1] = d2f[1][0] = f.eval(x, y, 1, 1);
      d2f[1][1] = f.eval(x, y, 0, 2);
    }
    for (int a = 0; a < md; ++a)
      for (int b = 0; b < md; ++b)
        for (int c = 0; c < md; ++c) {
          int dx = (a == 0) + (b == 0) + (c == 0), dy = 3 - dx;
          d3f[a][b][c] = f.eval(x, y, dx, dy);
        }

    double w2 = 1.0;
    for (int a = 0; a < md; ++a) w2 += d1f[a] * d1f[a];
    double w = std::sqrt(w2);

    if (md == 1) {
      s.pos[idx] = {x, fv, 0.0};
      s.nu[idx] = {-d1f[0] / w, 1.0 / w, 0.0};
      s.tau[idx][0] = {1.0, d1f[0], 0.0};
      s.tau[idx][1] = {0, 0, 0};
    } else {
      s.pos[idx] = {x, y, fv};
      s.nu[idx] = {-d1f[0] / w, -d1f[1] / w, 1.0 / w};
      s.tau[idx][0] = {1.0, 0.0, d1f[0]};
      s.tau[idx][1] = {0.0, 1.0, d1f[1]};
    }

    Mat2 g = zero2(), gi = zero2(), l = zero2();
    for (int i = 0; i < md; ++i)
      for (int j = 0; j < md; ++j) {
        g[i][j] = (i == j ? 1.0 : 0.0) + d1f[i] * d1f[j];
        gi[i][j] = (i == j ? 1.0 : 0.0) - d1f[i] * d1f[j] / w2;
        l[i][j] = d2f[i][j] / w;
      }
    s.g[idx] = g;
    s.ginv[idx] = gi;
    s.detg[idx] = det_m(md, g);
    s.l_lo[idx] = l;
    s.l_mix[idx] = mul_m(md, gi, l);

    Ten3 chr{zero2(), zero2()};
    for (int k = 0; k < md; ++k)
      for (int i = 0; i < md; ++i)
        for (int j = 0; j < md; ++j) chr[k][i][j] = d1f[k] * d2f[i][j] / w2;
    s.christoffel[idx] = chr;

    // d_i l^k_j = d_i(g^{ks}) l_sj + g^{ks} d_i(l_sj)
    Ten3 dl{zero2(), zero2()};
    for (int i = 0; i < md; ++i) {
      double grad_dot = 0.0;  // sum_l f_l f_li
      for (int a = 0; a < md; ++a) grad_dot += d1f[a] * d2f[a][i];
      for (int k = 0; k < md; ++k)
        for (int j = 0; j < md; ++j) {
          double v = 0.0;
          for (int ss = 0; ss < md; ++ss) {
            double dginv = -(d2f[k][i] * d1f[ss] + d1f[k] * d2f[ss][i]) / w2 +
                           2.0 * d1f[k] * d1f[ss] * grad_dot / (w2 * w2);
            double dl_lo = d3f[ss][j][i] / w - d2f[ss][j] * grad_dot / (w2 * w);
            v += dginv * l[ss][j] + gi[k][ss] * dl_lo;
          }
          dl[i][k][j] = v;
        }
    }
    s.dl_mix[idx] = dl;

    auto ev = real_eigenvalues_m(md, s.l_mix[idx]);
    s.kappa[idx] = ev;

    // Graph tubular-radius recipe: Hessian spectral norm inflated by the
    // slope factor (1 + |grad f|^2)^{3/2}.
    Mat2 hess = zero2();
    for (int i = 0; i < md; ++i)
      for (int j = 0; j < md; ++j) hess[i][j] = d2f[i][j];
    auto hev = real_eigenvalues_m(md, hess);
    double hnorm = std::max(std::abs(hev[0]), std::abs(hev[1]));
    node_c[idx] = hnorm * w2 * w;
  });
  double c_sup = 0.0;
  for (double c : node_c) c_sup = std::max(c_sup, c);
  s.tubular_radius =
      c_sup > 0.0 ? std::min(s.spec.graph_radius_cap, 1.0 / (2.0 * c_sup)) : s.spec.graph_radius_cap;
  s.closed = false;
}

}  // namespace

ReferenceSurface build_reference(const SurfaceSpec& spec, std::array<int, 2> resolution,
                                 Execution exec) {
  validate(spec);
  ReferenceSurface s;
  s.spec = spec;
  double two_pi = 2.0 * M_PI;
  switch (spec.kind) {
    case SurfaceKindTag::Circle:
      s.m = 1;
      s.grid = ChartGrid(1, Axis{resolution[0], two_pi / resolution[0], 0.0, AxisKind::Periodic});
      break;
    case SurfaceKindTag::Sphere: {
      s.m = 2;
      int n0 = resolution[0], n1 = resolution[1];
      double h0 = M_PI / n0;
      s.grid = ChartGrid(2, Axis{n0, h0, h0 / 2.0, AxisKind::Pole},
                         Axis{n1, two_pi / n1, 0.0, AxisKind::Periodic});
      break;
    }
    case SurfaceKindTag::Cylinder:
      s.m = 2;
      s.grid = ChartGrid(2, Axis{resolution[0], spec.length / resolution[0], 0.0, AxisKind::Periodic},
                         Axis{resolution[1], two_pi / resolution[1], 0.0, AxisKind::Periodic});
      s.period_offset[0] = {spec.length, 0.0, 0.0};
      break;
    case SurfaceKindTag::Torus:
      s.m = 2;
      s.grid = ChartGrid(2, Axis{resolution[0], two_pi / resolution[0], 0.0, AxisKind::Periodic},
                         Axis{resolution[1], two_pi / resolution[1], 0.0, AxisKind::Periodic});
      break;
    case SurfaceKindTag::Graph:
      s.m = spec.graph_dim;
      if (s.m == 1) {
        s.grid = ChartGrid(1, Axis{resolution[0], spec.box[0] / resolution[0], 0.0, AxisKind::Periodic});
        s.period_offset[0] = {spec.box[0], 0.0, 0.0};
      } else {
        s.grid = ChartGrid(2, Axis{resolution[0], spec.box[0] / resolution[0], 0.0, AxisKind::Periodic},
                           Axis{resolution[1], spec.box[1] / resolution[1], 0.0, AxisKind::Periodic});
        s.period_offset[0] = {spec.box[0], 0.0, 0.0};
        s.period_offset[1] = {0.0, spec.box[1], 0.0};
      }
      break;
  }
  allocate(s);
  switch (spec.kind) {
    case SurfaceKindTag::Circle: fill_circle(s, exec); break;
    case SurfaceKindTag::Sphere: fill_sphere(s, exec); break;
    case SurfaceKindTag::Cylinder: fill_cylinder(s, exec); break;
    case SurfaceKindTag::Torus: fill_torus(s, exec); break;
    case SurfaceKindTag::Graph: fill_graph(s, exec); break;
  }
  return s;
}

double ConsistencyReport::max() const {
  double v = metric;
  v = std::max(v, second_form);
  v = std::max(v, christoffel);
  v = std::max(v, normal_unit);
  v = std::max(v, inverse_identity);
  return v;
}

namespace {

// Centered difference of an ambient vector field stored per node. When
// `deck` is set (position fields), wrapping a periodic axis adds the ambient
// period offset of that axis.
Vec3 d1_vec(const ReferenceSurface& s, const std::vector<Vec3>& f, int i0, int i1, int ax,
            bool deck = false) {
  int e0 = ax == 0 ? 1 : 0, e1 = ax == 1 ? 1 : 0;
  GhostRef p = s.grid.resolve(i0 + e0, i1 + e1);
  GhostRef mn = s.grid.resolve(i0 - e0, i1 - e1);
  double h = 2.0 * s.grid.axis[ax].spacing;
  Vec3 fp = f[p.index], fm = f[mn.index];
  if (deck && s.grid.axis[ax].kind == AxisKind::Periodic) {
    int n = s.grid.axis[ax].n;
    int up = ax == 0 ? i0 + e0 : i1 + e1;
    int dn = ax == 0 ? i0 - e0 : i1 - e1;
    if (up >= n) fp = fp + s.period_offset[ax];
    if (dn < 0) fm = fm - s.period_offset[ax];
  }
  return (1.0 / h) * (fp - fm);
}

}  // namespace

ConsistencyReport geometry_consistency_check(const ReferenceSurface& s) {
  ConsistencyReport rep;
  int m = s.m, n1 = s.grid.axis[1].n;

  // Metric components as grid fields, for parity-aware differencing.
  std::vector<std::vector<double>> gcomp(4, std::vector<double>(s.size()));
  for (int idx = 0; idx < s.size(); ++idx)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) gcomp[2 * i + j][idx] = s.g[idx][i][j];

  auto d_g = [&](int i0, int i1, int ax, int i, int j) {
    PoleParity par = (((i == 0) + (j == 0)) % 2 == 1) ? PoleParity::Odd : PoleParity::Even;
    int e0 = ax == 0 ? 1 : 0, e1 = ax == 1 ? 1 : 0;
    const std::vector<double>& u = gcomp[2 * i + j];
    return (s.grid.fetch(u, i0 + e0, i1 + e1, par) - s.grid.fetch(u, i0 - e0, i1 - e1, par)) /
           (2.0 * s.grid.axis[ax].spacing);
  };

  for (int idx = 0; idx < s.size(); ++idx) {
    int i0 = idx / n1, i1 = idx % n1;
    rep.normal_unit = std::max(rep.normal_unit, std::abs(norm(s.nu[idx]) - 1.0));

    Mat2 gg = mul_m(m, s.ginv[idx], s.g[idx]);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        rep.inverse_identity =
            std::max(rep.inverse_identity, std::abs(gg[i][j] - (i == j ? 1.0 : 0.0)));

    Vec3 tfd[2];
    for (int ax = 0; ax < m; ++ax) tfd[ax] = d1_vec(s, s.pos, i0, i1, ax, /*deck=*/true);
    Vec3 dnu[2];
    for (int ax = 0; ax < m; ++ax) dnu[ax] = d1_vec(s, s.nu, i0, i1, ax);

    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double gfd = dot(tfd[i], tfd[j]);
        rep.metric = std::max(rep.metric,
                              std::abs(gfd - s.g[idx][i][j]) / (1.0 + std::abs(s.g[idx][i][j])));
        double lfd = -dot(tfd[i], dnu[j]);
        rep.second_form = std::max(
            rep.second_form, std::abs(lfd - s.l_lo[idx][i][j]) / (1.0 + std::abs(s.l_lo[idx][i][j])));
      }

    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          double v = 0.0;
          for (int l = 0; l < m; ++l)
            v += 0.5 * s.ginv[idx][k][l] *
                 (d_g(i0, i1, i, j, l) + d_g(i0, i1, j, i, l) - d_g(i0, i1, l, i, j));
          double ref = s.christoffel[idx][k][i][j];
          rep.christoffel = std::max(rep.christoffel, std::abs(v - ref) / (1.0 + std::abs(ref)));
        }
  }
  return rep;
}

WeingartenBound weingarten_sup(const ReferenceSurface& surface) {
  WeingartenBound b;
  for (int idx = 0; idx < surface.size(); ++idx)
    for (int r = 0; r < surface.m; ++r)
      b.sup_abs_kappa = std::max(b.sup_abs_kappa, std::abs(surface.kappa[idx][r]));
  if (b.sup_abs_kappa > 0.0) b.implied_radius_bound = 1.0 / b.sup_abs_kappa;
  return b;
}

}  // namespace hflow
