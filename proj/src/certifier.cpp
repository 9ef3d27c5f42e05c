#include "hflow/certifier.hpp"

#include <cmath>
#include <cstdint>
#include <memory>
#include <unordered_map>

namespace hflow {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified: return "certified";
    case Verdict::Violated: return "violated";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

double max_sample_spacing(const ChartGrid& grid, std::span<const Vec3> points,
                          const std::array<Vec3, 2>& period_offset) {
  double h = 0.0;
  int n1 = grid.axis[1].n;
  for (int idx = 0; idx < grid.size(); ++idx) {
    int i0 = idx / n1, i1 = idx % n1;
    for (int ax = 0; ax < grid.m; ++ax) {
      int e0 = ax == 0 ? 1 : 0, e1 = ax == 1 ? 1 : 0;
      GhostRef r = grid.resolve(i0 + e0, i1 + e1);
      Vec3 q = points[r.index];
      bool wrapped = (ax == 0 ? i0 + 1 == grid.axis[0].n : i1 + 1 == grid.axis[1].n) &&
                     grid.axis[ax].kind == AxisKind::Periodic;
      if (wrapped) q = q + period_offset[ax];
      h = std::max(h, norm(points[idx] - q));
    }
  }
  return h;
}

namespace {

struct CenterResult {
  double min_dist = std::numeric_limits<double>::infinity();
  int hit = -1;
};

// Uniform spatial hash for self-distance scans beyond the all-pairs scale.
class PointHash {
 public:
  PointHash(std::span<const Vec3> pts, double cell) : pts_(pts), cell_(cell) {
    for (int i = 0; i < static_cast<int>(pts.size()); ++i)
      cells_[key(pts[i])].push_back(i);
  }

  template <class Fn>
  void for_each_near(const Vec3& c, double radius, Fn&& fn) const {
    int r = static_cast<int>(std::ceil(radius / cell_)) + 1;
    std::int64_t kx, ky, kz;
    coords(c, kx, ky, kz);
    for (std::int64_t dx = -r; dx <= r; ++dx)
      for (std::int64_t dy = -r; dy <= r; ++dy)
        for (std::int64_t dz = -r; dz <= r; ++dz) {
          auto it = cells_.find(pack(kx + dx, ky + dy, kz + dz));
          if (it == cells_.end()) continue;
          for (int i : it->second) fn(i);
        }
  }

 private:
  void coords(const Vec3& p, std::int64_t& x, std::int64_t& y, std::int64_t& z) const {
    x = static_cast<std::int64_t>(std::floor(p[0] / cell_));
    y = static_cast<std::int64_t>(std::floor(p[1] / cell_));
    z = static_cast<std::int64_t>(std::floor(p[2] / cell_));
  }
  static std::uint64_t pack(std::int64_t x, std::int64_t y, std::int64_t z) {
    auto m = [](std::int64_t v) { return static_cast<std::uint64_t>(v + (1 << 20)) & 0x1FFFFF; };
    return (m(x) << 42) | (m(y) << 21) | m(z);
  }
  std::uint64_t key(const Vec3& p) const {
    std::int64_t x, y, z;
    coords(p, x, y, z);
    return pack(x, y, z);
  }

  std::span<const Vec3> pts_;
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

constexpr int kAllPairsLimit = 100000;

}  // namespace

Certificate ball_condition(const BallScanInput& input, double a, Execution exec) {
  int n = static_cast<int>(input.points.size());
  if (n == 0) throw ConstructionError("ball_condition: empty sampling");
  if (!(a > 0.0)) throw ConstructionError("ball_condition: radius must be positive");

  Certificate cert;
  cert.radius_tested = a;
  cert.sample_count = n;
  cert.slack = 2.0 * input.sample_spacing * std::max(1.0, input.kappa_sup);

  std::vector<CenterResult> results(2 * n);
  std::unique_ptr<PointHash> hash;
  if (n > kAllPairsLimit)
    hash = std::make_unique<PointHash>(input.points, a);

  for_each_node(2 * n, exec, [&](int job) {
    int p = job / 2;
    int side = (job % 2 == 0) ? +1 : -1;
    Vec3 center = input.points[p] + (side * a) * input.normals[p];
    CenterResult& res = results[job];
    auto consider = [&](int q) {
      if (q == p) return;
      double d = norm(input.points[q] - center);
      if (d < res.min_dist) {
        res.min_dist = d;
        res.hit = q;
      }
    };
    if (hash)
      hash->for_each_near(center, a + cert.slack, consider);
    else
      for (int q = 0; q < n; ++q) consider(q);
  });

  // Deterministic reduction: deepest violation, ties broken by lowest node.
  double eps = 1e-12 * std::max(1.0, a);
  double worst_depth = -std::numeric_limits<double>::infinity();
  int worst_job = -1;
  for (int job = 0; job < 2 * n; ++job) {
    if (results[job].hit < 0) continue;
    double depth = a - results[job].min_dist;
    if (depth > worst_depth + eps) {
      worst_depth = depth;
      worst_job = job;
    }
  }

  if (worst_job < 0 || worst_depth <= eps) {
    cert.verdict = Verdict::Certified;
  } else if (worst_depth <= cert.slack) {
    cert.verdict = Verdict::Inconclusive;
  } else {
    cert.verdict = Verdict::Violated;
    BallWitness w;
    w.center_node = worst_job / 2;
    w.side = (worst_job % 2 == 0) ? +1 : -1;
    w.hit_node = results[worst_job].hit;
    w.distance = results[worst_job].min_dist;
    cert.witness = w;
  }
  return cert;
}

double certified_ball_radius(const BallScanInput& input, double upper_bracket, Execution exec) {
  if (!(upper_bracket > 0.0)) return 0.0;
  auto certified = [&](double a) {
    return ball_condition(input, a, exec).verdict == Verdict::Certified;
  };
  if (certified(upper_bracket)) return upper_bracket;
  double lo = upper_bracket / 64.0;
  while (lo > 1e-12 * upper_bracket && !certified(lo)) lo /= 4.0;
  if (!certified(lo)) return 0.0;
  double hi = upper_bracket;
  while ((hi - lo) / hi > 1e-3) {
    double mid = 0.5 * (lo + hi);
    if (certified(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

GraphRadiusEstimate graph_radius(const ReferenceSurface& s, Execution exec) {
  if (s.spec.kind != SurfaceKindTag::Graph)
    throw ConstructionError("graph_radius requires a graph reference surface");
  int m = s.m, n1 = s.grid.axis[1].n;

  // Profile samples: the last ambient coordinate of the node positions.
  std::vector<double> f(s.size());
  for (int idx = 0; idx < s.size(); ++idx) f[idx] = s.pos[idx][m];

  double c_sup = 0.0;
  for (int idx = 0; idx < s.size(); ++idx) {
    int i0 = idx / n1, i1 = idx % n1;
    Mat2 hess = zero2();
    double grad2 = 0.0;
    for (int ax = 0; ax < m; ++ax) {
      double d = s.grid.d1(f, i0, i1, ax);
      grad2 += d * d;
      hess[ax][ax] = s.grid.d2(f, i0, i1, ax);
    }
    if (m == 2) hess[0][1] = hess[1][0] = s.grid.d11(f, i0, i1);
    auto ev = real_eigenvalues_m(m, hess);
    double hnorm = std::max(std::abs(ev[0]), std::abs(ev[1]));
    c_sup = std::max(c_sup, hnorm * std::pow(1.0 + grad2, 1.5));
  }

  GraphRadiusEstimate est;
  est.conservative =
      c_sup > 0.0 ? std::min(s.spec.graph_radius_cap, 1.0 / (2.0 * c_sup)) : s.spec.graph_radius_cap;

  WeingartenBound wb = weingarten_sup(s);
  double bracket = std::min(s.spec.graph_radius_cap,
                            std::isfinite(wb.implied_radius_bound)
                                ? 1.2 * wb.implied_radius_bound
                                : s.spec.graph_radius_cap);
  BallScanInput in{s.pos, s.nu, max_sample_spacing(s.grid, s.pos, s.period_offset),
                   wb.sup_abs_kappa};
  est.certified = certified_ball_radius(in, bracket, exec);
  return est;
}

OffsetCertificate certify_offset_surface(const ReferenceSurface& surface,
                                         const std::vector<double>& rho, Execution exec) {
  GraphGeometry geo = build_graph_geometry(surface, rho, exec);
  OffsetCertificate out;

  double kappa_sup = 0.0;
  for (int idx = 0; idx < geo.size(); ++idx) {
    auto ev = real_eigenvalues_m(geo.m, geo.weingarten_rho[idx]);
    for (int r = 0; r < geo.m; ++r) kappa_sup = std::max(kappa_sup, std::abs(ev[r]));
  }
  out.kappa_sup = kappa_sup;

  double sup_rho = 0.0;
  for (double v : rho) sup_rho = std::max(sup_rho, std::abs(v));
  double curv_radius =
      kappa_sup > 0.0 ? 1.0 / kappa_sup : std::numeric_limits<double>::infinity();
  out.proposal = std::min(curv_radius, surface.tubular_radius - sup_rho);

  // The curvature ceiling is the sharp upper bracket; a - sup|rho| is the
  // guaranteed lower bound, kept in `proposal` for reporting.
  double bracket = std::isfinite(curv_radius) ? curv_radius : surface.tubular_radius;
  BallScanInput in{geo.psi, geo.nu_gamma,
                   max_sample_spacing(surface.grid, geo.psi, surface.period_offset), kappa_sup};
  out.radius = certified_ball_radius(in, bracket, exec);
  out.certificate = ball_condition(in, out.radius, exec);
  return out;
}

}  // namespace hflow
