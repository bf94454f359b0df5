#include "mahler/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace mahler {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double point_scale(const std::vector<Vec>& pts) {
  double s = 1.0;
  for (const auto& p : pts)
    if (p.size() > 0) s = std::max(s, p.cwiseAbs().maxCoeff());
  return s;
}

bool lex_less(const Vec& a, const Vec& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

struct HullFacet {
  std::vector<int> vid;  // n point ids, sorted ascending
  Vec a;                 // unit outward normal
  double b = 0.0;
  bool alive = true;
};

// Hyperplane through n affinely independent points, unit normal oriented away
// from ref.
void plane_through(const std::vector<Vec>& pts, const std::vector<int>& ids,
                   const Vec& ref, double rank_tol, Vec& a, double& b) {
  const int n = static_cast<int>(pts[ids[0]].size());
  Mat e(ids.size() - 1, n);
  for (std::size_t i = 1; i < ids.size(); ++i)
    e.row(i - 1) = (pts[ids[i]] - pts[ids[0]]).transpose();
  Eigen::JacobiSVD<Mat> svd(e, Eigen::ComputeFullV);
  if (n >= 2 && svd.singularValues()[n - 2] <= rank_tol)
    throw GeomError("hull: facet points are affinely degenerate");
  a = svd.matrixV().col(n - 1);
  b = 0.0;
  for (int id : ids) b += a.dot(pts[id]);
  b /= static_cast<double>(ids.size());
  if (a.dot(ref) > b) {
    a = -a;
    b = -b;
  }
}

// Greedy farthest-point selection of n+1 affinely independent points.
std::vector<int> initial_simplex(const std::vector<Vec>& pts, double tol) {
  const int n = static_cast<int>(pts[0].size());
  std::vector<int> chosen{0};
  Mat basis(n, 0);  // orthonormal columns spanning the current affine hull
  while (static_cast<int>(chosen.size()) < n + 1) {
    int best = -1;
    double bestd = tol;
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
      Vec r = pts[i] - pts[chosen[0]];
      if (basis.cols() > 0) r -= basis * (basis.transpose() * r);
      const double d = r.norm();
      if (d > bestd) {
        bestd = d;
        best = i;
      }
    }
    if (best < 0)
      throw DegenerateInputError(
          "hull: points span an affine subspace of rank " +
              std::to_string(chosen.size() - 1),
          static_cast<int>(chosen.size()) - 1);
    Vec r = pts[best] - pts[chosen[0]];
    if (basis.cols() > 0) r -= basis * (basis.transpose() * r);
    r.normalize();
    basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
    basis.col(basis.cols() - 1) = r;
    chosen.push_back(best);
  }
  return chosen;
}

}  // namespace

Polytope convex_hull(const std::vector<Vec>& points) {
  if (points.empty()) throw GeomError("hull: no points");
  const int n = static_cast<int>(points[0].size());
  if (n < 2) throw GeomError("hull: dimension must be at least 2");
  for (const auto& p : points)
    if (p.size() != n) throw GeomError("hull: mixed point dimensions");

  const double scale = point_scale(points);
  const double vtol = 1e-9 * scale;  // visibility / coplanarity tolerance

  // Deduplicate and sort lexicographically; insertion order is then fixed.
  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return lex_less(points[i], points[j]);
  });
  std::vector<Vec> pts;
  std::vector<int> src_of;
  for (int idx : order) {
    if (!pts.empty() &&
        (points[idx] - pts.back()).cwiseAbs().maxCoeff() <= 1e-12 * scale)
      continue;
    pts.push_back(points[idx]);
    src_of.push_back(idx);
  }

  const std::vector<int> init = initial_simplex(pts, vtol);
  Vec ref = Vec::Zero(n);
  for (int id : init) ref += pts[id];
  ref /= static_cast<double>(init.size());

  std::vector<HullFacet> facets;
  for (int drop = 0; drop <= n; ++drop) {
    HullFacet f;
    for (int i = 0; i <= n; ++i)
      if (i != drop) f.vid.push_back(init[i]);
    std::sort(f.vid.begin(), f.vid.end());
    plane_through(pts, f.vid, ref, 1e-12 * scale, f.a, f.b);
    facets.push_back(std::move(f));
  }

  std::vector<bool> is_init(pts.size(), false);
  for (int id : init) is_init[id] = true;

  for (int p = 0; p < static_cast<int>(pts.size()); ++p) {
    if (is_init[p]) continue;
    std::vector<int> vis;
    for (int f = 0; f < static_cast<int>(facets.size()); ++f)
      if (facets[f].alive && facets[f].a.dot(pts[p]) > facets[f].b + vtol)
        vis.push_back(f);
    if (vis.empty()) continue;  // interior or on the current boundary

    // Horizon ridges are those owned by exactly one visible facet.
    std::map<std::vector<int>, int> ridge_count;
    for (int f : vis) {
      for (int drop = 0; drop < n; ++drop) {
        std::vector<int> ridge;
        ridge.reserve(n - 1);
        for (int i = 0; i < n; ++i)
          if (i != drop) ridge.push_back(facets[f].vid[i]);
        ++ridge_count[ridge];
      }
    }
    for (int f : vis) facets[f].alive = false;
    for (const auto& [ridge, cnt] : ridge_count) {
      if (cnt != 1) continue;
      HullFacet nf;
      nf.vid = ridge;
      nf.vid.push_back(p);
      std::sort(nf.vid.begin(), nf.vid.end());
      plane_through(pts, nf.vid, ref, 1e-12 * scale, nf.a, nf.b);
      facets.push_back(std::move(nf));
    }
  }

  // Candidate vertices of the simplicial hull.
  std::vector<int> cand;
  for (const auto& f : facets)
    if (f.alive) cand.insert(cand.end(), f.vid.begin(), f.vid.end());
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  // Merge coplanar simplicial facets into geometric facets.
  struct Cluster {
    Vec a;
    double b = 0.0;
    std::vector<int> inc;  // candidate point ids on the facet
  };
  std::vector<Cluster> clusters;
  for (const auto& f : facets) {
    if (!f.alive) continue;
    bool joined = false;
    for (auto& c : clusters) {
      if (f.a.dot(c.a) > 1.0 - 1e-9 && std::abs(f.b - c.b) < vtol) {
        joined = true;
        break;
      }
    }
    if (!joined) clusters.push_back({f.a, f.b, {}});
  }

  // Refit each facet plane over its incident points for a clean normal.
  for (auto& c : clusters) {
    std::vector<int> inc;
    for (int id : cand)
      if (std::abs(c.a.dot(pts[id]) - c.b) <= vtol) inc.push_back(id);
    if (static_cast<int>(inc.size()) < n)
      throw GeomError("hull: facet with too few incident vertices");
    Vec mean = Vec::Zero(n);
    for (int id : inc) mean += pts[id];
    mean /= static_cast<double>(inc.size());
    Mat e(inc.size(), n);
    for (std::size_t i = 0; i < inc.size(); ++i)
      e.row(i) = (pts[inc[i]] - mean).transpose();
    Eigen::JacobiSVD<Mat> svd(e, Eigen::ComputeFullV);
    Vec a2 = svd.matrixV().col(n - 1);
    if (a2.dot(c.a) < 0) a2 = -a2;
    double b2 = 0.0;
    for (int id : inc) b2 += a2.dot(pts[id]);
    b2 /= static_cast<double>(inc.size());
    c.a = a2;
    c.b = b2;
    c.inc.clear();
    for (int id : cand)
      if (std::abs(c.a.dot(pts[id]) - c.b) <= vtol) c.inc.push_back(id);
  }

  // A true vertex has incident facet normals of full rank; boundary points
  // left over from coplanar inputs do not and are dropped.
  std::vector<int> kept;
  std::map<int, std::vector<int>> inc_of;
  for (int ci = 0; ci < static_cast<int>(clusters.size()); ++ci)
    for (int id : clusters[ci].inc) inc_of[id].push_back(ci);
  for (int id : cand) {
    const auto it = inc_of.find(id);
    if (it == inc_of.end() || static_cast<int>(it->second.size()) < n) continue;
    Mat nm(it->second.size(), n);
    for (std::size_t i = 0; i < it->second.size(); ++i)
      nm.row(i) = clusters[it->second[i]].a.transpose();
    Eigen::JacobiSVD<Mat> svd(nm);
    const auto& sv = svd.singularValues();
    if (sv[n - 1] > 1e-7 * sv[0]) kept.push_back(id);
  }
  if (static_cast<int>(kept.size()) < n + 1)
    throw GeomError("hull: fewer than n+1 extreme vertices");

  std::vector<int> new_id(pts.size(), -1);
  Polytope poly;
  poly.dim_ = n;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    new_id[kept[i]] = static_cast<int>(i);
    poly.verts_.push_back(pts[kept[i]]);
    poly.src_.push_back(src_of[kept[i]]);
  }
  poly.interior_ = Vec::Zero(n);
  for (const auto& v : poly.verts_) poly.interior_ += v;
  poly.interior_ /= static_cast<double>(poly.verts_.size());

  bool origin_interior = true;
  for (const auto& c : clusters)
    if (c.b <= vtol) origin_interior = false;
  for (const auto& c : clusters) {
    Halfspace h;
    if (origin_interior) {
      h.a = c.a / c.b;
      h.b = 1.0;
    } else {
      h.a = c.a;
      h.b = c.b;
    }
    poly.hs_.push_back(h);
    std::vector<int> inc;
    for (int id : c.inc)
      if (new_id[id] >= 0) inc.push_back(new_id[id]);
    std::sort(inc.begin(), inc.end());
    if (static_cast<int>(inc.size()) < n)
      throw GeomError("hull: facet lost its spanning vertices");
    poly.inc_.push_back(std::move(inc));
  }

  // Sanity: every vertex satisfies every facet within tolerance.
  for (const auto& h : poly.hs_) {
    const double na = h.a.norm();
    for (const auto& v : poly.verts_)
      if (h.a.dot(v) - h.b > 10.0 * vtol * na)
        throw GeomError("hull: inconsistent facet system");
  }
  return poly;
}

Polytope halfspace_intersection(const std::vector<Halfspace>& hs,
                                const Vec& witness) {
  const int n = static_cast<int>(witness.size());
  if (hs.empty())
    throw UnboundedRegionError("halfspace_intersection: no halfspaces");
  std::vector<Vec> duals;
  duals.reserve(hs.size());
  for (const auto& h : hs) {
    if (h.a.size() != n)
      throw GeomError("halfspace_intersection: dimension mismatch");
    const double na = h.a.norm();
    if (!(na > 0))
      throw GeomError("halfspace_intersection: zero facet normal");
    const double slack = h.b - h.a.dot(witness);
    if (slack / na <= 1e-12 * std::max(1.0, std::abs(h.b) / na))
      throw NotInteriorError(
          "halfspace_intersection: witness does not strictly satisfy every "
          "halfspace");
    duals.push_back(h.a / slack);
  }
  Polytope dual_hull;
  try {
    dual_hull = convex_hull(duals);
  } catch (const DegenerateInputError&) {
    throw UnboundedRegionError(
        "halfspace_intersection: region is unbounded (degenerate dual hull)");
  }
  const double dscale = point_scale(duals);
  for (const auto& h : dual_hull.halfspaces())
    if (h.b / h.a.norm() <= 1e-9 * dscale)
      throw UnboundedRegionError("halfspace_intersection: region is unbounded");

  std::vector<Vec> verts;
  verts.reserve(dual_hull.halfspaces().size());
  for (const auto& h : dual_hull.halfspaces())
    verts.push_back(h.a / h.b + witness);
  return convex_hull(verts);
}

double support(const Polytope& p, const Vec& direction) {
  double s = -kInf;
  for (const auto& v : p.vertices()) s = std::max(s, v.dot(direction));
  return s;
}

bool contains(const Polytope& p, const Vec& x, double tol) {
  for (const auto& h : p.halfspaces())
    if (h.a.dot(x) > h.b + tol * h.a.norm()) return false;
  return true;
}

namespace {

// Recursive face triangulation. region lists true vertices of a k-face by
// their ids in pts; fan apexes are appended to pts as they are created.
std::vector<std::vector<int>> triangulate_region(std::vector<Vec>& pts,
                                                 const std::vector<int>& region,
                                                 int k) {
  std::vector<std::vector<int>> out;
  if (static_cast<int>(region.size()) == k + 1) {
    out.push_back(region);
    return out;
  }
  const int n = static_cast<int>(pts[region[0]].size());
  Vec mean = Vec::Zero(n);
  for (int id : region) mean += pts[id];
  mean /= static_cast<double>(region.size());
  Mat e(region.size(), n);
  for (std::size_t i = 0; i < region.size(); ++i)
    e.row(i) = (pts[region[i]] - mean).transpose();
  Eigen::JacobiSVD<Mat> svd(e, Eigen::ComputeFullV);
  Mat frame = svd.matrixV().leftCols(k);
  std::vector<Vec> proj;
  proj.reserve(region.size());
  for (int id : region) proj.push_back(frame.transpose() * (pts[id] - mean));

  Polytope sub = convex_hull(proj);
  pts.push_back(mean);
  const int apex = static_cast<int>(pts.size()) - 1;
  for (const auto& inc : sub.incidence()) {
    std::vector<int> child;
    child.reserve(inc.size());
    for (int vi : inc) child.push_back(region[sub.vertex_source_ids()[vi]]);
    for (auto& simp : triangulate_region(pts, child, k - 1)) {
      simp.push_back(apex);
      out.push_back(std::move(simp));
    }
  }
  return out;
}

}  // namespace

BodyMoments moments(const Polytope& p) {
  const int n = p.dim();
  std::vector<Vec> pts = p.vertices();
  pts.push_back(p.interior_point());
  const int apex = static_cast<int>(pts.size()) - 1;

  std::vector<std::vector<int>> simps;
  for (const auto& inc : p.incidence()) {
    for (auto& t : triangulate_region(pts, inc, n - 1)) {
      t.push_back(apex);
      simps.push_back(std::move(t));
    }
  }

  BodyMoments m;
  m.first_moment = Vec::Zero(n);
  m.second_moment = Mat::Zero(n, n);
  const double nfact = factorial(n);
  Mat edge(n, n);
  for (const auto& s : simps) {
    for (int i = 1; i <= n; ++i) edge.col(i - 1) = pts[s[i]] - pts[s[0]];
    const double v = std::abs(edge.determinant()) / nfact;
    if (v == 0.0) continue;
    Vec sum = Vec::Zero(n);
    Mat sq = Mat::Zero(n, n);
    for (int i = 0; i <= n; ++i) {
      sum += pts[s[i]];
      sq += pts[s[i]] * pts[s[i]].transpose();
    }
    m.volume += v;
    m.first_moment += v / (n + 1.0) * sum;
    m.second_moment += v / ((n + 1.0) * (n + 2.0)) * (sq + sum * sum.transpose());
  }
  return m;
}

double distance_to(const Polytope& p, const Vec& x) {
  double scale = std::max(point_scale(p.vertices()), 1.0);
  if (x.size() > 0) scale = std::max(scale, x.cwiseAbs().maxCoeff());
  bool inside = true;
  for (const auto& h : p.halfspaces()) {
    if ((h.a.dot(x) - h.b) / h.a.norm() > 1e-12 * scale) {
      inside = false;
      break;
    }
  }
  if (inside) return 0.0;

  const auto& vs = p.vertices();
  int start = 0;
  double bestd = kInf;
  for (int i = 0; i < static_cast<int>(vs.size()); ++i) {
    const double d = (vs[i] - x).squaredNorm();
    if (d < bestd) {
      bestd = d;
      start = i;
    }
  }
  std::vector<double> lam(vs.size(), 0.0);
  lam[start] = 1.0;
  Vec y = vs[start];
  const double gap_tol = 1e-12 * scale * scale;

  // Frank-Wolfe with away steps on |y - x|^2 over conv(vertices).
  for (int it = 0; it < 20000; ++it) {
    if (it % 64 == 63) {
      y.setZero();
      for (std::size_t i = 0; i < vs.size(); ++i)
        if (lam[i] > 0) y += lam[i] * vs[i];
    }
    const Vec g = 2.0 * (y - x);
    int fw = -1;
    double fwval = kInf;
    for (int i = 0; i < static_cast<int>(vs.size()); ++i) {
      const double val = g.dot(vs[i]);
      if (val < fwval) {
        fwval = val;
        fw = i;
      }
    }
    const double gap = g.dot(y) - fwval;
    if (gap <= gap_tol) break;
    int aw = -1;
    double awval = -kInf;
    for (int i = 0; i < static_cast<int>(vs.size()); ++i) {
      if (lam[i] <= 0) continue;
      const double val = g.dot(vs[i]);
      if (val > awval) {
        awval = val;
        aw = i;
      }
    }
    const Vec dfw = vs[fw] - y;
    const Vec daw = y - vs[aw];
    const bool use_fw =
        -g.dot(dfw) >= -g.dot(daw) || lam[aw] >= 1.0 - 1e-18;
    if (use_fw) {
      const double den = 2.0 * dfw.squaredNorm();
      if (den <= 0) break;
      const double gamma = std::clamp(-g.dot(dfw) / den, 0.0, 1.0);
      for (auto& l : lam) l *= 1.0 - gamma;
      lam[fw] += gamma;
      y = y + gamma * dfw;
    } else {
      const double gmax = lam[aw] / (1.0 - lam[aw]);
      const double den = 2.0 * daw.squaredNorm();
      if (den <= 0) break;
      const double gamma = std::clamp(-g.dot(daw) / den, 0.0, gmax);
      for (auto& l : lam) l *= 1.0 + gamma;
      lam[aw] = std::max(lam[aw] - gamma, 0.0);
      y = y + gamma * daw;
    }
  }
  return (y - x).norm();
}

double hausdorff(const Polytope& p, const Polytope& q) {
  if (p.dim() != q.dim()) throw GeomError("hausdorff: dimension mismatch");
  double d = 0.0;
  for (const auto& v : p.vertices()) d = std::max(d, distance_to(q, v));
  for (const auto& w : q.vertices()) d = std::max(d, distance_to(p, w));

  // Cross-check against the support-difference lower bound on a
  // deterministic direction grid.
  std::vector<Vec> dirs;
  const int n = p.dim();
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e[i] = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  for (const auto* body : {&p, &q}) {
    for (const auto& v : body->vertices())
      if (v.norm() > 1e-12) dirs.push_back(v.normalized());
    for (const auto& h : body->halfspaces()) dirs.push_back(h.a.normalized());
  }
  for (const auto& u : dirs)
    d = std::max(d, std::abs(support(p, u) - support(q, u)));
  return d;
}

double inradius_at(const Polytope& p, const Vec& z) {
  double r = kInf;
  for (const auto& h : p.halfspaces())
    r = std::min(r, (h.b - h.a.dot(z)) / h.a.norm());
  if (!(r > 0))
    throw NotInteriorError("inradius_at: point is not strictly interior (margin " +
                           std::to_string(r) + ")");
  return r;
}

Polytope Polytope::translated(const Vec& t) const {
  Polytope out = *this;
  for (auto& v : out.verts_) v += t;
  for (auto& h : out.hs_) h.b += h.a.dot(t);
  out.interior_ += t;
  return out;
}

Polytope affine_image(const Polytope& p, const Mat& m, const Vec& t) {
  std::vector<Vec> mapped;
  mapped.reserve(p.vertices().size());
  for (const auto& v : p.vertices()) mapped.push_back(m * v + t);
  return convex_hull(mapped);
}

}  // namespace mahler
