#pragma once

// Bounded full-dimensional convex polytopes in R^n (2 <= n <= 6), carried in
// double representation: vertex list, irredundant facet halfspaces and the
// facet-vertex incidence. Built either from points (convex_hull) or from an
// inequality system with an interior witness (halfspace_intersection).
//
// Conventions:
//   halfspace {a, b} means  { x : <a, x> <= b }
//   facets are normalized to b = 1 when the origin is interior, else |a| = 1
//   vertices are sorted lexicographically; incidence lists are sorted

#include <vector>

#include "mahler/numkit.hpp"

namespace mahler {

struct Halfspace {
  Vec a;
  double b = 0.0;
};

struct BodyMoments {
  double volume = 0.0;
  Vec first_moment;    // integral of x over the body
  Mat second_moment;   // integral of x x^T over the body
  Vec centroid() const { return first_moment / volume; }
};

class Polytope {
 public:
  Polytope() = default;

  int dim() const { return dim_; }
  const std::vector<Vec>& vertices() const { return verts_; }
  const std::vector<Halfspace>& halfspaces() const { return hs_; }
  const std::vector<std::vector<int>>& incidence() const { return inc_; }
  const Vec& interior_point() const { return interior_; }
  // For hull results: index of the input point each vertex came from.
  const std::vector<int>& vertex_source_ids() const { return src_; }

  Polytope translated(const Vec& t) const;

 private:
  int dim_ = 0;
  std::vector<Vec> verts_;
  std::vector<Halfspace> hs_;
  std::vector<std::vector<int>> inc_;
  Vec interior_;
  std::vector<int> src_;

  friend Polytope convex_hull(const std::vector<Vec>& points);
  friend Polytope halfspace_intersection(const std::vector<Halfspace>& hs,
                                         const Vec& witness);
};

// Incremental beneath-beyond hull; points are deduplicated and inserted in
// lexicographic order. Throws DegenerateInputError (carrying the affine rank)
// when the points do not span R^n.
Polytope convex_hull(const std::vector<Vec>& points);

// Intersection of halfspaces around a strict interior witness, computed by
// point duality. Throws UnboundedRegionError when the region has a recession
// direction and NotInteriorError when the witness is not strictly feasible.
Polytope halfspace_intersection(const std::vector<Halfspace>& hs,
                                const Vec& witness);

double support(const Polytope& p, const Vec& direction);
bool contains(const Polytope& p, const Vec& x, double tol = 1e-9);

// Exact volume and first/second moments via fan triangulation from the
// vertex-average point, with recursively triangulated facets.
BodyMoments moments(const Polytope& p);

// Euclidean distance from x to p (min-norm point over the vertex hull).
double distance_to(const Polytope& p, const Vec& x);

double hausdorff(const Polytope& p, const Polytope& q);

// min over facets of the distance from z to the facet plane; z must be
// strictly interior or NotInteriorError is thrown.
double inradius_at(const Polytope& p, const Vec& z);

// Hull of m * v + t over vertices v of p.
Polytope affine_image(const Polytope& p, const Mat& m, const Vec& t);

}  // namespace mahler
