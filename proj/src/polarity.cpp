#include "mahler/polarity.hpp"

#include <cmath>
#include <limits>

namespace mahler {

namespace {

double interior_margin(const Polytope& k, const Vec& z) {
  double m = kInf;
  for (const auto& h : k.halfspaces())
    m = std::min(m, (h.b - h.a.dot(z)) / h.a.norm());
  return m;
}

}  // namespace

Polytope polar(const Polytope& k, const Vec& z) {
  if (z.size() != k.dim()) throw GeomError("polar: center dimension mismatch");
  if (!(interior_margin(k, z) > 1e-12))
    throw NotInteriorError("polar: center is not strictly interior");
  std::vector<Vec> duals;
  duals.reserve(k.halfspaces().size());
  for (const auto& h : k.halfspaces())
    duals.push_back(h.a / (h.b - h.a.dot(z)));
  return convex_hull(duals);
}

PolarDerivatives polar_volume_gradient(const Polytope& k, const Vec& z) {
  const int n = k.dim();
  const BodyMoments m = moments(polar(k, z));
  PolarDerivatives d;
  d.value = m.volume;
  d.gradient = (n + 1.0) * m.first_moment;
  d.hessian = (n + 1.0) * (n + 2.0) * m.second_moment;
  return d;
}

SantaloResult santalo_point(const Polytope& k, double tol, int max_iter) {
  const int n = k.dim();
  Vec z = moments(k).centroid();

  SantaloResult res;
  Polytope pz = polar(k, z);
  BodyMoments m = moments(pz);
  double value = m.volume;
  double resid = m.centroid().norm();
  res.residual_history.push_back(resid);

  for (int it = 0; it < max_iter; ++it) {
    if (resid <= tol) {
      res.point = z;
      res.polar_at_s = pz;
      res.polar_volume = value;
      res.centroid_norm = resid;
      res.iterations = it;
      return res;
    }
    const Vec g = (n + 1.0) * m.first_moment;
    const Mat h = (n + 1.0) * (n + 2.0) * m.second_moment;
    Vec dir;
    Eigen::LLT<Mat> llt(h);
    if (llt.info() == Eigen::Success) {
      dir = llt.solve(-g);
      if (!dir.allFinite() || g.dot(dir) >= 0) dir = -g;
    } else {
      dir = -g;  // singular Hessian: plain descent with Armijo
    }

    // Near the minimum a Newton step lowers the volume by ~|g|^2, which
    // drops below the rounding jitter of the recomputed volume long before
    // the centroid residual reaches tol. Allow a few ulps of slack so the
    // sufficient-decrease test cannot reject such steps.
    const double slack =
        16.0 * std::numeric_limits<double>::epsilon() * (value + 1.0);
    double alpha = 1.0;
    bool stepped = false;
    for (int half = 0; half < 60; ++half) {
      const Vec trial = z + alpha * dir;
      if (interior_margin(k, trial) > 1e-12) {
        Polytope pt = polar(k, trial);
        const BodyMoments mt = moments(pt);
        if (mt.volume <= value + 1e-4 * alpha * g.dot(dir) + slack) {
          z = trial;
          pz = std::move(pt);
          m = mt;
          value = mt.volume;
          stepped = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!stepped)
      throw SantaloFailure("santalo_point: line search failed", z, g.norm());
    resid = m.centroid().norm();
    res.residual_history.push_back(resid);
  }
  if (resid <= tol) {
    res.point = z;
    res.polar_at_s = pz;
    res.polar_volume = value;
    res.centroid_norm = resid;
    res.iterations = max_iter;
    return res;
  }
  throw SantaloFailure("santalo_point: no convergence within iteration limit",
                       z, ((n + 1.0) * m.first_moment).norm());
}

VolumeProductResult volume_product(const Polytope& k, double tol) {
  VolumeProductResult r;
  r.santalo = santalo_point(k, tol);
  r.body_volume = moments(k).volume;
  r.polar_volume = r.santalo.polar_volume;
  r.vp = r.body_volume * r.polar_volume;
  return r;
}

double unit_ball_volume(int n) {
  return std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

}  // namespace mahler
