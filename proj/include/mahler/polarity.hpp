#pragma once

// Polar duality and the Santalo point. For a body K and interior center z the
// polar is K^z = { y : <y, x - z> <= 1 for all x in K }, i.e. the polar of
// K - z at the origin. |K^z| is smooth and strictly convex in z; its unique
// minimizer is the Santalo point, characterized by centroid(K^z) = 0.

#include <vector>

#include "mahler/polytope.hpp"

namespace mahler {

Polytope polar(const Polytope& k, const Vec& z);

struct PolarDerivatives {
  double value = 0.0;  // |K^z|
  Vec gradient;        // equals (n+1) * first_moment(K^z)
  Mat hessian;         // equals (n+1)(n+2) * second_moment(K^z)
};

PolarDerivatives polar_volume_gradient(const Polytope& k, const Vec& z);

struct SantaloResult {
  Vec point;
  Polytope polar_at_s;
  double polar_volume = 0.0;
  double centroid_norm = 0.0;
  int iterations = 0;
  std::vector<double> residual_history;  // |centroid(K^z)| per iterate
};

struct SantaloFailure : GeomError {
  Vec last_iterate;
  double gradient_norm;
  SantaloFailure(const std::string& msg, Vec z, double g)
      : GeomError(msg), last_iterate(std::move(z)), gradient_norm(g) {}
};

// Damped Newton from the centroid; converges when |centroid(K^z)| <= tol.
SantaloResult santalo_point(const Polytope& k, double tol = 1e-10,
                            int max_iter = 100);

struct VolumeProductResult {
  double vp = 0.0;
  double body_volume = 0.0;
  double polar_volume = 0.0;
  SantaloResult santalo;
};

VolumeProductResult volume_product(const Polytope& k, double tol = 1e-10);

// Closed-form volume of the n-dimensional Euclidean unit ball.
double unit_ball_volume(int n);

}  // namespace mahler
