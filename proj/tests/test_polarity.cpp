#include "doctest.h"

#include <cmath>
#include <random>

#include "mahler/errors.hpp"
#include "mahler/numkit.hpp"
#include "mahler/polarity.hpp"
#include "mahler/polytope.hpp"
#include "mahler/simplex_flags.hpp"
#include "oracles.hpp"

using namespace mahler;

namespace {

Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

Polytope unit_square() {
  return convex_hull({v2(1, 1), v2(-1, 1), v2(-1, -1), v2(1, -1)});
}

Polytope random_body(int n, std::uint64_t seed, int count = 16) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec> pts;
  for (int i = 0; i < count; ++i) {
    Vec p(n);
    for (int j = 0; j < n; ++j) p[j] = u(gen);
    pts.push_back(p);
  }
  return convex_hull(pts);
}

}  // namespace

TEST_CASE("polar of the centered regular simplex is its negative n-fold") {
  for (int n = 2; n <= 4; ++n) {
    const RegularSimplex s = build_regular_simplex(n);
    const Polytope dual = polar(s.poly, Vec::Zero(n));
    REQUIRE(dual.vertices().size() == s.verts.size());
    for (const auto& w : dual.vertices()) {
      double best = 1e300;
      for (const auto& v : s.verts) best = std::min(best, (w + n * v).norm());
      CHECK(best < 1e-10);
    }
  }
}

TEST_CASE("polar of the square is the cross-polytope") {
  const Polytope cp = polar(unit_square(), Vec::Zero(2));
  CHECK(cp.vertices().size() == 4);
  CHECK(moments(cp).volume == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(support(cp, v2(1, 0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("polar volume matches the planar dual-vertex oracle") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const Polytope k = random_body(2, seed);
    const Vec z = 0.2 * moments(k).centroid();
    const double direct = moments(polar(k, z)).volume;
    const double by_oracle = oracle::polar_area_2d(k.halfspaces(), z);
    CHECK(direct == doctest::Approx(by_oracle).epsilon(1e-10));
  }
}

TEST_CASE("bipolar recovers the original body") {
  for (std::uint64_t seed : {3u, 4u, 5u, 6u}) {
    for (int n = 2; n <= 3; ++n) {
      const Polytope k = random_body(n, seed * 100 + n);
      const Vec c = moments(k).centroid();
      const Polytope shifted = k.translated(-c);
      const Polytope kpp = polar(polar(shifted, Vec::Zero(n)), Vec::Zero(n));
      CHECK(hausdorff(shifted, kpp) < 1e-8);
    }
  }
}

TEST_CASE("polar about a non-interior center is refused") {
  const Polytope sq = unit_square();
  CHECK_THROWS_AS(polar(sq, v2(2, 0)), NotInteriorError);
  CHECK_THROWS_AS(polar(sq, v2(1, 0)), NotInteriorError);  // boundary
}

TEST_CASE("polar volume gradient agrees with finite differences") {
  for (int n = 2; n <= 3; ++n) {
    const Polytope k = random_body(n, 77 + n);
    const Vec z = 0.3 * moments(k).centroid();
    const PolarDerivatives d = polar_volume_gradient(k, z);
    CHECK(d.value == doctest::Approx(moments(polar(k, z)).volume));
    const Vec fd = oracle::fd_polar_gradient(k, z, 1e-6);
    CHECK((d.gradient - fd).norm() <= 1e-5 * std::max(1.0, fd.norm()));
    // Hessian of a strictly convex function
    const Eigen::SelfAdjointEigenSolver<Mat> es(d.hessian);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    CHECK((d.hessian - d.hessian.transpose()).norm() < 1e-9);
  }
}

TEST_CASE("santalo point of a centered simplex is the origin") {
  for (int n = 2; n <= 4; ++n) {
    const RegularSimplex s = build_regular_simplex(n);
    const SantaloResult r = santalo_point(s.poly);
    CHECK(r.point.norm() < 1e-10);
    CHECK(r.centroid_norm <= 1e-10);
  }
}

TEST_CASE("santalo point is translation equivariant") {
  const Polytope k = random_body(3, 21);
  Vec t(3);
  t << 0.4, -0.9, 0.25;
  const SantaloResult a = santalo_point(k);
  const SantaloResult b = santalo_point(k.translated(t));
  CHECK((b.point - (a.point + t)).norm() < 1e-8);
  CHECK(b.polar_volume == doctest::Approx(a.polar_volume).epsilon(1e-10));
}

TEST_CASE("santalo point minimizes the polar volume") {
  const Polytope k = random_body(2, 31);
  const SantaloResult r = santalo_point(k);
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int tried = 0;
  while (tried < 20) {
    Vec z = r.point + 0.05 * v2(u(gen), u(gen));
    if (!contains(k, z, -1e-6)) continue;
    ++tried;
    CHECK(moments(polar(k, z)).volume >= r.polar_volume - 1e-12);
  }
}

TEST_CASE("newton residuals contract at least quadratically near the end") {
  const Polytope k = random_body(3, 55);
  const SantaloResult r = santalo_point(k);
  REQUIRE(r.residual_history.size() >= 2);
  CHECK(r.residual_history.back() <= 1e-10);
  const auto& h = r.residual_history;
  // once the residual is small the next step should square it (up to a
  // problem-dependent constant)
  for (std::size_t i = 0; i + 1 < h.size(); ++i)
    if (h[i] < 1e-4) CHECK(h[i + 1] <= 100.0 * h[i] * h[i] + 1e-12);
}

TEST_CASE("volume products of model bodies") {
  // centered cube: vp = 2^n * 2^n/n!
  const VolumeProductResult sq = volume_product(unit_square());
  CHECK(sq.vp == doctest::Approx(8.0).epsilon(1e-10));
  CHECK(sq.body_volume == doctest::Approx(4.0));
  CHECK(sq.polar_volume == doctest::Approx(2.0));

  for (int n = 2; n <= 4; ++n) {
    const RegularSimplex s = build_regular_simplex(n);
    const VolumeProductResult r = volume_product(s.poly);
    CHECK(r.vp == doctest::Approx(oracle::simplex_vp(n)).epsilon(1e-9));
    CHECK(r.body_volume ==
          doctest::Approx(oracle::simplex_volume(n)).epsilon(1e-10));
  }
}

TEST_CASE("volume product is affine invariant") {
  const Polytope k = random_body(2, 63);
  Mat m(2, 2);
  m << 1.7, 0.6, -0.2, 0.9;
  Vec t(2);
  t << 0.8, -0.3;
  const double a = volume_product(k).vp;
  const double b = volume_product(affine_image(k, m, t)).vp;
  CHECK(b == doctest::Approx(a).epsilon(1e-7));
}

TEST_CASE("volume product sits between the simplex and the ball") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const Polytope k = random_body(2, 1000 + seed, 10);
    const double vp = volume_product(k).vp;
    CHECK(vp >= oracle::simplex_vp(2) - 1e-9);
    CHECK(vp <= oracle::ball_volume(2) * oracle::ball_volume(2) + 1e-6);
  }
}

TEST_CASE("santalo point beats a brute-force grid scan") {
  const Polytope k = random_body(2, 201, 9);
  const SantaloResult r = santalo_point(k);

  // coarse scan over an axis-aligned box around the centroid
  const Vec c = moments(k).centroid();
  double best = 1e300;
  Vec best_z = c;
  const int g = 60;
  for (int i = 0; i <= g; ++i)
    for (int j = 0; j <= g; ++j) {
      Vec z = c + v2((i - g / 2) * 0.01, (j - g / 2) * 0.01);
      if (!contains(k, z, -1e-9)) continue;
      const double a = oracle::polar_area_2d(k.halfspaces(), z);
      if (a > 0 && a < best) {
        best = a;
        best_z = z;
      }
    }
  CHECK((r.point - best_z).norm() < 0.02);  // within one grid diagonal
  CHECK(r.polar_volume <= best + 1e-12);
}

TEST_CASE("unit ball volumes match the closed form") {
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
  CHECK(unit_ball_volume(2) == doctest::Approx(M_PI));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0));
  CHECK(unit_ball_volume(4) == doctest::Approx(M_PI * M_PI / 2.0));
  for (int n = 1; n <= 6; ++n)
    CHECK(unit_ball_volume(n) == doctest::Approx(oracle::ball_volume(n)));
}
