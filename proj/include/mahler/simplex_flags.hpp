#pragma once

// The regular simplex, its face lattice, and the tangency construction that
// assembles flag polytopes P, P', Q, Q' for a body K sandwiched between
// (1-delta) Delta_n and Delta_n.
//
// For a face F spanned by vertex set S, the tangency plane at parameter t is
// t H_F with H_F = c_F + F^perp, which is exactly { x : <v_i, x> = t |c_F|^2
// for all i in S }. tangent_touch maximizes t over x in K by linear
// programming; the same construction applied to the polar body and the dual
// face yields the starred data, with t * t_star = 1.

#include <nlohmann/json.hpp>

#include <vector>

#include "mahler/polarity.hpp"
#include "mahler/polytope.hpp"

namespace mahler {

struct RegularSimplex {
  int n = 0;
  std::vector<Vec> verts;  // n+1 unit vectors with pairwise inner product -1/n
  Polytope poly;           // their hull
  Polytope polar_poly;     // polar at the origin; vertices are -n * verts
};

RegularSimplex build_regular_simplex(int n);  // 2 <= n <= 6

struct Face {
  std::vector<int> idx;  // sorted vertex ids, 1 <= size <= n (proper faces)
  int k = 0;             // dimension, idx.size() - 1
  Vec centroid;          // |centroid|^2 = (n-k) / (n (k+1))
  Vec dual_centroid;     // centroid / |centroid|^2
};

// All 2^(n+1) - 2 proper faces, sorted by (dimension, vertex set).
std::vector<Face> faces_of(const RegularSimplex& s);

// A flag is a maximal chain of faces, encoded by the ordered distinct vertex
// ids j0..j_{n-1}; face k of the chain is {j0..jk}. There are (n+1)! flags.
using Flag = std::vector<int>;
std::vector<Flag> flags_of(const RegularSimplex& s);

// Largest shrink seen along the vertex rays: 1 - min_j max{ t : t v_j in K }.
// Requires K inside the simplex (vertexwise) with the origin interior.
double sandwich_delta(const Polytope& k, const RegularSimplex& s);

struct TangentPoint {
  double t = 0.0;
  Vec x;  // touching point, in K intersect t H_F
  Vec y;  // ray point t * c_F
};

TangentPoint tangent_touch(const Polytope& k, const RegularSimplex& s,
                           const Face& f);
// Same construction on a polar body against the dual face of f. Pass
// polar(k, 0) as k_polar.
TangentPoint tangent_touch_dual(const Polytope& k_polar,
                                const RegularSimplex& s, const Face& f);

struct TangentData {
  double t = 0.0, t_star = 0.0;
  Vec x, y, x_star, y_star;
};

// Everything per-body the flag construction needs, computed once.
struct FlagSystem {
  double delta = 0.0;
  Polytope body_polar;
  std::vector<Face> faces;
  std::vector<TangentData> tangents;  // parallel to faces
  std::vector<Flag> flags;
};

FlagSystem build_flag_system(const Polytope& k, const RegularSimplex& s);

struct FlagCells {
  std::vector<Mat> cells;     // n x n; columns are the cell points, origin implied
  double abs_volume = 0.0;    // sum of |det| / n!
  double signed_volume = 0.0; // |sum of oriented det| / n!, orientation from
                              // the simplex's own barycentric cells
  bool overlap = false;       // abs and signed differ by more than 1e-9
};

struct FlagPolytopes {
  FlagCells p, p_prime, q, q_prime;
  bool p_in_body = false;
  bool p_prime_in_polar = false;
  bool q_sandwiched = false;        // (1-delta) simplex inside Q inside simplex
  bool q_prime_sandwiched = false;  // dual sandwich for Q'
};

FlagPolytopes build_flag_polytopes(const Polytope& k, const RegularSimplex& s);
FlagPolytopes build_flag_polytopes(const RegularSimplex& s,
                                   const FlagSystem& sys);

struct LemmaReport {
  int n = 0;
  double delta = 0.0;
  bool facet_centroids_ok = false;  // all facet centroids of the simplex in K

  double lemma31_max_pairing_dev = 0.0;    // |<x,x*> - 1|, |<y,y*> - 1|
  double lemma31_max_plane_dev = 0.0;      // |<x-y, c_F>|, |<x*-y*, c_F>|
  double lemma31_max_primal_gap = 0.0;     // max |x - y|, bounded by 2 delta
  double lemma31_max_dual_gap = 0.0;       // max |x*-y*|, bounded by 2 n delta
  double lemma31_max_t_product_dev = 0.0;  // |t t_star - 1|
  bool lemma31_pass = false;

  double vol_body = 0.0, vol_polar = 0.0;
  double vol_simplex = 0.0, vol_simplex_polar = 0.0;
  double vol_p = 0.0, vol_p_prime = 0.0, vol_q = 0.0, vol_q_prime = 0.0;
  double signed_p = 0.0, signed_p_prime = 0.0, signed_q = 0.0,
         signed_q_prime = 0.0;
  bool overlap_p = false, overlap_p_prime = false, overlap_q = false,
       overlap_q_prime = false;
  bool containment_ok = false;

  double lemma32_margin = 0.0;  // |Q||Q'| - |simplex||simplex polar|
  bool lemma32_pass = false;

  // Ratios below are NaN when delta == 0 (ratios_applicable == false).
  bool ratios_applicable = false;
  double lemma33_p_ratio = 0.0;        // ||P| - |Q|| / delta^2
  double lemma33_p_prime_ratio = 0.0;  // ||P'| - |Q'|| / delta^2
  double lemma34_ratio = 0.0;  // max(|K|-|P|, |K polar|-|P'|) / delta
  bool lemma34_pass = false;
  double prop35_ratio = 0.0;  // (|K||K polar| - |simplex||simplex polar|)/delta
  bool prop35_pass = false;
};

LemmaReport lemma_report(const Polytope& k, const RegularSimplex& s);
nlohmann::json report_to_json(const LemmaReport& rep);

}  // namespace mahler
