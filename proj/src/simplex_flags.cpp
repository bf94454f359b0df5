#include "mahler/simplex_flags.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "mahler/errors.hpp"
#include "mahler/numkit.hpp"

namespace mahler {

namespace {

double factorial_d(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double origin_margin(const Polytope& k) {
  double m = kInf;
  for (const auto& h : k.halfspaces()) m = std::min(m, h.b / h.a.norm());
  return m;
}

}  // namespace

RegularSimplex build_regular_simplex(int n) {
  if (n < 2 || n > 6)
    throw GeomError("build_regular_simplex: n must be between 2 and 6, got " +
                    std::to_string(n));

  // Helmert rows span the sum-zero hyperplane of R^(n+1); mapping the
  // centered standard-basis vectors through them and rescaling to unit
  // length gives vertices with pairwise inner product exactly -1/n.
  Mat helmert(n, n + 1);
  helmert.setZero();
  for (int k = 1; k <= n; ++k) {
    const double norm = std::sqrt(k * (k + 1.0));
    for (int j = 0; j < k; ++j) helmert(k - 1, j) = 1.0 / norm;
    helmert(k - 1, k) = -k / norm;
  }
  const double scale = std::sqrt((n + 1.0) / n);

  RegularSimplex s;
  s.n = n;
  for (int i = 0; i <= n; ++i) {
    Vec u = Vec::Constant(n + 1, -1.0 / (n + 1.0));
    u[i] += 1.0;
    s.verts.push_back(scale * (helmert * u));
  }
  s.poly = convex_hull(s.verts);
  s.polar_poly = polar(s.poly, Vec::Zero(n));
  return s;
}

std::vector<Face> faces_of(const RegularSimplex& s) {
  const int m = s.n + 1;
  std::vector<Face> faces;
  for (unsigned mask = 1; mask + 1 < (1u << m); ++mask) {
    Face f;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) f.idx.push_back(i);
    f.k = static_cast<int>(f.idx.size()) - 1;
    f.centroid = Vec::Zero(s.n);
    for (int i : f.idx) f.centroid += s.verts[i];
    f.centroid /= static_cast<double>(f.idx.size());
    f.dual_centroid = f.centroid / f.centroid.squaredNorm();
    faces.push_back(std::move(f));
  }
  std::sort(faces.begin(), faces.end(), [](const Face& a, const Face& b) {
    if (a.k != b.k) return a.k < b.k;
    return a.idx < b.idx;
  });
  return faces;
}

std::vector<Flag> flags_of(const RegularSimplex& s) {
  std::vector<int> perm(s.n + 1);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Flag> flags;
  do {
    // dropping the last entry is injective: it is determined by the rest
    flags.emplace_back(perm.begin(), perm.end() - 1);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return flags;
}

double sandwich_delta(const Polytope& k, const RegularSimplex& s) {
  if (k.dim() != s.n)
    throw GeomError("sandwich_delta: body dimension " +
                    std::to_string(k.dim()) + " does not match simplex n " +
                    std::to_string(s.n));
  for (const auto& v : k.vertices())
    if (!contains(s.poly, v, 1e-9))
      throw GeomError("sandwich_delta: body vertex outside the simplex");
  const double margin = origin_margin(k);
  if (margin <= 0.0)
    throw NotInteriorError("sandwich_delta: origin not interior to the body",
                           margin);

  // How far out each vertex ray reaches before leaving K.
  double reach = kInf;
  for (int j = 0; j <= s.n; ++j) {
    double t = kInf;
    for (const auto& h : k.halfspaces()) {
      const double d = h.a.dot(s.verts[j]);
      if (d > 1e-12 * h.a.norm()) t = std::min(t, h.b / d);
    }
    reach = std::min(reach, t);
  }
  return std::clamp(1.0 - reach, 0.0, 1.0);
}

namespace {

// Shared LP: maximize t subject to x in the hull of body_verts and
// <u, x> = t * h for every u in face_verts, where h = |c|^2 = <u, c>.
TangentPoint tangent_core(const std::vector<Vec>& body_verts,
                          const std::vector<Vec>& face_verts, const Vec& c) {
  const int m = static_cast<int>(body_verts.size());
  const double h = c.squaredNorm();

  LinearProgram lp(m + 1);  // m hull weights, then t
  Vec obj = Vec::Zero(m + 1);
  obj[m] = 1.0;
  lp.set_objective(obj);
  lp.set_free(m);

  Vec ones = Vec::Zero(m + 1);
  ones.head(m).setOnes();
  lp.add_equality(ones, 1.0);
  for (const auto& u : face_verts) {
    Vec row(m + 1);
    for (int i = 0; i < m; ++i) row[i] = u.dot(body_verts[i]);
    row[m] = -h;
    lp.add_equality(row, 0.0);
  }

  const LpSolution sol = solve_lp(lp);
  TangentPoint tp;
  tp.t = sol.x[m];
  tp.x = Vec::Zero(c.size());
  for (int i = 0; i < m; ++i) tp.x += sol.x[i] * body_verts[i];
  tp.y = tp.t * c;
  return tp;
}

}  // namespace

TangentPoint tangent_touch(const Polytope& k, const RegularSimplex& s,
                           const Face& f) {
  std::vector<Vec> face_verts;
  for (int i : f.idx) face_verts.push_back(s.verts[i]);
  return tangent_core(k.vertices(), face_verts, f.centroid);
}

TangentPoint tangent_touch_dual(const Polytope& k_polar,
                                const RegularSimplex& s, const Face& f) {
  // The dual face is spanned by the polar simplex vertices -n v_j over the
  // complementary index set, and its centroid is c_F / |c_F|^2.
  std::vector<bool> in_face(s.n + 1, false);
  for (int i : f.idx) in_face[i] = true;
  std::vector<Vec> face_verts;
  for (int j = 0; j <= s.n; ++j)
    if (!in_face[j]) face_verts.push_back(-double(s.n) * s.verts[j]);
  return tangent_core(k_polar.vertices(), face_verts, f.dual_centroid);
}

FlagSystem build_flag_system(const Polytope& k, const RegularSimplex& s) {
  FlagSystem sys;
  sys.delta = sandwich_delta(k, s);
  sys.body_polar = polar(k, Vec::Zero(s.n));
  sys.faces = faces_of(s);
  sys.flags = flags_of(s);
  sys.tangents.reserve(sys.faces.size());
  for (const auto& f : sys.faces) {
    const TangentPoint primal = tangent_touch(k, s, f);
    const TangentPoint dual = tangent_touch_dual(sys.body_polar, s, f);
    TangentData td;
    td.t = primal.t;
    td.x = primal.x;
    td.y = primal.y;
    td.t_star = dual.t;
    td.x_star = dual.x;
    td.y_star = dual.y;
    if (std::abs(td.t * td.t_star - 1.0) > 1e-9) {
      std::ostringstream msg;
      msg << "build_flag_system: tangency parameters violate t * t_star = 1 "
             "(got "
          << td.t * td.t_star << ")";
      throw GeomError(msg.str());
    }
    sys.tangents.push_back(std::move(td));
  }
  return sys;
}

namespace {

struct CellAccum {
  FlagCells out;
  double signed_sum = 0.0;

  void add(const Mat& cell, double ref_sign, double inv_nfact) {
    const double d = cell.determinant();
    out.cells.push_back(cell);
    out.abs_volume += std::abs(d) * inv_nfact;
    signed_sum += ref_sign * d * inv_nfact;
  }
  void finish() {
    out.signed_volume = std::abs(signed_sum);
    out.overlap = std::abs(out.abs_volume - out.signed_volume) > 1e-9;
  }
};

}  // namespace

FlagPolytopes build_flag_polytopes(const RegularSimplex& s,
                                   const FlagSystem& sys) {
  const int n = s.n;
  const double inv_nfact = 1.0 / factorial_d(n);

  // Face lookup by sorted vertex set.
  std::map<std::vector<int>, int> face_index;
  for (size_t i = 0; i < sys.faces.size(); ++i)
    face_index[sys.faces[i].idx] = static_cast<int>(i);

  CellAccum p, pp, q, qp;
  bool p_in = true, pp_in = true, q_sand = true, qp_sand = true;
  const double t_star_hi =
      sys.delta < 1.0 ? 1.0 / (1.0 - sys.delta) : kInf;

  for (const auto& flag : sys.flags) {
    Mat cell_p(n, n), cell_pp(n, n), cell_q(n, n), cell_qp(n, n);
    Mat ref(n, n), ref_dual(n, n);
    std::vector<int> prefix;
    for (int kk = 0; kk < n; ++kk) {
      prefix.push_back(flag[kk]);
      std::vector<int> key = prefix;
      std::sort(key.begin(), key.end());
      const int fi = face_index.at(key);
      const Face& f = sys.faces[fi];
      const TangentData& td = sys.tangents[fi];
      cell_p.col(kk) = td.x;
      cell_q.col(kk) = td.y;
      cell_pp.col(kk) = td.x_star;
      cell_qp.col(kk) = td.y_star;
      ref.col(kk) = f.centroid;
      ref_dual.col(kk) = f.dual_centroid;

      // The t-ranges double as the sandwich checks: y = t c_F lies in
      // lambda * simplex exactly when t <= lambda, and symmetrically for
      // the dual side.
      if (td.t > 1.0 + 1e-9 || td.t < 1.0 - sys.delta - 1e-9) q_sand = false;
      if (td.t_star < 1.0 - 1e-9 || td.t_star > t_star_hi + 1e-9)
        qp_sand = false;
    }

    // Orientation of this flag's barycentric cell in the simplex itself;
    // the perturbed cells inherit it, so agreeing signs mean no overlap.
    const double eps = ref.determinant() >= 0.0 ? 1.0 : -1.0;
    const double eps_dual = ref_dual.determinant() >= 0.0 ? 1.0 : -1.0;
    p.add(cell_p, eps, inv_nfact);
    q.add(cell_q, eps, inv_nfact);
    pp.add(cell_pp, eps_dual, inv_nfact);
    qp.add(cell_qp, eps_dual, inv_nfact);
  }
  p.finish();
  q.finish();
  pp.finish();
  qp.finish();

  // Cell-vertex containment. x in K is equivalent to <x, w> <= 1 over the
  // polar's vertices, so the polar alone settles both sides.
  for (const auto& td : sys.tangents) {
    double sup = -kInf;
    for (const auto& w : sys.body_polar.vertices())
      sup = std::max(sup, td.x.dot(w));
    if (sup > 1.0 + 1e-9) p_in = false;
    if (!contains(sys.body_polar, td.x_star, 1e-9)) pp_in = false;
  }

  FlagPolytopes fp;
  fp.p = std::move(p.out);
  fp.q = std::move(q.out);
  fp.p_prime = std::move(pp.out);
  fp.q_prime = std::move(qp.out);
  fp.q_sandwiched = q_sand;
  fp.q_prime_sandwiched = qp_sand;
  fp.p_in_body = p_in;
  fp.p_prime_in_polar = pp_in;
  return fp;
}

FlagPolytopes build_flag_polytopes(const Polytope& k, const RegularSimplex& s) {
  return build_flag_polytopes(s, build_flag_system(k, s));
}

LemmaReport lemma_report(const Polytope& k, const RegularSimplex& s) {
  const FlagSystem sys = build_flag_system(k, s);
  const FlagPolytopes fp = build_flag_polytopes(s, sys);

  LemmaReport rep;
  rep.n = s.n;
  rep.delta = sys.delta;

  rep.facet_centroids_ok = true;
  for (int j = 0; j <= s.n; ++j) {
    const Vec c = -s.verts[j] / double(s.n);
    if (!contains(k, c, 1e-9)) rep.facet_centroids_ok = false;
  }

  double pairing = 0.0, plane = 0.0, primal_gap = 0.0, dual_gap = 0.0,
         t_prod = 0.0;
  bool t_range_ok = true;
  for (size_t i = 0; i < sys.faces.size(); ++i) {
    const Face& f = sys.faces[i];
    const TangentData& td = sys.tangents[i];
    pairing = std::max(pairing, std::abs(td.x.dot(td.x_star) - 1.0));
    pairing = std::max(pairing, std::abs(td.y.dot(td.y_star) - 1.0));
    plane = std::max(plane, std::abs((td.x - td.y).dot(f.centroid)));
    plane = std::max(plane, std::abs((td.x_star - td.y_star).dot(f.centroid)));
    primal_gap = std::max(primal_gap, (td.x - td.y).norm());
    dual_gap = std::max(dual_gap, (td.x_star - td.y_star).norm());
    t_prod = std::max(t_prod, std::abs(td.t * td.t_star - 1.0));
    if (td.t > 1.0 + 1e-9 || td.t < 1.0 - sys.delta - 1e-9) t_range_ok = false;
  }
  rep.lemma31_max_pairing_dev = pairing;
  rep.lemma31_max_plane_dev = plane;
  rep.lemma31_max_primal_gap = primal_gap;
  rep.lemma31_max_dual_gap = dual_gap;
  rep.lemma31_max_t_product_dev = t_prod;
  rep.lemma31_pass = pairing <= 1e-9 && plane <= 1e-9 &&
                     primal_gap <= 2.0 * sys.delta + 1e-9 &&
                     dual_gap <= 2.0 * s.n * sys.delta + 1e-9 &&
                     t_prod <= 1e-9 && t_range_ok;

  rep.vol_body = moments(k).volume;
  rep.vol_polar = moments(sys.body_polar).volume;
  rep.vol_simplex = moments(s.poly).volume;
  rep.vol_simplex_polar = moments(s.polar_poly).volume;

  rep.vol_p = fp.p.abs_volume;
  rep.vol_p_prime = fp.p_prime.abs_volume;
  rep.vol_q = fp.q.abs_volume;
  rep.vol_q_prime = fp.q_prime.abs_volume;
  rep.signed_p = fp.p.signed_volume;
  rep.signed_p_prime = fp.p_prime.signed_volume;
  rep.signed_q = fp.q.signed_volume;
  rep.signed_q_prime = fp.q_prime.signed_volume;
  rep.overlap_p = fp.p.overlap;
  rep.overlap_p_prime = fp.p_prime.overlap;
  rep.overlap_q = fp.q.overlap;
  rep.overlap_q_prime = fp.q_prime.overlap;
  rep.containment_ok = fp.p_in_body && fp.p_prime_in_polar &&
                       fp.q_sandwiched && fp.q_prime_sandwiched;

  rep.lemma32_margin =
      rep.vol_q * rep.vol_q_prime - rep.vol_simplex * rep.vol_simplex_polar;
  rep.lemma32_pass = rep.lemma32_margin >= -1e-9;

  const double nan = std::numeric_limits<double>::quiet_NaN();
  rep.ratios_applicable = sys.delta > 1e-12;
  if (rep.ratios_applicable) {
    const double d = sys.delta;
    rep.lemma33_p_ratio = std::abs(rep.vol_p - rep.vol_q) / (d * d);
    rep.lemma33_p_prime_ratio =
        std::abs(rep.vol_p_prime - rep.vol_q_prime) / (d * d);
    rep.lemma34_ratio =
        std::max(rep.vol_body - rep.vol_p, rep.vol_polar - rep.vol_p_prime) / d;
    rep.lemma34_pass = rep.lemma34_ratio > 0.0;
    rep.prop35_ratio = (rep.vol_body * rep.vol_polar -
                        rep.vol_simplex * rep.vol_simplex_polar) /
                       d;
    rep.prop35_pass = rep.prop35_ratio > 0.0;
  } else {
    rep.lemma33_p_ratio = nan;
    rep.lemma33_p_prime_ratio = nan;
    rep.lemma34_ratio = nan;
    rep.lemma34_pass = false;
    rep.prop35_ratio = nan;
    rep.prop35_pass = false;
  }
  return rep;
}

nlohmann::json report_to_json(const LemmaReport& rep) {
  nlohmann::json j;
  j["n"] = rep.n;
  j["delta"] = rep.delta;
  j["facet_centroids_ok"] = rep.facet_centroids_ok;
  j["lemma31"] = {{"max_pairing_dev", rep.lemma31_max_pairing_dev},
                  {"max_plane_dev", rep.lemma31_max_plane_dev},
                  {"max_primal_gap", rep.lemma31_max_primal_gap},
                  {"max_dual_gap", rep.lemma31_max_dual_gap},
                  {"max_t_product_dev", rep.lemma31_max_t_product_dev},
                  {"pass", rep.lemma31_pass}};
  j["volumes"] = {{"body", rep.vol_body},
                  {"polar", rep.vol_polar},
                  {"simplex", rep.vol_simplex},
                  {"simplex_polar", rep.vol_simplex_polar},
                  {"P", rep.vol_p},
                  {"P_prime", rep.vol_p_prime},
                  {"Q", rep.vol_q},
                  {"Q_prime", rep.vol_q_prime},
                  {"P_signed", rep.signed_p},
                  {"P_prime_signed", rep.signed_p_prime},
                  {"Q_signed", rep.signed_q},
                  {"Q_prime_signed", rep.signed_q_prime}};
  j["overlap"] = {{"P", rep.overlap_p},
                  {"P_prime", rep.overlap_p_prime},
                  {"Q", rep.overlap_q},
                  {"Q_prime", rep.overlap_q_prime}};
  j["containment_ok"] = rep.containment_ok;
  j["lemma32_margin"] = rep.lemma32_margin;
  j["lemma32_pass"] = rep.lemma32_pass;
  j["ratios_applicable"] = rep.ratios_applicable;
  j["lemma33_p_ratio"] = rep.lemma33_p_ratio;
  j["lemma33_p_prime_ratio"] = rep.lemma33_p_prime_ratio;
  j["lemma34_ratio"] = rep.lemma34_ratio;
  j["lemma34_pass"] = rep.lemma34_pass;
  j["prop35_ratio"] = rep.prop35_ratio;
  j["prop35_pass"] = rep.prop35_pass;
  return j;
}

}  // namespace mahler
