#include "mahler/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include "mahler/errors.hpp"
#include "mahler/numkit.hpp"
#include "mahler/polarity.hpp"

namespace mahler {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::VertexShrink: return "vertex-shrink";
    case Family::FacetCut: return "facet-cut";
    case Family::RandomSupport: return "random-support";
    case Family::Scaling: return "scaling";
  }
  return "unknown";
}

Family family_from_name(const std::string& name) {
  if (name == "vertex-shrink") return Family::VertexShrink;
  if (name == "facet-cut") return Family::FacetCut;
  if (name == "random-support") return Family::RandomSupport;
  if (name == "scaling") return Family::Scaling;
  throw IoError("unknown family '" + name +
                "' (expected vertex-shrink, facet-cut, random-support or "
                "scaling)");
}

double Rng::uniform() {
  return double(gen_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

Vec Rng::unit_vector(int n) {
  for (;;) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = gaussian();
    const double norm = v.norm();
    if (norm > 1e-12) return v / norm;
  }
}

std::uint64_t substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                        std::uint64_t c) {
  std::uint64_t h = splitmix(seed);
  h = splitmix(h ^ (a + 1));
  h = splitmix(h ^ (b + 1));
  h = splitmix(h ^ (c + 1));
  return h;
}

namespace {

void validate_spec(const GeneratorSpec& spec, const RegularSimplex& s) {
  if (spec.n != s.n)
    throw GeomError("generate: spec dimension does not match the simplex");
  if (!(spec.delta >= 0.0 && spec.delta <= 0.05))
    throw GeomError("generate: delta must lie in [0, 0.05], got " +
                    std::to_string(spec.delta));
  if (!(spec.cut_jitter >= 0.0 && spec.cut_jitter <= 0.1))
    throw GeomError("generate: cut_jitter must lie in [0, 0.1]");
  if (spec.cloud_points < 0)
    throw GeomError("generate: cloud_points must be nonnegative");
  if (!spec.shrink_fractions.empty()) {
    if (static_cast<int>(spec.shrink_fractions.size()) != spec.n + 1)
      throw GeomError("generate: shrink_fractions needs n+1 entries");
    for (double f : spec.shrink_fractions)
      if (!(f >= 0.0 && f <= 1.0))
        throw GeomError("generate: shrink fractions must lie in [0, 1]");
  }
}

// Per-vertex shrink amounts delta * f_j with max f_j = 1, either from the
// spec override or drawn from the record's stream.
std::vector<double> shrink_profile(const GeneratorSpec& spec, Rng& rng) {
  std::vector<double> f = spec.shrink_fractions;
  if (f.empty())
    for (int j = 0; j <= spec.n; ++j) f.push_back(rng.uniform());
  const double mx = *std::max_element(f.begin(), f.end());
  if (mx > 0.0)
    for (double& x : f) x /= mx;
  return f;
}

// Barycentric sample with Dirichlet(1,...,1) weights: uniform on the simplex.
Vec sample_in_simplex(const RegularSimplex& s, Rng& rng) {
  Vec x = Vec::Zero(s.n);
  double wsum = 0.0;
  for (int j = 0; j <= s.n; ++j) {
    const double w = -std::log(1.0 - rng.uniform());
    x += w * s.verts[j];
    wsum += w;
  }
  return x / wsum;
}

}  // namespace

Polytope generate(const GeneratorSpec& spec, const RegularSimplex& s) {
  validate_spec(spec, s);
  const int n = spec.n;
  Rng rng(substream(spec.seed, static_cast<std::uint64_t>(spec.family), n,
                    spec.pattern_id));

  Polytope k;
  switch (spec.family) {
    case Family::VertexShrink: {
      const std::vector<double> f = shrink_profile(spec, rng);
      std::vector<Vec> pts;
      for (int j = 0; j <= n; ++j) pts.push_back(-s.verts[j] / double(n));
      for (int j = 0; j <= n; ++j)
        pts.push_back((1.0 - spec.delta * f[j]) * s.verts[j]);
      k = convex_hull(pts);
      break;
    }
    case Family::FacetCut: {
      const std::vector<double> f = shrink_profile(spec, rng);
      std::vector<Halfspace> hs = s.poly.halfspaces();
      for (int j = 0; j <= n; ++j) {
        Vec a = s.verts[j] + spec.cut_jitter * rng.unit_vector(n);
        a.normalize();
        // With jitter <= 0.1 the support over the simplex is attained at
        // v_j, so this cut meets the ray t v_j at exactly 1 - delta f_j and
        // misses the other vertex rays and all facet centroids.
        const double sup = support(s.poly, a);
        hs.push_back({a, sup - spec.delta * f[j] * a.dot(s.verts[j])});
      }
      k = halfspace_intersection(hs, Vec::Zero(n));
      break;
    }
    case Family::RandomSupport: {
      const std::vector<double> f = shrink_profile(spec, rng);
      std::vector<Vec> pts;
      for (int j = 0; j <= n; ++j) pts.push_back(-s.verts[j] / double(n));
      for (int j = 0; j <= n; ++j)
        pts.push_back((1.0 - spec.delta * f[j]) * s.verts[j]);
      const int cloud = spec.cloud_points > 0 ? spec.cloud_points : 2 * (n + 1);
      for (int i = 0; i < cloud; ++i) {
        const Vec x = sample_in_simplex(s, rng);
        pts.push_back((1.0 - spec.delta * rng.uniform()) * x);
      }
      k = convex_hull(pts);
      break;
    }
    case Family::Scaling: {
      std::vector<Vec> pts;
      for (int j = 0; j <= n; ++j)
        pts.push_back((1.0 - spec.delta) * s.verts[j]);
      k = convex_hull(pts);
      break;
    }
  }

  const double actual = sandwich_delta(k, s);
  if (actual > spec.delta * (1.0 + 1e-6) + 1e-12)
    throw GeomError("generate: sandwich parameter " + std::to_string(actual) +
                    " exceeds requested delta " + std::to_string(spec.delta));
  return k;
}

Polytope generate(const GeneratorSpec& spec) {
  return generate(spec, build_regular_simplex(spec.n));
}

namespace {

void validate_config(const SweepConfig& cfg) {
  if (cfg.n < 2 || cfg.n > 4)
    throw GeomError("sweep: n must be 2, 3 or 4");
  if (cfg.deltas.empty()) throw GeomError("sweep: empty delta grid");
  for (size_t i = 0; i < cfg.deltas.size(); ++i) {
    if (!(cfg.deltas[i] > 0.0 && cfg.deltas[i] <= 0.05))
      throw GeomError("sweep: deltas must lie in (0, 0.05]");
    if (i > 0 && !(cfg.deltas[i] < cfg.deltas[i - 1]))
      throw GeomError("sweep: delta grid must be strictly decreasing");
  }
  if (cfg.samples < 1) throw GeomError("sweep: samples must be positive");
  if (cfg.jobs < 1) throw GeomError("sweep: jobs must be positive");
}

void mark_failed(ExperimentRecord& rec, const std::string& what) {
  rec.failed = true;
  rec.error = what;
  rec.delta_actual = kNan;
  rec.hausdorff = kNan;
  rec.santalo = Vec::Constant(rec.spec.n, kNan);
  rec.vol_body = rec.vol_polar_s = rec.vp = rec.vol_polar_0_product = kNan;
  rec.report = LemmaReport{};
  rec.report.lemma32_margin = kNan;
  rec.report.lemma33_p_ratio = kNan;
  rec.report.lemma33_p_prime_ratio = kNan;
  rec.report.lemma34_ratio = kNan;
  rec.report.prop35_ratio = kNan;
}

ExperimentRecord compute_record(const SweepConfig& cfg,
                                const RegularSimplex& s, int idx) {
  ExperimentRecord rec;
  rec.record_index = idx;
  rec.spec.family = cfg.family;
  rec.spec.n = cfg.n;
  rec.spec.delta = cfg.deltas[idx / cfg.samples];
  rec.spec.seed = cfg.seed;
  rec.spec.pattern_id = static_cast<std::uint64_t>(idx % cfg.samples);
  rec.spec.shrink_fractions = cfg.shrink_fractions;

  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Polytope k = generate(rec.spec, s);
    rec.report = lemma_report(k, s);
    rec.delta_actual = rec.report.delta;
    rec.hausdorff = hausdorff(k, s.poly);
    const VolumeProductResult v = volume_product(k);
    rec.santalo = v.santalo.point;
    rec.vol_body = v.body_volume;
    rec.vol_polar_s = v.polar_volume;
    rec.vp = v.vp;
    rec.vol_polar_0_product = rec.report.vol_body * rec.report.vol_polar;
  } catch (const std::exception& e) {
    mark_failed(rec, e.what());
  }
  if (cfg.timing) {
    const auto t1 = std::chrono::steady_clock::now();
    rec.runtime_ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
  }
  if (rec.santalo.size() == 0) rec.santalo = Vec::Constant(cfg.n, kNan);
  return rec;
}

}  // namespace

std::vector<ExperimentRecord> run_records(const SweepConfig& cfg) {
  validate_config(cfg);
  const RegularSimplex s = build_regular_simplex(cfg.n);
  const int total = static_cast<int>(cfg.deltas.size()) * cfg.samples;
  std::vector<ExperimentRecord> out(total);

  const int jobs = std::clamp(cfg.jobs, 1, total);
  if (jobs == 1) {
    for (int i = 0; i < total; ++i) out[i] = compute_record(cfg, s, i);
  } else {
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (int i = next.fetch_add(1); i < total; i = next.fetch_add(1))
        out[i] = compute_record(cfg, s, i);
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

namespace {

std::string num17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<ExperimentRecord>& records) {
  if (records.empty()) throw GeomError("write_csv: no records");
  const int n = records.front().spec.n;

  os << "family,n,seed,record_index,delta_spec,delta_actual,hausdorff";
  for (int i = 1; i <= n; ++i) os << ",santalo_x" << i;
  os << ",vol_K,vol_polar_s,vp,vol_polar_0_product,lemma32_margin,"
        "lemma33_P_ratio,lemma33_Pp_ratio,lemma34_ratio,prop35_ratio,"
        "facet_centroids_ok,runtime_ms\n";

  for (const auto& r : records) {
    os << family_name(r.spec.family) << ',' << r.spec.n << ',' << r.spec.seed
       << ',' << r.record_index << ',' << num17(r.spec.delta) << ','
       << num17(r.delta_actual) << ',' << num17(r.hausdorff);
    for (int i = 0; i < n; ++i)
      os << ',' << num17(i < r.santalo.size() ? r.santalo[i] : kNan);
    os << ',' << num17(r.vol_body) << ',' << num17(r.vol_polar_s) << ','
       << num17(r.vp) << ',' << num17(r.vol_polar_0_product) << ','
       << num17(r.report.lemma32_margin) << ','
       << num17(r.report.lemma33_p_ratio) << ','
       << num17(r.report.lemma33_p_prime_ratio) << ','
       << num17(r.report.lemma34_ratio) << ','
       << num17(r.report.prop35_ratio) << ','
       << (r.report.facet_centroids_ok ? 1 : 0) << ','
       << num17(r.runtime_ms) << '\n';
  }
}

void write_csv(const std::string& path,
               const std::vector<ExperimentRecord>& records) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  write_csv(f, records);
  if (!f) throw IoError("write failed on '" + path + "'");
}

namespace {

void take_min(double& acc, double v) {
  if (std::isnan(v)) return;
  acc = std::isnan(acc) ? v : std::min(acc, v);
}
void take_max(double& acc, double v) {
  if (std::isnan(v)) return;
  acc = std::isnan(acc) ? v : std::max(acc, v);
}

SweepSummary base_summary(const SweepConfig& cfg, const char* kind,
                          std::vector<ExperimentRecord> records) {
  SweepSummary sum;
  sum.kind = kind;
  sum.family = cfg.family;
  sum.n = cfg.n;
  sum.deltas = cfg.deltas;
  sum.samples = cfg.samples;
  sum.seed = cfg.seed;

  const int levels = static_cast<int>(cfg.deltas.size());
  sum.per_delta.assign(levels, DeltaAggregate{});
  for (int L = 0; L < levels; ++L) {
    DeltaAggregate& a = sum.per_delta[L];
    a.delta = cfg.deltas[L];
    a.min_vp_excess = a.max_vp_excess = a.max_santalo_ratio = kNan;
    a.min_lemma32_margin = a.max_l33_p_raw = a.max_l33_pp_raw = kNan;
    a.min_lemma34_ratio = a.min_prop35_ratio = kNan;
  }
  for (const auto& r : records) {
    DeltaAggregate& a = sum.per_delta[r.record_index / cfg.samples];
    if (r.failed) {
      ++a.failures;
      ++sum.total_failures;
      sum.errors.push_back("record " + std::to_string(r.record_index) + ": " +
                           r.error);
      continue;
    }
    take_max(a.max_santalo_ratio,
             r.hausdorff > 1e-15 ? r.santalo.norm() / r.hausdorff : 0.0);
    take_min(a.min_lemma32_margin, r.report.lemma32_margin);
    take_max(a.max_l33_p_raw, std::abs(r.report.vol_p - r.report.vol_q));
    take_max(a.max_l33_pp_raw,
             std::abs(r.report.vol_p_prime - r.report.vol_q_prime));
    take_min(a.min_lemma34_ratio, r.report.lemma34_ratio);
    take_min(a.min_prop35_ratio, r.report.prop35_ratio);
  }
  sum.records = std::move(records);
  return sum;
}

}  // namespace

SweepSummary run_theorem_sweep(const SweepConfig& cfg) {
  SweepSummary sum = base_summary(cfg, "theorem", run_records(cfg));
  const RegularSimplex s = build_regular_simplex(cfg.n);
  sum.vp_baseline = volume_product(s.poly).vp;
  sum.affine_trivial = cfg.family == Family::Scaling;

  sum.all_vp_above_baseline = sum.total_failures == 0;
  for (const auto& r : sum.records) {
    if (r.failed) continue;
    const double excess = r.vp - sum.vp_baseline;
    DeltaAggregate& a = sum.per_delta[r.record_index / cfg.samples];
    take_min(a.min_vp_excess, excess);
    take_max(a.max_vp_excess, excess);
    if (!(excess > 0.0)) sum.all_vp_above_baseline = false;
  }

  // Scaling rows have volume product exactly at the baseline (the family is
  // a pure affine rescaling), so a slope fit would be meaningless.
  if (!sum.affine_trivial) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& a : sum.per_delta)
      if (!std::isnan(a.min_vp_excess)) pts.push_back({a.delta, a.min_vp_excess});
    if (pts.size() >= 3) {
      const FitResult fit = fit_linear(pts);
      sum.theorem_slope = fit.slope;
      sum.theorem_intercept = fit.intercept;
      sum.theorem_residual = fit.residual;
    }
  }
  return sum;
}

SweepSummary run_santalo_stability(const SweepConfig& cfg) {
  SweepSummary sum = base_summary(cfg, "stability", run_records(cfg));

  double mx = kNan, small_sum = 0.0, large_sum = 0.0;
  int small_count = 0, large_count = 0;
  const int half = static_cast<int>(cfg.deltas.size()) / 2;
  for (const auto& r : sum.records) {
    if (r.failed) continue;
    const double ratio =
        r.hausdorff > 1e-15 ? r.santalo.norm() / r.hausdorff : 0.0;
    take_max(mx, ratio);
    if (r.record_index / cfg.samples < half) {
      large_sum += ratio;
      ++large_count;
    } else {
      small_sum += ratio;
      ++small_count;
    }
  }
  sum.stability_max_ratio = mx;
  sum.stability_large_delta_mean = large_count ? large_sum / large_count : kNan;
  sum.stability_small_delta_mean = small_count ? small_sum / small_count : kNan;
  // Bounded means: shrinking delta must not inflate the ratio.
  sum.stability_no_upward_trend =
      small_count > 0 && large_count > 0 &&
      sum.stability_small_delta_mean <=
          1.2 * sum.stability_large_delta_mean + 1e-12;
  return sum;
}

SweepSummary run_lemma_suite(const SweepConfig& cfg) {
  SweepSummary sum = base_summary(cfg, "lemma", run_records(cfg));

  double margin = kNan, l34 = kNan, l35 = kNan;
  for (const auto& a : sum.per_delta) {
    take_min(margin, a.min_lemma32_margin);
    take_min(l34, a.min_lemma34_ratio);
    take_min(l35, a.min_prop35_ratio);
  }
  sum.min_lemma32_margin = margin;
  sum.min_lemma34_ratio = l34;
  sum.min_prop35_ratio = l35;

  // Worst-case | |P|-|Q| | per level against delta, on log-log axes. Levels
  // where the difference sits at the noise floor (identically glued cells)
  // carry no order information and are dropped.
  auto fit_side = [&](bool primal) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& a : sum.per_delta) {
      const double raw = primal ? a.max_l33_p_raw : a.max_l33_pp_raw;
      if (!std::isnan(raw) && raw > 1e-13) pts.push_back({a.delta, raw});
    }
    if (pts.size() < 3) return kNan;
    return fit_loglog(pts).exponent;
  };
  sum.lemma33_p_exponent = fit_side(true);
  sum.lemma33_pp_exponent = fit_side(false);
  return sum;
}

SweepSummary run_square_order(const Polytope& body, int samples,
                              std::uint64_t seed) {
  if (samples < 2) throw GeomError("run_square_order: samples must be >= 2");
  SweepSummary sum;
  sum.kind = "square";
  sum.n = body.dim();
  sum.samples = samples;
  sum.seed = seed;

  const VolumeProductResult v = volume_product(body);
  const Vec s = v.santalo.point;
  const double r0 = inradius_at(body, s);
  const double base = v.polar_volume;
  sum.square_r0 = r0;
  sum.vp_baseline = v.vp;

  Rng rng(substream(seed, 0x73712eull, body.dim(), samples));
  const int ndirs = std::max(1, samples / 2);
  std::vector<Vec> dirs;
  for (int i = 0; i < ndirs; ++i) dirs.push_back(rng.unit_vector(body.dim()));

  for (int shell = 0; shell < 5; ++shell) {
    const double rho = r0 / 2.0 * std::pow(2.0, -shell);
    double acc = 0.0;
    int count = 0;
    for (const auto& u : dirs) {
      for (double sign : {1.0, -1.0}) {  // antipodal pairs
        const Vec z = s + sign * rho * u;
        try {
          acc += moments(polar(body, z)).volume / base - 1.0;
          ++count;
        } catch (const NotInteriorError&) {
          ++sum.square_skipped;
        }
      }
    }
    if (count > 0) {
      sum.square_shell_rho.push_back(rho);
      sum.square_shell_mean.push_back(acc / count);
    }
  }

  std::vector<std::pair<double, double>> pts;
  for (size_t i = 0; i < sum.square_shell_rho.size(); ++i)
    if (sum.square_shell_mean[i] > 0.0)
      pts.push_back({sum.square_shell_rho[i], sum.square_shell_mean[i]});
  if (pts.size() >= 3) sum.square_exponent = fit_loglog(pts).exponent;
  return sum;
}

nlohmann::json summary_to_json(const SweepSummary& s) {
  nlohmann::json j;
  j["kind"] = s.kind;
  j["family"] = family_name(s.family);
  j["n"] = s.n;
  j["deltas"] = s.deltas;
  j["samples"] = s.samples;
  j["seed"] = s.seed;
  j["total_failures"] = s.total_failures;
  j["errors"] = s.errors;
  j["vp_baseline"] = s.vp_baseline;
  j["affine_trivial"] = s.affine_trivial;
  if (s.affine_trivial)
    j["note"] = "affine-trivial family: excluded from slope fits";
  j["all_vp_above_baseline"] = s.all_vp_above_baseline;
  j["theorem_fit"] = {{"slope", s.theorem_slope},
                      {"intercept", s.theorem_intercept},
                      {"residual", s.theorem_residual}};
  j["stability"] = {{"max_ratio", s.stability_max_ratio},
                    {"small_delta_mean", s.stability_small_delta_mean},
                    {"large_delta_mean", s.stability_large_delta_mean},
                    {"no_upward_trend", s.stability_no_upward_trend}};
  j["lemma"] = {{"min_lemma32_margin", s.min_lemma32_margin},
                {"lemma33_p_exponent", s.lemma33_p_exponent},
                {"lemma33_pp_exponent", s.lemma33_pp_exponent},
                {"min_lemma34_ratio", s.min_lemma34_ratio},
                {"min_prop35_ratio", s.min_prop35_ratio}};
  j["square"] = {{"r0", s.square_r0},
                 {"exponent", s.square_exponent},
                 {"shell_rho", s.square_shell_rho},
                 {"shell_mean", s.square_shell_mean},
                 {"skipped", s.square_skipped}};
  nlohmann::json per = nlohmann::json::array();
  for (const auto& a : s.per_delta) {
    per.push_back({{"delta", a.delta},
                   {"failures", a.failures},
                   {"min_vp_excess", a.min_vp_excess},
                   {"max_vp_excess", a.max_vp_excess},
                   {"max_santalo_ratio", a.max_santalo_ratio},
                   {"min_lemma32_margin", a.min_lemma32_margin},
                   {"max_l33_p_raw", a.max_l33_p_raw},
                   {"max_l33_pp_raw", a.max_l33_pp_raw},
                   {"min_lemma34_ratio", a.min_lemma34_ratio},
                   {"min_prop35_ratio", a.min_prop35_ratio}});
  }
  j["per_delta"] = per;
  return j;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

SweepSummary fit_from_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(f, line)) throw IoError("empty CSV '" + path + "'");
  const std::vector<std::string> header = split_csv_line(line);
  auto col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw IoError("CSV '" + path + "' is missing column '" + name + "'");
    return static_cast<int>(it - header.begin());
  };
  const int c_family = col("family"), c_n = col("n"),
            c_delta = col("delta_spec"), c_vp = col("vp");

  SweepSummary sum;
  sum.kind = "fit";
  bool have_meta = false;
  bool any_bad = false;
  std::map<double, double, std::greater<double>> min_excess;  // keyed by delta

  std::vector<std::tuple<double, double>> rows;  // delta, vp
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    const int need = std::max(std::max(c_family, c_n), std::max(c_delta, c_vp));
    if (static_cast<int>(cells.size()) <= need)
      throw IoError("CSV '" + path + "' has a short row");
    if (!have_meta) {
      sum.family = family_from_name(cells[c_family]);
      sum.n = std::stoi(cells[c_n]);
      have_meta = true;
    }
    rows.push_back({std::strtod(cells[c_delta].c_str(), nullptr),
                    std::strtod(cells[c_vp].c_str(), nullptr)});
  }
  if (!have_meta) throw IoError("CSV '" + path + "' has no data rows");

  sum.vp_baseline = volume_product(build_regular_simplex(sum.n).poly).vp;
  sum.affine_trivial = sum.family == Family::Scaling;
  for (const auto& [delta, vp] : rows) {
    if (!std::isfinite(vp)) {
      any_bad = true;
      ++sum.total_failures;
      continue;
    }
    const double excess = vp - sum.vp_baseline;
    auto [it, fresh] = min_excess.insert({delta, excess});
    if (!fresh) it->second = std::min(it->second, excess);
    if (!(excess > 0.0)) any_bad = true;
  }
  sum.all_vp_above_baseline = !any_bad && !sum.affine_trivial;
  for (const auto& [delta, excess] : min_excess) {
    sum.deltas.push_back(delta);
    DeltaAggregate a;
    a.delta = delta;
    a.min_vp_excess = excess;
    a.max_vp_excess = a.max_santalo_ratio = kNan;
    a.min_lemma32_margin = a.max_l33_p_raw = a.max_l33_pp_raw = kNan;
    a.min_lemma34_ratio = a.min_prop35_ratio = kNan;
    sum.per_delta.push_back(a);
  }
  if (!sum.affine_trivial && min_excess.size() >= 3) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [delta, excess] : min_excess)
      pts.push_back({delta, excess});
    const FitResult fit = fit_linear(pts);
    sum.theorem_slope = fit.slope;
    sum.theorem_intercept = fit.intercept;
    sum.theorem_residual = fit.residual;
  }
  return sum;
}

}  // namespace mahler
