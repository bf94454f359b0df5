// Command-line surface: single-body queries, Santalo/volume-product
// solves, flag-construction reports, and seeded sweeps. All outputs are
// JSON on stdout (bare scalars for single quantities); sweeps additionally
// write a CSV. Exit codes: 0 ok, 2 I/O or parse problem, 3 geometric or
// numerical precondition failure.

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mahler/body_io.hpp"
#include "mahler/errors.hpp"
#include "mahler/experiments.hpp"
#include "mahler/polarity.hpp"
#include "mahler/simplex_flags.hpp"

namespace {

using namespace mahler;

double env_tol(double fallback) {
  if (const char* e = std::getenv("MAHLER_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(e, &end);
    if (end != e && v > 0.0) return v;
  }
  return fallback;
}

Polytope load_input(const std::string& input, const std::string& builtin) {
  if (!input.empty() && !builtin.empty())
    throw IoError("give either --input or --builtin, not both");
  if (!input.empty()) return load_body(input);
  if (!builtin.empty()) return builtin_body(builtin);
  throw IoError("need --input FILE or --builtin SPEC");
}

// "0" means the origin; otherwise a full comma-separated coordinate list.
Vec parse_point(const std::string& text, int n) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
      throw IoError("bad coordinate '" + tok + "'");
    vals.push_back(v);
  }
  if (vals.size() == 1) return Vec::Constant(n, vals[0]);
  if (static_cast<int>(vals.size()) != n)
    throw IoError("expected " + std::to_string(n) + " coordinates, got " +
                  std::to_string(vals.size()));
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = vals[i];
  return v;
}

std::vector<double> parse_deltas(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
      throw IoError("bad delta '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

nlohmann::json vec_json(const Vec& v) {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

void emit(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

int run_body(const std::string& input, const std::string& builtin,
             const std::string& action, const std::string& center,
             const std::string& point, double tol) {
  const Polytope p = load_input(input, builtin);
  if (action == "volume") {
    emit(moments(p).volume);
  } else if (action == "centroid") {
    emit(vec_json(moments(p).centroid()));
  } else if (action == "polar") {
    const Vec z = parse_point(center, p.dim());
    emit(body_to_json(polar(p, z)));
  } else if (action == "contains") {
    if (point.empty()) throw IoError("contains needs --point");
    emit(contains(p, parse_point(point, p.dim()), tol));
  } else if (action == "hull") {
    nlohmann::json j = body_to_json(p);
    nlohmann::json hs = nlohmann::json::array();
    for (const auto& h : p.halfspaces())
      hs.push_back({{"a", vec_json(h.a)}, {"b", h.b}});
    j["halfspaces"] = hs;
    emit(j);
  } else {
    throw IoError("unknown action '" + action + "'");
  }
  return 0;
}

int run_santalo(const std::string& input, const std::string& builtin,
                double tol) {
  const Polytope p = load_input(input, builtin);
  const SantaloResult r = santalo_point(p, tol);
  nlohmann::json j;
  j["point"] = vec_json(r.point);
  j["polar_volume"] = r.polar_volume;
  j["centroid_norm"] = r.centroid_norm;
  j["iterations"] = r.iterations;
  emit(j);
  return 0;
}

int run_vp(const std::string& input, const std::string& builtin, double tol) {
  const Polytope p = load_input(input, builtin);
  const VolumeProductResult r = volume_product(p, tol);
  nlohmann::json j;
  j["vp"] = r.vp;
  j["santalo"] = vec_json(r.santalo.point);
  j["volumes"] = {{"body", r.body_volume}, {"polar", r.polar_volume}};
  j["iterations"] = r.santalo.iterations;
  emit(j);
  return 0;
}

int run_flags(const std::string& input, const std::string& builtin, int n) {
  const Polytope p = load_input(input, builtin);
  const RegularSimplex s = build_regular_simplex(n);
  emit(report_to_json(lemma_report(p, s)));
  return 0;
}

int run_sweep(const std::string& kind, const std::string& family_str, int n,
              const std::string& deltas_str, int samples, std::uint64_t seed,
              const std::string& out, int jobs, bool timing,
              const std::string& fractions_str, const std::string& input,
              const std::string& builtin) {
  if (kind == "square") {
    if (!out.empty())
      throw IoError("--out is not used by --kind square (no records)");
    const Polytope body = load_input(input, builtin);
    emit(summary_to_json(run_square_order(body, samples, seed)));
    return 0;
  }

  SweepConfig cfg;
  cfg.family = family_from_name(family_str);
  cfg.n = n;
  cfg.deltas = parse_deltas(deltas_str);
  cfg.samples = samples;
  cfg.seed = seed;
  cfg.jobs = jobs;
  cfg.timing = timing;
  if (!fractions_str.empty()) {
    for (double f : parse_deltas(fractions_str))
      cfg.shrink_fractions.push_back(f);
  }

  SweepSummary sum;
  if (kind == "theorem")
    sum = run_theorem_sweep(cfg);
  else if (kind == "stability")
    sum = run_santalo_stability(cfg);
  else if (kind == "lemma")
    sum = run_lemma_suite(cfg);
  else
    throw IoError("unknown sweep kind '" + kind + "'");

  if (!out.empty()) write_csv(out, sum.records);
  emit(summary_to_json(sum));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex-geometry toolkit: polar duality, Santalo points, "
               "volume products, and simplex perturbation experiments"};
  app.require_subcommand(1);

  std::string input, builtin, action, center = "0", point, out;
  std::string family_str = "vertex-shrink", deltas_str, kind = "theorem";
  std::string fractions_str, fit_path;
  int n = 2, samples = 20, jobs = 1;
  std::uint64_t seed = 1;
  bool timing = false;
  double tol = -1.0;

  auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("--input", input, "JSON body file");
    cmd->add_option("--builtin", builtin,
                    "builtin body, e.g. simplex:2 or cube:3");
  };

  CLI::App* body = app.add_subcommand("body", "query a single body");
  add_input(body);
  body->add_option("action", action, "volume|centroid|polar|contains|hull")
      ->required();
  body->add_option("--center", center, "polarity center (default origin)");
  body->add_option("--point", point, "point for the contains action");
  body->add_option("--tol", tol, "containment tolerance");

  CLI::App* santalo = app.add_subcommand("santalo", "solve the Santalo point");
  add_input(santalo);
  santalo->add_option("--tol", tol, "centroid-norm tolerance");

  CLI::App* vp = app.add_subcommand("vp", "volume product at the Santalo point");
  add_input(vp);
  vp->add_option("--tol", tol, "centroid-norm tolerance");

  CLI::App* flags =
      app.add_subcommand("flags", "flag-construction lemma report");
  add_input(flags);
  flags->add_option("--n", n, "simplex dimension")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "seeded delta sweep");
  sweep->add_option("--kind", kind, "theorem|stability|lemma|square");
  sweep->add_option("--family", family_str,
                    "vertex-shrink|facet-cut|random-support|scaling");
  sweep->add_option("--n", n, "dimension");
  sweep->add_option("--deltas", deltas_str, "comma list, strictly decreasing");
  sweep->add_option("--samples", samples, "samples per delta");
  sweep->add_option("--seed", seed, "stream seed");
  sweep->add_option("--out", out, "CSV output path");
  sweep->add_option("--jobs", jobs, "worker threads");
  sweep->add_flag("--timing", timing,
                  "record wall times (breaks bitwise determinism)");
  sweep->add_option("--fractions", fractions_str,
                    "fixed per-vertex shrink fractions, comma list");
  add_input(sweep);  // body input for --kind square

  CLI::App* fit = app.add_subcommand("fit", "refit a sweep CSV");
  fit->add_option("csv", fit_path, "CSV written by sweep")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(body))
      return run_body(input, builtin, action, center, point,
                      tol > 0 ? tol : env_tol(1e-9));
    if (app.got_subcommand(santalo))
      return run_santalo(input, builtin, tol > 0 ? tol : env_tol(1e-10));
    if (app.got_subcommand(vp))
      return run_vp(input, builtin, tol > 0 ? tol : env_tol(1e-10));
    if (app.got_subcommand(flags))
      return run_flags(input, builtin, n);
    if (app.got_subcommand(sweep))
      return run_sweep(kind, family_str, n, deltas_str, samples, seed, out,
                       jobs, timing, fractions_str, input, builtin);
    if (app.got_subcommand(fit)) {
      emit(summary_to_json(fit_from_csv(fit_path)));
      return 0;
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const GeomError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
