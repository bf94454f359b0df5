#pragma once

// Perturbation families around the regular simplex, seeded sweeps over a
// delta grid, and the aggregate fits (volume-product slope, Santalo
// stability ratio, squared-order exponents). Records are deterministic
// functions of (seed, record index); parallel and serial runs produce the
// same bytes.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "mahler/simplex_flags.hpp"

namespace mahler {

enum class Family { VertexShrink, FacetCut, RandomSupport, Scaling };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

// Seeded generator with substream derivation, so each record owns an
// independent, reproducible stream.
class Rng {
 public:
  explicit Rng(std::uint64_t raw) : gen_(raw) {}
  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);
  double gaussian();
  Vec unit_vector(int n);

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                        std::uint64_t c);

struct GeneratorSpec {
  Family family = Family::VertexShrink;
  int n = 2;
  double delta = 0.01;
  std::uint64_t seed = 1;
  std::uint64_t pattern_id = 0;

  // Optional overrides; empty or zero means "draw from the stream".
  std::vector<double> shrink_fractions;  // per vertex, rescaled to max 1
  double cut_jitter = 0.1;               // direction jitter for facet cuts
  int cloud_points = 0;                  // random-support cloud size
};

Polytope generate(const GeneratorSpec& spec, const RegularSimplex& s);
Polytope generate(const GeneratorSpec& spec);

struct ExperimentRecord {
  GeneratorSpec spec;
  int record_index = 0;
  bool failed = false;
  std::string error;

  double delta_actual = 0.0;
  double hausdorff = 0.0;
  Vec santalo;
  double vol_body = 0.0;
  double vol_polar_s = 0.0;   // polar volume at the Santalo point
  double vp = 0.0;
  double vol_polar_0_product = 0.0;  // |K| * |K polar at 0|
  LemmaReport report;
  double runtime_ms = 0.0;
};

struct SweepConfig {
  Family family = Family::VertexShrink;
  int n = 2;
  std::vector<double> deltas;  // strictly decreasing, within (0, 0.05]
  int samples = 20;
  std::uint64_t seed = 1;
  int jobs = 1;
  bool timing = false;  // when false runtime_ms is written as 0
  std::vector<double> shrink_fractions;  // forwarded to every spec
};

std::vector<ExperimentRecord> run_records(const SweepConfig& cfg);

void write_csv(std::ostream& os, const std::vector<ExperimentRecord>& records);
void write_csv(const std::string& path,
               const std::vector<ExperimentRecord>& records);

struct DeltaAggregate {
  double delta = 0.0;
  int failures = 0;
  // NaN means no successful record contributed.
  double min_vp_excess = 0.0, max_vp_excess = 0.0;
  double max_santalo_ratio = 0.0;     // |s(K)| / d_H(K, simplex)
  double min_lemma32_margin = 0.0;
  double max_l33_p_raw = 0.0;         // | |P| - |Q| |, not divided by delta^2
  double max_l33_pp_raw = 0.0;
  double min_lemma34_ratio = 0.0;
  double min_prop35_ratio = 0.0;
};

// Analytics fields default to NaN, which serializes as null; each runner
// fills only the sections it computes.
inline constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

struct SweepSummary {
  std::string kind;  // "theorem", "stability", "lemma", "square", "fit"
  Family family = Family::VertexShrink;
  int n = 0;
  std::vector<double> deltas;
  int samples = 0;
  std::uint64_t seed = 0;
  int total_failures = 0;
  std::vector<std::string> errors;
  std::vector<DeltaAggregate> per_delta;
  std::vector<ExperimentRecord> records;

  double vp_baseline = kUnset;
  bool affine_trivial = false;
  bool all_vp_above_baseline = false;
  double theorem_slope = kUnset, theorem_intercept = kUnset,
         theorem_residual = kUnset;

  double stability_max_ratio = kUnset;
  double stability_small_delta_mean = kUnset;  // mean over the small-delta half
  double stability_large_delta_mean = kUnset;
  bool stability_no_upward_trend = false;

  double min_lemma32_margin = kUnset;
  double lemma33_p_exponent = kUnset;
  double lemma33_pp_exponent = kUnset;
  double min_lemma34_ratio = kUnset;
  double min_prop35_ratio = kUnset;

  double square_r0 = kUnset;
  double square_exponent = kUnset;
  std::vector<double> square_shell_rho;
  std::vector<double> square_shell_mean;
  int square_skipped = 0;
};

nlohmann::json summary_to_json(const SweepSummary& s);

SweepSummary run_theorem_sweep(const SweepConfig& cfg);
SweepSummary run_santalo_stability(const SweepConfig& cfg);
SweepSummary run_lemma_suite(const SweepConfig& cfg);
SweepSummary run_square_order(const Polytope& body, int samples,
                              std::uint64_t seed);

// Rebuild the theorem fit from a CSV written by write_csv.
SweepSummary fit_from_csv(const std::string& path);

}  // namespace mahler
