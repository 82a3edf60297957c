#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gkpstab/decode.hpp"

namespace gkpstab {

enum class Objective { kGm, kRms };

// Grid for the single-mode lattice sweep; theta is restricted to [0, pi/4]
// by the symmetry of the lattice family.
struct SweepGrid {
  Vec r_values;
  Vec theta_values;
  double sigma_sq = 0.0;
};

struct OptResult {
  std::vector<double> params;  // (G), or (G1, G2)
  double objective = 0.0;
  double sigma_gm_sq = 0.0;   // always recorded
  double sigma_rms_sq = 0.0;  // always recorded
  long long evaluations = 0;
  double multi_start_spread = 0.0;  // objective spread across restarts
};

// Shared knobs for the gain searches. Monte Carlo evaluation (engaged for
// two-mode ancilla lattices) holds the seed fixed across evaluations, so the
// searched surface is deterministic; the returned report re-evaluates the
// optimum on a fresh stream with final_samples.
struct GainSearchConfig {
  double g_max = 100.0;
  double g_cap = 1e4;  // bracket extension limit
  int coarse_points = 25;
  Objective objective = Objective::kRms;
  FiniteGkp fin{};
  TruncationPolicy trunc{};
  QuadConfig quad{};
  McConfig search_mc{100000, 1, true, 16384, 0};
  long long final_samples = 400000;
};

// Best TMS gain for a single-layer code: one pair for a one-mode lattice,
// two pairs sharing the gain for a two-mode lattice. Coarse log-spaced scan,
// then golden-section refinement.
OptResult optimize_gain(const Lattice& l, double sigma, EstimatorKind kind,
                        const GainSearchConfig& cfg = {});

struct SweepRow {
  double r = 0.0;
  double theta = 0.0;
  double g_opt = 0.0;
  double sigma_rms_sq = 0.0;
  double sigma_gm_sq = 0.0;
  bool failed = false;
  std::string error;
};

// Per-point optimize_gain over the (r, theta) lattice family; failures are
// recorded in the row and the sweep continues.
std::vector<SweepRow> sweep_single_mode(const SweepGrid& grid,
                                        EstimatorKind kind,
                                        const GainSearchConfig& cfg = {});

struct ConcatSearchConfig {
  double g1_max = 100.0;
  double g1_cap = 1e4;
  double g2_max = 6.0;
  int starts = 8;
  int rounds = 3;
  Objective objective = Objective::kGm;
  TruncationPolicy trunc{};
  McConfig search_mc{60000, 5, true, 16384, 0};
  long long final_samples = 200000;
};

// Two-layer staircase over one data mode and a two-mode ancilla lattice: the
// ancilla pair is coupled by tms(G2), then the data couples to the first
// ancilla by tms(G1). Multi-start coordinate descent; the spread across
// restart outcomes is reported alongside the best.
OptResult optimize_concat(const Lattice& l, double sigma, EstimatorKind kind,
                          const ConcatSearchConfig& cfg = {});

// The staircase encoding itself, mode order (data, ancilla1, ancilla2).
SymplecticMatrix staircase_encoding(double g1, double g2);

// Shared-gain encoding with one TMS pair per data mode, modes in {1, 2},
// mode order (data..., ancilla...).
SymplecticMatrix single_layer_encoding(double gain, int modes);

struct BreakevenConfig {
  double lo = 0.5;
  double hi = 0.71;
  double tol = 0.002;
  GainSearchConfig gain{};
};

// Bisection for the noise level where the best achievable geometric-mean
// output equals the input noise; every evaluation re-optimizes the gain.
double find_breakeven(const Lattice& l, EstimatorKind kind,
                      const BreakevenConfig& cfg = {});

struct FiniteCurveRow {
  double s_db = 0.0;
  double sigma = 0.0;
  double g_opt = 0.0;
  double qec_gain = 0.0;  // sigma^2 / sigma_gm_sq
  double sigma_gm_sq = 0.0;
  bool failed = false;
  std::string error;
};

// QEC gain with finitely squeezed ancillas, per (squeezing dB, sigma) pair.
std::vector<FiniteCurveRow> finite_squeezing_curve(
    const Vec& s_db_values, const Vec& sigma_values, const Lattice& l,
    EstimatorKind kind, const GainSearchConfig& cfg = {});

// Squeezing threshold below which no probed noise level shows a QEC gain:
// bisection on s_dB of max-over-sigma gain minus one.
double finite_breakeven_db(const Lattice& l, EstimatorKind kind,
                           const Vec& sigma_probes, double lo_db = 9.5,
                           double hi_db = 11.5, double tol_db = 0.02,
                           const GainSearchConfig& cfg = {});

// Sample count that brings the Monte Carlo standard error seen in a pilot
// run down to target_se, with a safety factor.
long long scale_samples_for_se(const DecodeReport& pilot,
                               long long pilot_samples, double target_se);

}  // namespace gkpstab
