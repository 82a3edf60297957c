#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "gkpstab/channel.hpp"
#include "gkpstab/lattice.hpp"
#include "gkpstab/symplectic.hpp"

namespace gkpstab {

enum class EstimatorKind { kLinear, kMmse };

// Truncation of the integer sums over lattice translates: the box radius per
// component is derived from the conditional precision so that every omitted
// Gaussian term is below rel_tail_bound relative to the leading one; max_range
// caps the radius and exceeding it is an error.
struct TruncationPolicy {
  double rel_tail_bound = 1e-14;
  int max_range = 25;
};

struct QuadConfig {
  int points = 64;        // Gauss-Legendre points per axis for 1-ancilla cells
  int points_2mode = 16;  // per axis for 2-ancilla cells (coarse mode)
  int max_panel_depth = 6;
  double rel_tol = 1e-6;
  int threads = 0;  // 0: GKPSTAB_THREADS env var, else OpenMP default
};

struct McConfig {
  long long samples = 1000000;
  std::uint64_t seed = 1;
  bool rao_blackwell = true;
  long long chunk = 16384;  // samples per RNG stream
  int threads = 0;
};

// Componentwise within the fundamental cell [-sqrt(pi/2), sqrt(pi/2)).
struct Syndrome {
  Vec s;
};

struct DecodeReport {
  Mat v_out;
  double sigma_gm_sq = 0.0;
  double sigma_rms_sq = 0.0;
  // Largest per-entry standard error (Monte Carlo) or the quadrature
  // refinement residual.
  double numerical_error = 0.0;
  long long samples_or_nodes = 0;
  std::optional<std::uint64_t> seed;
};

// Lattice translates k*sqrt(2*pi) kept in the wrapped Gaussian sums, one per
// row; pruned conservatively against the policy's tail bound.
struct CellTranslates {
  Mat points;
  int n_max = 0;
};

double cell_half_width();

// Componentwise reduction into [-sqrt(pi/2), sqrt(pi/2)).
Vec wrap_to_cell(const Vec& raw);

Syndrome syndrome(const Vec& x_a, const Lattice& l);

CellTranslates cell_translates(const Mat& v_cond,
                               const TruncationPolicy& trunc = {});

Vec estimator_linear(const NoiseBlocks& blocks, const Syndrome& s);

Vec estimator_mmse(const NoiseBlocks& blocks, const Syndrome& s,
                   const TruncationPolicy& trunc = {});

double joint_syndrome_pdf(const NoiseBlocks& blocks, const Syndrome& s,
                          const TruncationPolicy& trunc = {});

// (sigma_gm_sq, sigma_rms_sq) = (det^(1/2N), tr/2N).
std::pair<double, double> metrics(const Mat& v_out);

DecodeReport output_covariance_quadrature(const CodeSpec& code,
                                          const AgnModel& noise,
                                          const FiniteGkp& fin,
                                          EstimatorKind kind,
                                          const TruncationPolicy& trunc = {},
                                          const QuadConfig& quad = {});

DecodeReport output_covariance_mc(const CodeSpec& code, const AgnModel& noise,
                                  const FiniteGkp& fin, EstimatorKind kind,
                                  const TruncationPolicy& trunc,
                                  const McConfig& mc);

}  // namespace gkpstab
