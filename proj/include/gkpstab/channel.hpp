#pragma once

#include "gkpstab/lattice.hpp"
#include "gkpstab/symplectic.hpp"

namespace gkpstab {

// Additive Gaussian noise with per-mode variances; V_xi = direct sum of
// variances[i] * I_2.
struct AgnModel {
  Vec variances;  // length N + M, all > 0
};

AgnModel iid_noise(double sigma_sq, int modes);

// V_xi as a full matrix.
Mat noise_covariance(const AgnModel& noise);

// A GKP-stabilizer code: Gaussian encoding over N data + M ancilla modes and
// the ancilla GKP lattice. Mode order is data first, then ancillas.
struct CodeSpec {
  SymplecticMatrix encoding;  // 2(N+M) square
  Lattice lattice;            // 2M
  int data_modes = 0;         // N
  int ancilla_modes = 0;      // M
};

CodeSpec make_code(SymplecticMatrix encoding, Lattice lattice, int data_modes,
                   int ancilla_modes);

// Finite GKP squeezing model: Gaussian noise on ancilla preparation
// (propagated through the syndrome map) and on the homodyne measurement.
// The two variances are independent knobs but tied by the factories.
struct FiniteGkp {
  double prep_var = 0.0;  // scales Mhat^T Mhat
  double meas_var = 0.0;  // scales the identity
  bool exact() const { return prep_var == 0.0 && meas_var == 0.0; }
  static FiniteGkp ideal() { return {}; }
  static FiniteGkp with_variance(double sigma_gkp_sq);
  static FiniteGkp from_db(double s_db);
};

// sigma_gkp^2 = tanh(delta^2 / 2) for envelope parameter delta.
double gkp_variance_from_delta(double delta);

// sigma_gkp^2 = 10^(-s/10) / 2 for squeezing expressed in dB.
double gkp_variance_from_db(double s_db);

// Inverse of gkp_variance_from_db.
double gkp_db_from_variance(double sigma_gkp_sq);

// V_x = S_enc^{-1} V_xi S_enc^{-T}.
Mat propagate_noise(const CodeSpec& code, const AgnModel& noise);

// Inverse-covariance blocks of the joint (data, syndrome) distribution,
// following the convention that [[V_d, V_da], [V_da^T, V_a]] is the INVERSE
// of the transformed covariance; v_cond = V_{d|a} is the syndrome-sector
// precision after conditioning on the data.
struct NoiseBlocks {
  Mat v_d;     // 2N x 2N
  Mat v_da;    // 2N x 2M
  Mat v_a;     // 2M x 2M
  Mat v_cond;  // 2M x 2M
  int data_modes = 0;
  int ancilla_modes = 0;
};

// Transforms V_x by (I_2N + Mhat^T Omega) with Mhat = M / sqrt(2*pi), adds
// the finite-GKP terms, inverts, and reads off the blocks.
NoiseBlocks noise_blocks(const Mat& v_x, const Lattice& l,
                         const FiniteGkp& fin = {});

// The forward (covariance-side) matrix the blocks were read from; kept for
// sampling and diagnostics. t_aa is its syndrome sector.
Mat syndrome_covariance(const Mat& v_x, const Lattice& l,
                        const FiniteGkp& fin = {});

}  // namespace gkpstab
