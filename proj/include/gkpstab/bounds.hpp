#pragma once

#include <utility>

#include "gkpstab/symplectic.hpp"

namespace gkpstab {

// Closed-form limits on what any Gaussian-noise code can achieve.
struct BoundsReport {
  double sigma_lb = 0.0;             // floor on achievable output noise
  double capacity_lb_bits = 0.0;     // from a measured geometric-mean output
  double capacity_ub_bits = 0.0;     // from the channel variances alone
  double no_threshold_tr_lb = 0.0;   // floor on tr(V_out) given the gains
  std::pair<double, double> breakeven_window{0.0, 0.0};
};

// (1/sqrt e) (sigma^2/(1-sigma^2))^{(N+M)/(2N)}; requires sigma^2 < 1.
double sigma_lb(double sigma, int data_modes, int ancilla_modes);

// sigma_lb joined with the zero-capacity constraint: at sigma >= 1/sqrt 2 the
// channel capacity upper bound is zero, so no encoding improves on the bare
// channel and the achievable floor is sigma itself.
double sigma_lb_capped(double sigma, int data_modes, int ancilla_modes);

// max(0, N log2(1/(e sigma_gm_sq))).
double capacity_lb(double sigma_gm_sq, int data_modes);

// Sum over modes of log2((1-v)/v), each term floored at zero; v in (0,1).
double capacity_ub(const Vec& variances);

// tr(V_out) >= sum_i 2 sigma^2/(2 G_i - 1) for any decoder.
double no_threshold_tr_lb(const Vec& gains, double sigma);

// The interval (1/sqrt e, 1/sqrt 2) bracketing the break-even point.
std::pair<double, double> breakeven_window();

// Differential entropies of the pre-decode Gaussian variables, natural log.
struct EntropyReport {
  double s_xd = 0.0;          // data-block entropy
  double s_xa = 0.0;          // ancilla-block entropy
  double s_joint = 0.0;       // joint entropy
  double mutual_info = 0.0;   // s_xd + s_xa - s_joint = 2 sum ln(2G-1)
  double cond_entropy = 0.0;  // s_joint - s_xa = sum ln(2 pi e sigma^2/(2G-1))
};

EntropyReport entropy_report(const Vec& gains, double sigma, int data_modes,
                             int ancilla_modes);

// Assembles the report for an N+M mode iid channel at noise sigma, given the
// measured geometric-mean output variance and the code's gains.
BoundsReport bounds_report(double sigma, int data_modes, int ancilla_modes,
                           double sigma_gm_sq, const Vec& gains);

}  // namespace gkpstab
