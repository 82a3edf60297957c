#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "gkpstab/errors.hpp"

namespace gkpstab {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Quadrature ordering is (q1, p1, q2, p2, ...) throughout.

// A validated real symplectic matrix: S omega(S) S^T = omega, det S = 1.
struct SymplecticMatrix {
  Mat entries;
  int modes = 0;
};

// The 2K x 2K symplectic form, block-diagonal copies of [[0,1],[-1,0]].
Mat omega(int modes);

bool is_symplectic(const Mat& s, double tol = 1e-10);

// Throws ValidationError (with the Frobenius defect) if s fails the check.
void require_symplectic(const Mat& s, double tol = 1e-10,
                        const char* what = "matrix");

// Wraps a raw matrix after validating it.
SymplecticMatrix as_symplectic(Mat entries, double tol = 1e-10);

// Single-mode phase rotation [[cos, sin], [-sin, cos]].
SymplecticMatrix rotation(double theta);

// Single-mode squeezer diag(r, 1/r), r > 0.
SymplecticMatrix squeeze(double r);

// Two-mode beamsplitter [[cos I, sin I], [-sin I, cos I]].
SymplecticMatrix beamsplitter(double theta);

// Two-mode SUM gate with strength delta; additive in delta.
SymplecticMatrix sum_gate(double delta);

// Two-mode squeezing with gain G >= 1:
// [[sqrt(G) I, sqrt(G-1) Z], [sqrt(G-1) Z, sqrt(G) I]], Z = diag(1,-1).
SymplecticMatrix tms(double gain);

// Squeezed-repetition encoders over 1+1 and 1+2 modes.
SymplecticMatrix sqrep2(double lambda);
SymplecticMatrix sqrep3(double lambda);

// Block direct sum.
Mat direct_sum(const Mat& a, const Mat& b);

// Embeds a two-mode operation on modes (i, j) of a `modes`-mode identity.
Mat embed_two_mode(const Mat& s4, int modes, int i, int j);

struct BlochMessiah {
  SymplecticMatrix left_passive;   // orthogonal and symplectic
  Vec squeezings;                  // per mode, >= 1, sorted descending
  SymplecticMatrix right_passive;  // orthogonal and symplectic
};

// S = left * (direct sum of diag(r_i, 1/r_i)) * right.
BlochMessiah bloch_messiah(const SymplecticMatrix& s, double tol = 1e-10);

// Direct sum of diag(r_i, 1/r_i); rebuilds the middle Bloch-Messiah factor.
Mat squeeze_chain(const Vec& r);

struct WilliamsonResult {
  SymplecticMatrix sympl;
  Vec eigenvalues;  // nu_i > 0, sorted descending
};

// V = sympl * diag(nu_1, nu_1, ..., nu_K, nu_K) * sympl^T.
WilliamsonResult williamson(const Mat& v);

// Gaussian channel in (displacement, transfer, added-noise) form.
struct GaussianChannel {
  Vec d;
  Mat x;
  Mat y;
};

// Channel ch2 applied after ch1.
GaussianChannel gaussian_compose(const GaussianChannel& ch1,
                                 const GaussianChannel& ch2);

}  // namespace gkpstab
