#include "gkpstab/reduction.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "gkpstab/errors.hpp"

namespace gkpstab {

namespace {

using CMat = Eigen::MatrixXcd;

// Real 4x4-per-pair picture of a complex unitary acting mode-wise:
// u_ij = a + ib becomes the block [[a, -b], [b, a]].
Mat unitary_real_form(const CMat& u) {
  const int g = static_cast<int>(u.rows());
  Mat out = Mat::Zero(2 * g, 2 * g);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      const double a = u(i, j).real(), b = u(i, j).imag();
      out(2 * i, 2 * j) = a;
      out(2 * i, 2 * j + 1) = -b;
      out(2 * i + 1, 2 * j) = b;
      out(2 * i + 1, 2 * j + 1) = a;
    }
  }
  return out;
}

// Flips the sign of one mode's row pair when its largest entry is negative.
// Returns whether a flip happened so coupled partners can follow suit.
bool canonical_sign(Mat& m, int mode) {
  double best = 0.0;
  double best_abs = -1.0;
  for (int r = 2 * mode; r < 2 * mode + 2; ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (std::abs(m(r, c)) > best_abs) {
        best_abs = std::abs(m(r, c));
        best = m(r, c);
      }
    }
  }
  if (best < 0.0) {
    m.row(2 * mode) *= -1.0;
    m.row(2 * mode + 1) *= -1.0;
    return true;
  }
  return false;
}

}  // namespace

ReductionResult reduce_to_tms(const SymplecticMatrix& s_enc, int data_modes,
                              int ancilla_modes, double sigma) {
  const int n = data_modes, m = ancilla_modes;
  if (n < 1) throw DimensionError("reduce_to_tms: need at least one data mode");
  if (m < n)
    throw DimensionError(
        "reduce_to_tms: need at least as many ancilla modes as data modes");
  if (s_enc.modes != n + m)
    throw DimensionError("reduce_to_tms: encoding covers " +
                         std::to_string(s_enc.modes) + " modes, expected " +
                         std::to_string(n + m));
  if (!(sigma > 0.0)) throw DomainError("reduce_to_tms: sigma must be positive");

  // S^-1 S^-T for symplectic S, via S^-1 = Omega S^T Omega^T.
  const Mat om = omega(n + m);
  const Mat t = om * (s_enc.entries.transpose() * s_enc.entries) *
                om.transpose();

  const WilliamsonResult wd = williamson(t.topLeftCorner(2 * n, 2 * n));
  const WilliamsonResult wa =
      williamson(t.bottomRightCorner(2 * m, 2 * m));
  Mat lam_d = omega(n) * wd.sympl.entries.transpose() * omega(n).transpose();
  Mat lam_a = omega(m) * wa.sympl.entries.transpose() * omega(m).transpose();

  // Cross block in the frame where both diagonal blocks are multiples of I.
  const Mat x =
      lam_d * t.topRightCorner(2 * n, 2 * m) * lam_a.transpose();

  Vec gains(n);
  for (int i = 0; i < n; ++i) {
    double g = (wd.eigenvalues(i) + 1.0) / 2.0;
    if (std::abs(g - 1.0) < 1e-10) g = 1.0;
    gains(i) = std::max(g, 1.0);
  }

  const double group_tol = 1e-8;
  std::vector<std::pair<int, int>> pairs;  // (data mode, ancilla partner)
  int lo = 0;
  while (lo < n) {
    int hi = lo;
    const double nu = wd.eigenvalues(lo);
    while (hi + 1 < n &&
           std::abs(wd.eigenvalues(hi + 1) - nu) < group_tol * std::max(1.0, nu))
      ++hi;
    const int g = hi - lo + 1;
    if (gains(lo) > 1.0) {
      // The matching ancilla modes sit at the same positions: both spectra
      // are sorted descending and agree above 1.
      for (int j = lo; j <= hi; ++j) {
        if (j >= m ||
            std::abs(wa.eigenvalues(j) - nu) >= group_tol * std::max(1.0, nu))
          throw NumericalError(
              "reduce_to_tms: data and ancilla symplectic spectra do not pair "
              "up (nu = " +
              std::to_string(nu) + ")");
      }
      // Antilinear representation of the cross coupling inside the group.
      CMat w(g, g);
      for (int i = 0; i < g; ++i) {
        const int di = lo + i;
        for (int j = 0; j < g; ++j) {
          const int aj = lo + j;
          const double a = (x(2 * di, 2 * aj) - x(2 * di + 1, 2 * aj + 1)) / 2.0;
          const double b = (x(2 * di, 2 * aj + 1) + x(2 * di + 1, 2 * aj)) / 2.0;
          w(i, j) = std::complex<double>(a, b);
        }
      }
      Eigen::JacobiSVD<CMat> svd(w, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Mat rd = unitary_real_form(svd.matrixU().adjoint());
      const Mat ra = unitary_real_form(svd.matrixV().transpose());
      lam_d.middleRows(2 * lo, 2 * g) = rd * lam_d.middleRows(2 * lo, 2 * g);
      lam_a.middleRows(2 * lo, 2 * g) = ra * lam_a.middleRows(2 * lo, 2 * g);
      for (int i = 0; i < g; ++i) pairs.emplace_back(lo + i, lo + i);
    }
    lo = hi + 1;
  }

  // A lone data mode leaves a rotation gauge in its pair; pin lambda_d to the
  // symmetric positive solution so closed-form anchors come out verbatim. The
  // paired ancilla rows co-rotate to keep the cross block on +2 sqrt(G(G-1)) Z.
  if (n == 1 && !pairs.empty()) {
    const Mat tdd = t.topLeftCorner(2, 2);
    Eigen::SelfAdjointEigenSolver<Mat> es(tdd);
    const Mat canon =
        std::sqrt(wd.eigenvalues(0)) *
        (es.eigenvectors() *
         es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose());
    const Mat rot = canon * lam_d.inverse();
    lam_d = canon;
    lam_a.topRows(2) = rot.transpose() * lam_a.topRows(2);
  }

  for (int j = 0; j < m; ++j) {
    const bool coupled = j < n && gains(j) > 1.0;
    if (!coupled && std::abs(wa.eigenvalues(j) - 1.0) > 1e-6)
      throw NumericalError(
          "reduce_to_tms: surplus ancilla mode has symplectic eigenvalue " +
          std::to_string(wa.eigenvalues(j)) + ", expected 1");
  }

  // Deterministic sign gauge; coupled partners flip together so the cross
  // blocks stay +2 sqrt(G(G-1)) Z.
  std::vector<bool> data_handled(n, false), anc_handled(m, false);
  for (const auto& [di, ai] : pairs) {
    if (canonical_sign(lam_d, di)) {
      lam_a.row(2 * ai) *= -1.0;
      lam_a.row(2 * ai + 1) *= -1.0;
    }
    data_handled[di] = true;
    anc_handled[ai] = true;
  }
  for (int i = 0; i < n; ++i)
    if (!data_handled[i]) canonical_sign(lam_d, i);
  for (int j = 0; j < m; ++j)
    if (!anc_handled[j]) canonical_sign(lam_a, j);

  // Reconstruction check against the coupled-pair normal form.
  const Mat local = direct_sum(lam_d, lam_a);
  const Mat rebuilt = local * t * local.transpose();
  Mat target = Mat::Identity(2 * (n + m), 2 * (n + m));
  for (int i = 0; i < n; ++i) {
    const double g = gains(i);
    target.block<2, 2>(2 * i, 2 * i) = (2 * g - 1) * Mat::Identity(2, 2);
    target.block<2, 2>(2 * (n + i), 2 * (n + i)) =
        (2 * g - 1) * Mat::Identity(2, 2);
    const double c = 2.0 * std::sqrt(g * (g - 1.0));
    Mat cz = Mat::Zero(2, 2);
    cz(0, 0) = c;
    cz(1, 1) = -c;
    target.block<2, 2>(2 * i, 2 * (n + i)) = cz;
    target.block<2, 2>(2 * (n + i), 2 * i) = cz;
  }
  const double residual = (rebuilt - target).norm();
  if (!(residual <= 1e-8 * std::max(1.0, target.norm())))
    throw NumericalError("reduce_to_tms: reconstruction residual " +
                         std::to_string(residual) + " exceeds tolerance");

  ReductionResult out;
  out.gains = gains;
  out.lambda_d = as_symplectic(lam_d, 1e-8);
  out.lambda_a = as_symplectic(lam_a, 1e-8);
  out.residual = residual;
  return out;
}

std::pair<double, double> staircase_gains(double g1, double g2) {
  if (!(g1 >= 1.0) || !(g2 >= 1.0))
    throw DomainError("staircase_gains: gains must be >= 1");
  const double g12 = 1.0 + g2 * (g1 - 1.0);
  return {g12, g2 * g1 / g12};
}

double sqrep3_gain(double lambda) {
  if (!(lambda > 0.0)) throw DomainError("sqrep3_gain: lambda must be positive");
  return (std::sqrt(1.0 / (lambda * lambda) + 1.0) + 1.0) / 2.0;
}

SymplecticMatrix sqrep3_data_squeezer(double lambda) {
  if (!(lambda > 0.0))
    throw DomainError("sqrep3_data_squeezer: lambda must be positive");
  const double l2 = lambda * lambda;
  return squeeze(lambda * std::pow(l2 + l2 * l2, 0.25));
}

}  // namespace gkpstab
