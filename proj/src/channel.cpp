#include "gkpstab/channel.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <sstream>

namespace gkpstab {

AgnModel iid_noise(double sigma_sq, int modes) {
  if (!(sigma_sq > 0.0)) throw DomainError("iid_noise: variance must be > 0");
  if (modes < 1) throw DomainError("iid_noise: modes must be >= 1");
  return {Vec::Constant(modes, sigma_sq)};
}

Mat noise_covariance(const AgnModel& noise) {
  const int k = static_cast<int>(noise.variances.size());
  Mat v = Mat::Zero(2 * k, 2 * k);
  for (int i = 0; i < k; ++i) {
    if (!(noise.variances[i] > 0.0)) {
      throw DomainError("noise_covariance: variances must be > 0");
    }
    v(2 * i, 2 * i) = v(2 * i + 1, 2 * i + 1) = noise.variances[i];
  }
  return v;
}

CodeSpec make_code(SymplecticMatrix encoding, Lattice lattice, int data_modes,
                   int ancilla_modes) {
  if (data_modes < 1 || ancilla_modes < 1) {
    throw DomainError("make_code: need at least one data and one ancilla mode");
  }
  if (encoding.modes != data_modes + ancilla_modes) {
    throw DimensionError("make_code: encoding size does not match mode counts");
  }
  if (lattice.modes != ancilla_modes) {
    throw DimensionError("make_code: lattice size does not match ancilla count");
  }
  return {std::move(encoding), std::move(lattice), data_modes, ancilla_modes};
}

FiniteGkp FiniteGkp::with_variance(double sigma_gkp_sq) {
  if (!(sigma_gkp_sq >= 0.0 && sigma_gkp_sq < 1.0)) {
    throw DomainError("FiniteGkp: variance must be in [0, 1)");
  }
  return {sigma_gkp_sq, sigma_gkp_sq};
}

FiniteGkp FiniteGkp::from_db(double s_db) {
  return with_variance(gkp_variance_from_db(s_db));
}

double gkp_variance_from_delta(double delta) {
  if (!(delta > 0.0)) throw DomainError("gkp_variance_from_delta: delta <= 0");
  return std::tanh(delta * delta / 2.0);
}

double gkp_variance_from_db(double s_db) {
  return 0.5 * std::pow(10.0, -s_db / 10.0);
}

double gkp_db_from_variance(double sigma_gkp_sq) {
  if (!(sigma_gkp_sq > 0.0)) {
    throw DomainError("gkp_db_from_variance: variance must be > 0");
  }
  return -10.0 * std::log10(2.0 * sigma_gkp_sq);
}

Mat propagate_noise(const CodeSpec& code, const AgnModel& noise) {
  const Mat v_xi = noise_covariance(noise);
  if (v_xi.rows() != code.encoding.entries.rows()) {
    throw DimensionError("propagate_noise: noise does not match encoding size");
  }
  const Mat s_inv = code.encoding.entries.inverse();
  return s_inv * v_xi * s_inv.transpose();
}

namespace {

// (I_2N + Mhat^T Omega) V_x (...)^T + finite-GKP terms.
Mat transformed_covariance(const Mat& v_x, const Lattice& l,
                           const FiniteGkp& fin, int data_dim) {
  const Mat mhat = l.generator / kEll;
  const Mat syn = mhat.transpose() * omega(l.modes);
  Mat u = Mat::Zero(v_x.rows(), v_x.cols());
  u.topLeftCorner(data_dim, data_dim) =
      Mat::Identity(data_dim, data_dim);
  u.bottomRightCorner(syn.rows(), syn.cols()) = syn;
  Mat t = u * v_x * u.transpose();
  if (!fin.exact()) {
    if (!(fin.prep_var >= 0.0 && fin.prep_var < 1.0 && fin.meas_var >= 0.0 &&
          fin.meas_var < 1.0)) {
      throw DomainError("noise_blocks: finite-GKP variances must be in [0, 1)");
    }
    const int a = static_cast<int>(syn.rows());
    t.bottomRightCorner(a, a) +=
        fin.prep_var * (mhat.transpose() * mhat) +
        fin.meas_var * Mat::Identity(a, a);
  }
  return t;
}

}  // namespace

Mat syndrome_covariance(const Mat& v_x, const Lattice& l, const FiniteGkp& fin) {
  const int data_dim = static_cast<int>(v_x.rows()) - 2 * l.modes;
  if (data_dim < 2 || data_dim % 2 != 0) {
    throw DimensionError("syndrome_covariance: sizes do not leave a data block");
  }
  return transformed_covariance(v_x, l, fin, data_dim);
}

NoiseBlocks noise_blocks(const Mat& v_x, const Lattice& l, const FiniteGkp& fin) {
  const int dim = static_cast<int>(v_x.rows());
  const int data_dim = dim - 2 * l.modes;
  if (v_x.cols() != dim || data_dim < 2 || data_dim % 2 != 0) {
    throw DimensionError("noise_blocks: sizes do not leave a data block");
  }
  const Mat t = transformed_covariance(v_x, l, fin, data_dim);

  Eigen::SelfAdjointEigenSolver<Mat> es(t);
  if (es.info() != Eigen::Success) {
    throw NumericalError("noise_blocks: eigendecomposition failed");
  }
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    std::ostringstream os;
    os << "noise_blocks: assembled covariance is singular or ill-conditioned"
       << " (condition number " << (lo > 0.0 ? hi / lo : INFINITY) << ")";
    throw NumericalError(os.str());
  }
  const Mat inv = es.eigenvectors() *
                  es.eigenvalues().cwiseInverse().asDiagonal() *
                  es.eigenvectors().transpose();

  NoiseBlocks b;
  b.data_modes = data_dim / 2;
  b.ancilla_modes = l.modes;
  const int a = 2 * l.modes;
  b.v_d = inv.topLeftCorner(data_dim, data_dim);
  b.v_da = inv.topRightCorner(data_dim, a);
  b.v_a = inv.bottomRightCorner(a, a);
  b.v_cond = b.v_a - b.v_da.transpose() * b.v_d.inverse() * b.v_da;
  return b;
}

}  // namespace gkpstab
