#include "gkpstab/symplectic.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace gkpstab {

namespace {

void require_even_square(const Mat& s, const char* what) {
  if (s.rows() != s.cols()) {
    std::ostringstream os;
    os << what << ": matrix is " << s.rows() << "x" << s.cols()
       << ", expected square";
    throw DimensionError(os.str());
  }
  if (s.rows() % 2 != 0) {
    std::ostringstream os;
    os << what << ": dimension " << s.rows() << " is odd";
    throw DimensionError(os.str());
  }
}

// Fixes the overall sign of v so its first significant entry is positive.
void canonicalize_sign(Eigen::Ref<Vec> v) {
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-9) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

bool lex_less(const Vec& a, const Vec& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] < b[i] - 1e-12) return true;
    if (a[i] > b[i] + 1e-12) return false;
  }
  return false;
}

}  // namespace

Mat omega(int modes) {
  if (modes < 1) throw DomainError("omega: modes must be >= 1");
  Mat w = Mat::Zero(2 * modes, 2 * modes);
  for (int i = 0; i < modes; ++i) {
    w(2 * i, 2 * i + 1) = 1.0;
    w(2 * i + 1, 2 * i) = -1.0;
  }
  return w;
}

bool is_symplectic(const Mat& s, double tol) {
  require_even_square(s, "is_symplectic");
  const Mat w = omega(static_cast<int>(s.rows()) / 2);
  return (s * w * s.transpose() - w).norm() < tol;
}

void require_symplectic(const Mat& s, double tol, const char* what) {
  require_even_square(s, what);
  const Mat w = omega(static_cast<int>(s.rows()) / 2);
  const double defect = (s * w * s.transpose() - w).norm();
  if (!(defect < tol)) {
    std::ostringstream os;
    os << what << ": not symplectic, form defect " << defect << " exceeds "
       << tol;
    throw ValidationError(os.str());
  }
}

SymplecticMatrix as_symplectic(Mat entries, double tol) {
  require_symplectic(entries, tol, "as_symplectic");
  SymplecticMatrix s;
  s.modes = static_cast<int>(entries.rows()) / 2;
  s.entries = std::move(entries);
  return s;
}

SymplecticMatrix rotation(double theta) {
  Mat r(2, 2);
  r << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  return {r, 1};
}

SymplecticMatrix squeeze(double r) {
  if (!(r > 0.0)) throw DomainError("squeeze: r must be positive");
  Mat s = Mat::Zero(2, 2);
  s(0, 0) = r;
  s(1, 1) = 1.0 / r;
  return {s, 1};
}

SymplecticMatrix beamsplitter(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Mat b = Mat::Zero(4, 4);
  b.block<2, 2>(0, 0) = c * Mat::Identity(2, 2);
  b.block<2, 2>(0, 2) = s * Mat::Identity(2, 2);
  b.block<2, 2>(2, 0) = -s * Mat::Identity(2, 2);
  b.block<2, 2>(2, 2) = c * Mat::Identity(2, 2);
  return {b, 2};
}

SymplecticMatrix sum_gate(double delta) {
  Mat g = Mat::Identity(4, 4);
  g(1, 3) = -delta;  // -delta * proj_P on the upper-right block
  g(2, 0) = delta;   // delta * proj_Q on the lower-left block
  return {g, 2};
}

SymplecticMatrix tms(double gain) {
  if (!(gain >= 1.0)) throw DomainError("tms: gain must be >= 1");
  const double a = std::sqrt(gain), b = std::sqrt(gain - 1.0);
  Mat z = Mat::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  Mat s = Mat::Zero(4, 4);
  s.block<2, 2>(0, 0) = a * Mat::Identity(2, 2);
  s.block<2, 2>(0, 2) = b * z;
  s.block<2, 2>(2, 0) = b * z;
  s.block<2, 2>(2, 2) = a * Mat::Identity(2, 2);
  return {s, 2};
}

// Squeezed-repetition encodings. Written here column-convention: the source
// tables are row-convention (entries transposed), same as the d4 generator.
SymplecticMatrix sqrep2(double lambda) {
  if (!(lambda > 0.0)) throw DomainError("sqrep2: lambda must be positive");
  const double l = lambda;
  Mat s(4, 4);
  s << 1.0 / l, 0, l, 0,  //
      0, l, 0, 0,         //
      0, 0, l, 0,         //
      0, -l, 0, 1.0 / l;
  return {s, 2};
}

SymplecticMatrix sqrep3(double lambda) {
  if (!(lambda > 0.0)) throw DomainError("sqrep3: lambda must be positive");
  const double l = lambda;
  Mat s(6, 6);
  s << 1.0 / (l * l), 0, 1, 0, l * l, 0,  //
      0, l * l, 0, 0, 0, 0,               //
      0, 0, l, 0, l * l * l, 0,           //
      0, -l, 0, 1.0 / l, 0, 0,            //
      0, 0, 0, 0, l, 0,                   //
      0, 0, 0, -l, 0, 1.0 / l;
  return {s, 3};
}

Mat direct_sum(const Mat& a, const Mat& b) {
  Mat out = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

Mat embed_two_mode(const Mat& s4, int modes, int i, int j) {
  if (s4.rows() != 4 || s4.cols() != 4) {
    throw DimensionError("embed_two_mode: operation must be 4x4");
  }
  if (i == j || i < 0 || j < 0 || i >= modes || j >= modes) {
    throw DomainError("embed_two_mode: mode indices out of range");
  }
  Mat out = Mat::Identity(2 * modes, 2 * modes);
  const int at[2] = {i, j};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      out.block<2, 2>(2 * at[a], 2 * at[b]) = s4.block<2, 2>(2 * a, 2 * b);
    }
  }
  return out;
}

Mat squeeze_chain(const Vec& r) {
  Mat d = Mat::Zero(2 * r.size(), 2 * r.size());
  for (int i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0)) throw DomainError("squeeze_chain: values must be > 0");
    d(2 * i, 2 * i) = r[i];
    d(2 * i + 1, 2 * i + 1) = 1.0 / r[i];
  }
  return d;
}

BlochMessiah bloch_messiah(const SymplecticMatrix& s, double tol) {
  require_symplectic(s.entries, tol, "bloch_messiah");
  const int dim = static_cast<int>(s.entries.rows());
  const int k = dim / 2;
  const Mat w = omega(k);

  Eigen::SelfAdjointEigenSolver<Mat> es(s.entries * s.entries.transpose());
  if (es.info() != Eigen::Success) {
    throw NumericalError("bloch_messiah: eigendecomposition failed");
  }

  // Eigenvalues of P = sqrt(S S^T) come in (lam, 1/lam) pairs. One
  // representative per pair is taken from the lam >= 1 side; the lam = 1
  // subspace is paired greedily since any vector there has its omega-partner
  // in the same subspace.
  struct Pair {
    double lam;
    Vec v;
  };
  std::vector<Pair> pairs;
  std::vector<Vec> unit_basis;
  const double split = 1e-9;
  for (int i = 0; i < dim; ++i) {
    const double lam = std::sqrt(es.eigenvalues()[i]);
    Vec v = es.eigenvectors().col(i);
    canonicalize_sign(v);
    if (lam > 1.0 + split) {
      pairs.push_back({lam, std::move(v)});
    } else if (lam >= 1.0 - split) {
      unit_basis.push_back(std::move(v));
    }
  }
  while (!unit_basis.empty()) {
    Vec v = unit_basis.back();
    unit_basis.pop_back();
    canonicalize_sign(v);
    pairs.push_back({1.0, v});
    const Vec partner = -w * v;
    // Remove the span of {v, partner} from what is left, discarding the
    // directions the removal collapses so the dimension count stays exact.
    std::vector<Vec> rest;
    for (Vec& u : unit_basis) {
      u -= v.dot(u) * v + partner.dot(u) * partner;
      for (const Vec& kept : rest) {
        u -= kept.dot(u) * kept;
      }
      const double n = u.norm();
      if (n > 1e-6) rest.push_back(u / n);
    }
    unit_basis = std::move(rest);
  }
  if (static_cast<int>(pairs.size()) != k) {
    throw NumericalError("bloch_messiah: eigenvalue pairing failed");
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (std::abs(a.lam - b.lam) > 1e-9 * std::max(a.lam, b.lam)) {
      return a.lam > b.lam;
    }
    return lex_less(a.v, b.v);
  });

  Mat left = Mat::Zero(dim, dim);
  Vec r(k);
  for (int i = 0; i < k; ++i) {
    left.col(2 * i) = pairs[i].v;
    left.col(2 * i + 1) = -w * pairs[i].v;
    r[i] = pairs[i].lam;
  }

  // P^{-1} from the same eigensystem, then the right factor O2 = O1^T P^{-1} S.
  Mat p_inv = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    p_inv += es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose() /
             std::sqrt(es.eigenvalues()[i]);
  }
  const Mat right = left.transpose() * p_inv * s.entries;

  const Mat rebuilt = left * squeeze_chain(r) * right;
  const double resid = (rebuilt - s.entries).norm();
  if (!(resid < 1e-8 * std::max(1.0, s.entries.norm()))) {
    std::ostringstream os;
    os << "bloch_messiah: reconstruction residual " << resid;
    throw NumericalError(os.str());
  }
  return {as_symplectic(left, 1e-8), r, as_symplectic(right, 1e-8)};
}

WilliamsonResult williamson(const Mat& v) {
  require_even_square(v, "williamson");
  const int dim = static_cast<int>(v.rows());
  const int k = dim / 2;
  if ((v - v.transpose()).norm() > 1e-9 * std::max(1.0, v.norm())) {
    throw DomainError("williamson: matrix is not symmetric");
  }
  const Mat vs = 0.5 * (v + v.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(vs);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
    throw DomainError("williamson: matrix is not positive definite");
  }
  Mat root = Mat::Zero(dim, dim), iroot = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const Mat outer =
        es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose();
    root += std::sqrt(es.eigenvalues()[i]) * outer;
    iroot += outer / std::sqrt(es.eigenvalues()[i]);
  }

  const Mat w = omega(k);
  const Mat a = iroot * w * iroot;  // antisymmetric
  Eigen::RealSchur<Mat> schur(a);
  if (schur.info() != Eigen::Success) {
    throw NumericalError("williamson: Schur decomposition failed");
  }
  Mat q = schur.matrixU();
  const Mat& t = schur.matrixT();

  // For an antisymmetric matrix the quasi-triangular factor is block diagonal
  // with 2x2 blocks [[0, kappa], [-kappa, 0]]; normalize each block's sign and
  // sort by nu = 1/kappa.
  std::vector<std::pair<double, int>> nus(k);
  for (int i = 0; i < k; ++i) {
    double kappa = t(2 * i, 2 * i + 1);
    if (kappa < 0.0) {
      q.col(2 * i).swap(q.col(2 * i + 1));
      kappa = -kappa;
    }
    if (!(kappa > 0.0)) {
      throw NumericalError("williamson: degenerate Schur block");
    }
    nus[i] = {1.0 / kappa, i};
  }
  std::sort(nus.begin(), nus.end(),
            [](const auto& a_, const auto& b_) { return a_.first > b_.first; });

  Mat s = Mat::Zero(dim, dim);
  Vec eig(k);
  for (int i = 0; i < k; ++i) {
    const auto [nu, src] = nus[i];
    eig[i] = nu;
    s.col(2 * i) = root * q.col(2 * src) / std::sqrt(nu);
    s.col(2 * i + 1) = root * q.col(2 * src + 1) / std::sqrt(nu);
  }

  Mat d = Mat::Zero(dim, dim);
  for (int i = 0; i < k; ++i) d(2 * i, 2 * i) = d(2 * i + 1, 2 * i + 1) = eig[i];
  const double resid = (s * d * s.transpose() - vs).norm();
  if (!(resid < 1e-8 * std::max(1.0, vs.norm()))) {
    std::ostringstream os;
    os << "williamson: reconstruction residual " << resid;
    throw NumericalError(os.str());
  }
  return {as_symplectic(std::move(s), 1e-7), eig};
}

GaussianChannel gaussian_compose(const GaussianChannel& ch1,
                                 const GaussianChannel& ch2) {
  if (ch2.x.cols() != ch1.x.rows() || ch1.y.rows() != ch1.x.rows() ||
      ch2.y.rows() != ch2.x.rows()) {
    throw DimensionError("gaussian_compose: dimension mismatch");
  }
  const Vec d1 = ch1.d.size() ? ch1.d : Vec::Zero(ch1.x.rows());
  const Vec d2 = ch2.d.size() ? ch2.d : Vec::Zero(ch2.x.rows());
  GaussianChannel out;
  out.d = d2 + ch2.x * d1;
  out.x = ch2.x * ch1.x;
  out.y = ch2.x * ch1.y * ch2.x.transpose() + ch2.y;
  return out;
}

}  // namespace gkpstab
