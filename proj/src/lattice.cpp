#include "gkpstab/lattice.hpp"

#include <cmath>
#include <sstream>

namespace gkpstab {

const double kEll = std::sqrt(2.0 * M_PI);

Lattice from_symplectic(const SymplecticMatrix& lambda,
                        const std::string& label) {
  require_symplectic(lambda.entries, 1e-10, "from_symplectic");
  Lattice l;
  l.modes = lambda.modes;
  l.generator = kEll * lambda.entries * omega(lambda.modes);
  l.label = label;
  return l;
}

Lattice square(int modes) {
  if (modes < 1) throw DomainError("square: modes must be >= 1");
  Lattice l;
  l.modes = modes;
  l.generator = kEll * Mat::Identity(2 * modes, 2 * modes);
  l.label = "square";
  return l;
}

Lattice rectangular(double eta) { return from_symplectic(squeeze(eta), "rectangular"); }

Lattice hexagonal() {
  const double c = std::sqrt(2.0) / std::pow(3.0, 0.25);
  Mat lam(2, 2);
  lam << c, -0.5 * c, 0.0, c * std::sqrt(3.0) / 2.0;
  return from_symplectic(as_symplectic(lam), "hexagonal");
}

Lattice hexagonal_pair() {
  // Each mode carries the squeezed-rotated hexagonal representation
  // Sq(3^(1/4)) R(pi/4); the orientation matters once the two modes feed a
  // concatenated encoding.
  const Mat m =
      squeeze(std::pow(3.0, 0.25)).entries * rotation(M_PI / 4.0).entries;
  return from_symplectic(as_symplectic(direct_sum(m, m)), "hexagonal-pair");
}

Lattice d4() {
  const double u = std::pow(2.0, 0.25);
  const double h = 0.5, q = 1.0 / std::sqrt(2.0);
  Mat printed(4, 4);
  printed << h, -q, h, 0.0,  //
      0.0, q, 0.0, q,        //
      0.0, q, 0.0, -q,       //
      -h, 0.0, h, q;
  printed *= u;
  return from_symplectic(as_symplectic(printed.transpose()), "d4");
}

Lattice bell() { return from_symplectic(beamsplitter(M_PI / 4.0), "bell"); }

Eigen::MatrixXi check_integral(const Lattice& l) {
  const int dim = static_cast<int>(l.generator.rows());
  if (l.generator.cols() != dim || dim != 2 * l.modes) {
    throw DimensionError("check_integral: generator shape does not match modes");
  }
  if (std::abs(l.generator.determinant()) <= 1e-12) {
    throw ValidationError("check_integral: generator columns are dependent");
  }
  const Mat g =
      l.generator.transpose() * omega(l.modes) * l.generator / (2.0 * M_PI);
  Eigen::MatrixXi a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const double rounded = std::round(g(i, j));
      if (std::abs(g(i, j) - rounded) > 1e-9) {
        std::ostringstream os;
        os << "check_integral: entry (" << i << "," << j << ") = " << g(i, j)
           << " is not integral";
        throw ValidationError(os.str());
      }
      a(i, j) = static_cast<int>(rounded);
    }
  }
  return a;
}

bool is_self_dual(const Lattice& l) {
  const Eigen::MatrixXi a = check_integral(l);
  const int dim = static_cast<int>(a.rows());
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const int mode_pair = (i / 2 == j / 2);
      int w = 0;
      if (mode_pair && i + 1 == j) w = 1;
      if (mode_pair && i == j + 1) w = -1;
      if (a(i, j) != w) return false;
    }
  }
  return true;
}

Lattice change_basis(const Lattice& l, const Eigen::MatrixXi& n) {
  if (n.rows() != l.generator.rows() || n.cols() != l.generator.cols()) {
    throw DimensionError("change_basis: basis-change matrix has wrong shape");
  }
  const double det = n.cast<double>().determinant();
  if (std::llround(det) != 1) {
    std::ostringstream os;
    os << "change_basis: determinant is " << det << ", must be exactly 1";
    throw DomainError(os.str());
  }
  Lattice out;
  out.modes = l.modes;
  out.generator = l.generator * n.cast<double>().transpose();
  out.label = l.label.empty() ? "rebased" : l.label + "/rebased";
  return out;
}

Lattice param_lattice(double r, double theta) {
  const SymplecticMatrix lam =
      as_symplectic(squeeze(r).entries * rotation(theta).entries);
  Lattice l = from_symplectic(lam, "param");
  return l;
}

double shortest_vector_norm(const Lattice& l, int range) {
  if (range < 1) throw DomainError("shortest_vector_norm: range must be >= 1");
  const int dim = static_cast<int>(l.generator.cols());
  std::vector<int> c(dim, -range);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    bool zero = true;
    for (int v : c) {
      if (v != 0) {
        zero = false;
        break;
      }
    }
    if (!zero) {
      Vec x = Vec::Zero(l.generator.rows());
      for (int i = 0; i < dim; ++i) x += c[i] * l.generator.col(i);
      best = std::min(best, x.norm());
    }
    int pos = 0;
    while (pos < dim && c[pos] == range) c[pos++] = -range;
    if (pos == dim) break;
    ++c[pos];
  }
  return best;
}

std::vector<HexEquivalent> hex_equivalents() {
  // (theta, r) representatives of the hexagonal lattice and the unimodular
  // basis changes that produce them from hexagonal() via change_basis.
  std::vector<HexEquivalent> out(4);
  out[0].theta = M_PI / 4.0;
  out[0].r = std::pow(3.0, 0.25);
  out[0].n << 0, -1, 1, 0;
  out[1].theta = 0.491396861623664;
  out[1].r = 2.095487312351147;
  out[1].n << 0, -1, 1, 1;
  out[2].theta = 0.347369138098351;
  out[2].r = 3.021266606299401;
  out[2].n << 0, -1, 1, 2;
  out[3].theta = 0.576285998607834;
  out[3].r = 3.385224275431923;
  out[3].n << -1, -1, 2, 1;
  return out;
}

}  // namespace gkpstab
