#pragma once

#include <string>
#include <vector>

#include "gkpstab/symplectic.hpp"

namespace gkpstab {

// Lattice spacing ell = sqrt(2*pi); generators are stored with this factor.
extern const double kEll;

// GKP lattice described by a generator matrix whose columns are the basis
// displacement vectors. Symplectic integrality: M^T Omega M = 2*pi*A with A
// integer and antisymmetric; self-dual lattices have A = Omega.
struct Lattice {
  Mat generator;  // 2M x 2M
  int modes = 0;  // M
  std::string label;
};

// M = sqrt(2*pi) * Lambda * Omega; always self-dual.
Lattice from_symplectic(const SymplecticMatrix& lambda,
                        const std::string& label = "");

// The canonical square lattice on `modes` modes, generator ell * I.
Lattice square(int modes);

// Single-mode rectangular lattice with aspect eta: from_symplectic(Sq(eta)).
Lattice rectangular(double eta);

// Single-mode hexagonal lattice (densest packing in 2D).
Lattice hexagonal();

// Two uncoupled hexagonal modes, each in the squeezed-rotated frame
// Sq(3^(1/4)) R(pi/4). Use this orientation when the pair feeds a
// concatenated encoding.
Lattice hexagonal_pair();

// Two-mode D4 lattice (densest packing in 4D); involves squeezing.
Lattice d4();

// Two-mode GKP Bell lattice from a balanced beamsplitter on two squares.
Lattice bell();

// A = round(M^T Omega M / 2pi); throws ValidationError when any entry is
// farther than 1e-9 from its rounding.
Eigen::MatrixXi check_integral(const Lattice& l);

bool is_self_dual(const Lattice& l);

// Generator right-multiplied by N^T; N integer with det N = 1 describes the
// same lattice in a new basis.
Lattice change_basis(const Lattice& l, const Eigen::MatrixXi& n);

// Single-mode lattice family from_symplectic(Sq(r) * R(theta)).
Lattice param_lattice(double r, double theta);

// Norm of the shortest nonzero lattice vector, by bounded enumeration of
// integer combinations of the generator columns.
double shortest_vector_norm(const Lattice& l, int range = 3);

struct HexEquivalent {
  double theta;
  double r;
  Eigen::Matrix2i n;
};

// The four equivalent single-mode representations of the hexagonal lattice:
// change_basis(hexagonal(), e.n) generates the same lattice as
// param_lattice(e.r, e.theta) up to a global rotation.
std::vector<HexEquivalent> hex_equivalents();

}  // namespace gkpstab
