#pragma once

#include <utility>

#include "gkpstab/symplectic.hpp"

namespace gkpstab {

// Normal form of an encoding under local (data | ancilla) symplectics:
//   (lambda_d (+) lambda_a) . S^-1 S^-T . (lambda_d (+) lambda_a)^T
//     = (+)_i S_{G_i} S_{G_i}^T  (+)  I
// where data mode i couples ancilla mode i with cross block 2 sqrt(G(G-1)) Z,
// gains sorted descending, surplus ancilla modes left at identity. With a
// single data mode, lambda_d is the symmetric positive solution; otherwise the
// per-pair rotation gauge is unspecified.
struct ReductionResult {
  Vec gains;                  // data_modes entries, >= 1, descending
  SymplecticMatrix lambda_d;  // acts on the data block
  SymplecticMatrix lambda_a;  // acts on the ancilla block
  double residual = 0.0;      // Frobenius error of the reconstruction
};

// Reduces an encoding over data_modes + ancilla_modes to coupled two-mode
// squeezers. sigma scales both sides of the reconstruction identically and
// participates only in validation.
ReductionResult reduce_to_tms(const SymplecticMatrix& s_enc, int data_modes,
                              int ancilla_modes, double sigma);

// Equivalent gains for the staircase that couples data to the first ancilla
// (gain g1) before the two ancillas (gain g2): the data layer folds to
// 1 + g2 (g1 - 1) and the ancilla coupling to g1 g2 over that. The returned
// pair parameterizes the ancilla-first staircase describing the same code.
std::pair<double, double> staircase_gains(double g1, double g2);

// Equivalent dominant gain of the three-mode squeezed-repetition encoder.
double sqrep3_gain(double lambda);

// Closed-form data-mode squeezer paired with sqrep3_gain. It carries the
// reduced normal form back into the encoded noise, so the lambda_d reported by
// reduce_to_tms(sqrep3(lambda), 1, 2, .) is its inverse.
SymplecticMatrix sqrep3_data_squeezer(double lambda);

}  // namespace gkpstab
