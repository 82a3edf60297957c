#pragma once

#include <cmath>
#include <random>
#include <stdexcept>

#include "gkpstab/symplectic.hpp"

namespace testutil {

using gkpstab::Mat;

// Embeds a single-mode 2x2 operation on mode i of a `modes`-mode identity.
inline Mat embed_single(const Mat& s2, int modes, int i) {
  Mat out = Mat::Identity(2 * modes, 2 * modes);
  out.block(2 * i, 2 * i, 2, 2) = s2;
  return out;
}

// Random product of elementary Gaussian operations; stays well conditioned
// because every factor has moderate parameters.
inline gkpstab::SymplecticMatrix random_symplectic(std::mt19937_64& rng,
                                                   int modes, int factors) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> logr(-0.7, 0.7);
  std::uniform_real_distribution<double> gain(1.05, 3.5);
  std::uniform_int_distribution<int> mode(0, modes - 1);
  std::uniform_int_distribution<int> kind(0, modes > 1 ? 4 : 1);

  Mat s = Mat::Identity(2 * modes, 2 * modes);
  for (int f = 0; f < factors; ++f) {
    switch (kind(rng)) {
      case 0:
        s = embed_single(gkpstab::rotation(angle(rng)).entries, modes,
                         mode(rng)) *
            s;
        break;
      case 1:
        s = embed_single(gkpstab::squeeze(std::exp(logr(rng))).entries, modes,
                         mode(rng)) *
            s;
        break;
      default: {
        int i = mode(rng);
        int j = mode(rng);
        while (j == i) j = mode(rng);
        Mat op;
        const int k = kind(rng);
        if (k <= 2)
          op = gkpstab::beamsplitter(angle(rng)).entries;
        else if (k == 3)
          op = gkpstab::sum_gate(logr(rng)).entries;
        else
          op = gkpstab::tms(gain(rng)).entries;
        s = gkpstab::embed_two_mode(op, modes, i, j) * s;
        break;
      }
    }
  }
  return gkpstab::as_symplectic(std::move(s), 1e-8);
}

// Random encoding whose data-block symplectic spectrum is comfortably away
// from 1 and from internal degeneracies, so the two-mode-squeezer reduction
// is well conditioned. Near-degenerate distinct eigenvalues make the cross
// coupling ill-posed, hence the relative-gap rejection.
inline gkpstab::SymplecticMatrix random_encoding_with_gap(std::mt19937_64& rng,
                                                          int data_modes,
                                                          int ancilla_modes) {
  const int k = data_modes + ancilla_modes;
  for (int attempt = 0; attempt < 200; ++attempt) {
    gkpstab::SymplecticMatrix s = random_symplectic(rng, k, 10);
    const Mat inv = s.entries.inverse();
    const Mat t = inv * inv.transpose();
    const gkpstab::WilliamsonResult wd =
        gkpstab::williamson(t.topLeftCorner(2 * data_modes, 2 * data_modes));
    bool ok = true;
    for (int i = 0; i < wd.eigenvalues.size(); ++i) {
      if (wd.eigenvalues(i) < 1.0 + 1e-3) ok = false;
      for (int j = i + 1; j < wd.eigenvalues.size(); ++j) {
        const double gap = std::abs(wd.eigenvalues(i) - wd.eigenvalues(j)) /
                           wd.eigenvalues(i);
        if (gap < 1e-4) ok = false;
      }
    }
    if (ok) return s;
  }
  throw std::runtime_error("random_encoding_with_gap: rejection stalled");
}

}  // namespace testutil
