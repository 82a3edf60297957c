#include <cmath>

#include "doctest.h"
#include "gkpstab/channel.hpp"
#include "gkpstab/decode.hpp"

using namespace gkpstab;

namespace {

CodeSpec single_layer(double gain, const Lattice& l) {
  return make_code(tms(gain), l, 1, 1);
}

bool bitwise_equal(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a.array() == b.array()).all();
}

DecodeReport quad_report(double gain, const Lattice& l, double sigma_sq,
                         EstimatorKind kind, QuadConfig qc = {}) {
  const CodeSpec code = single_layer(gain, l);
  return output_covariance_quadrature(code, iid_noise(sigma_sq, 2),
                                      FiniteGkp::ideal(), kind, {}, qc);
}

}  // namespace

TEST_SUITE("decode") {

TEST_CASE("cell geometry") {
  const double h = cell_half_width();
  CHECK(h == doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-15));

  Vec raw(3);
  raw << h, -h, h - 1e-9;
  const Vec w = wrap_to_cell(raw);
  CHECK(w(0) == doctest::Approx(-h).epsilon(1e-12));  // half-open upper edge
  CHECK(w(1) == doctest::Approx(-h).epsilon(1e-12));
  CHECK(w(2) == doctest::Approx(h - 1e-9).epsilon(1e-12));

  Vec far(1);
  far << 0.3 + 5.0 * std::sqrt(2.0 * M_PI);
  CHECK(wrap_to_cell(far)(0) == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("syndrome is invariant under lattice translates") {
  for (const Lattice& l : {square(1), hexagonal()}) {
    Vec x(2);
    x << 0.37, -0.81;
    Vec k(2);
    k << 3, -2;
    const Vec shifted = x + l.generator * k;
    const Syndrome s0 = syndrome(x, l);
    const Syndrome s1 = syndrome(shifted, l);
    CHECK((s0.s - s1.s).norm() < 1e-9);
    for (int i = 0; i < s0.s.size(); ++i) {
      CHECK(s0.s(i) >= -cell_half_width());
      CHECK(s0.s(i) < cell_half_width());
    }
  }
}

TEST_CASE("cell translates: symmetric, zero-centered, precision-driven") {
  const Mat tight = 50.0 * Mat::Identity(2, 2);
  const Mat loose = 2.0 * Mat::Identity(2, 2);
  const CellTranslates a = cell_translates(tight);
  const CellTranslates b = cell_translates(loose);
  CHECK(b.n_max > a.n_max);
  bool has_zero = false;
  for (int i = 0; i < a.points.rows(); ++i) {
    if (a.points.row(i).norm() == 0.0) has_zero = true;
    bool found_neg = false;
    for (int j = 0; j < a.points.rows(); ++j)
      if ((a.points.row(i) + a.points.row(j)).norm() < 1e-12) found_neg = true;
    CHECK(found_neg);
  }
  CHECK(has_zero);

  TruncationPolicy strict;
  strict.max_range = 1;
  CHECK_THROWS_AS(cell_translates(0.5 * Mat::Identity(2, 2), strict),
                  NumericalError);
}

TEST_CASE("linear estimator vanishes on the zero syndrome") {
  const CodeSpec code = single_layer(3.0, square(1));
  const Mat v_x = propagate_noise(code, iid_noise(0.01, 2));
  const NoiseBlocks blocks = noise_blocks(v_x, code.lattice);
  Syndrome s;
  s.s = Vec::Zero(2);
  CHECK(estimator_linear(blocks, s).norm() < 1e-12);
  CHECK(estimator_mmse(blocks, s).norm() < 1e-9);
  CHECK(joint_syndrome_pdf(blocks, s) > 0.0);
}

TEST_CASE("metrics order") {
  Mat v(2, 2);
  v << 2.0, 0.3, 0.3, 0.5;
  const auto [gm, rms] = metrics(v);
  CHECK(gm == doctest::Approx(std::sqrt(v.determinant())).epsilon(1e-12));
  CHECK(rms == doctest::Approx(v.trace() / 2.0).epsilon(1e-12));
  CHECK(rms >= gm);
}

TEST_CASE("quadrature reproduces the frozen square-lattice value") {
  const DecodeReport rep =
      quad_report(4.923320, square(1), 1e-2, EstimatorKind::kMmse);
  CHECK(rep.sigma_rms_sq ==
        doctest::Approx(1.25129031e-3).epsilon(5e-6));
  CHECK(std::abs(rep.sigma_gm_sq - rep.sigma_rms_sq) < 1e-6);
  CHECK(!rep.seed.has_value());
  CHECK(rep.samples_or_nodes > 0);

  // Deterministic evaluation: identical calls agree bitwise.
  const DecodeReport again =
      quad_report(4.923320, square(1), 1e-2, EstimatorKind::kMmse);
  CHECK(bitwise_equal(again.v_out, rep.v_out));
}

TEST_CASE("monte carlo agrees with quadrature within three standard errors") {
  const CodeSpec code = single_layer(4.923320, square(1));
  const DecodeReport quad =
      quad_report(4.923320, square(1), 1e-2, EstimatorKind::kMmse);
  McConfig mc;
  mc.samples = 200000;
  mc.seed = 3;
  const DecodeReport sampled = output_covariance_mc(
      code, iid_noise(1e-2, 2), FiniteGkp::ideal(), EstimatorKind::kMmse, {},
      mc);
  CHECK(sampled.seed.has_value());
  CHECK(*sampled.seed == 3);
  CHECK(std::abs(sampled.sigma_rms_sq - quad.sigma_rms_sq) <
        3.0 * sampled.numerical_error + 1e-9);
}

TEST_CASE("mmse approaches the linear estimator at small noise") {
  const DecodeReport lin =
      quad_report(3.0, square(1), 1e-4, EstimatorKind::kLinear);
  const DecodeReport mmse =
      quad_report(3.0, square(1), 1e-4, EstimatorKind::kMmse);
  CHECK(std::abs(lin.sigma_rms_sq - mmse.sigma_rms_sq) <
        1e-6 * mmse.sigma_rms_sq);
}

TEST_CASE("mmse beats the linear estimator at large noise") {
  const DecodeReport lin =
      quad_report(1.5, square(1), 0.25, EstimatorKind::kLinear);
  const DecodeReport mmse =
      quad_report(1.5, square(1), 0.25, EstimatorKind::kMmse);
  CHECK(mmse.sigma_rms_sq <= lin.sigma_rms_sq + 1e-9);
}

TEST_CASE("monte carlo is seed-reproducible and thread-invariant") {
  const CodeSpec code = single_layer(5.0, hexagonal());
  const AgnModel noise = iid_noise(1e-2, 2);
  McConfig serial;
  serial.samples = 60000;
  serial.seed = 11;
  serial.threads = 1;
  McConfig parallel = serial;
  parallel.threads = 2;

  const DecodeReport a = output_covariance_mc(
      code, noise, FiniteGkp::ideal(), EstimatorKind::kMmse, {}, serial);
  const DecodeReport b = output_covariance_mc(
      code, noise, FiniteGkp::ideal(), EstimatorKind::kMmse, {}, parallel);
  const DecodeReport c = output_covariance_mc(
      code, noise, FiniteGkp::ideal(), EstimatorKind::kMmse, {}, serial);
  CHECK(bitwise_equal(a.v_out, b.v_out));  // across thread counts
  CHECK(bitwise_equal(a.v_out, c.v_out));  // across reruns
  CHECK(a.sigma_rms_sq == b.sigma_rms_sq);

  McConfig other = serial;
  other.seed = 12;
  const DecodeReport d = output_covariance_mc(
      code, noise, FiniteGkp::ideal(), EstimatorKind::kMmse, {}, other);
  CHECK(!bitwise_equal(d.v_out, a.v_out));
}

TEST_CASE("reports respect the closed-form trace floor") {
  const double sigma_sq = 1e-2;
  const double gain = 4.0;
  const DecodeReport rep =
      quad_report(gain, square(1), sigma_sq, EstimatorKind::kMmse);
  const double floor = 2.0 * sigma_sq / (2.0 * gain - 1.0);
  CHECK(2.0 * rep.sigma_rms_sq >= floor - 1e-12);
  CHECK(rep.sigma_rms_sq >= rep.sigma_gm_sq - 1e-12);
}

}  // TEST_SUITE
