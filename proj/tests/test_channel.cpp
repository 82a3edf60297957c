#include <cmath>

#include "doctest.h"
#include "gkpstab/channel.hpp"

using namespace gkpstab;

TEST_SUITE("channel") {

TEST_CASE("iid noise and covariance") {
  const AgnModel n = iid_noise(0.01, 3);
  REQUIRE(n.variances.size() == 3);
  CHECK(n.variances.minCoeff() == 0.01);
  CHECK(n.variances.maxCoeff() == 0.01);
  CHECK((noise_covariance(n) - 0.01 * Mat::Identity(6, 6)).norm() < 1e-15);
  CHECK_THROWS_AS(iid_noise(0.0, 1), DomainError);
  CHECK_THROWS_AS(iid_noise(0.1, 0), DomainError);
}

TEST_CASE("make_code validates shapes") {
  CHECK_NOTHROW(make_code(tms(2.0), square(1), 1, 1));
  CHECK_THROWS_AS(make_code(tms(2.0), square(1), 0, 2), DomainError);
  CHECK_THROWS_AS(make_code(tms(2.0), square(2), 1, 2), DimensionError);
  CHECK_THROWS_AS(make_code(tms(2.0), square(2), 1, 1), DimensionError);
}

TEST_CASE("noise propagates through the encoder inverse") {
  const CodeSpec code = make_code(tms(2.0), square(1), 1, 1);
  const AgnModel noise = iid_noise(0.04, 2);
  const Mat v_x = propagate_noise(code, noise);
  const Mat s = code.encoding.entries;
  CHECK((s * v_x * s.transpose() - 0.04 * Mat::Identity(4, 4)).norm() < 1e-12);
  CHECK((v_x - v_x.transpose()).norm() < 1e-12);
}

TEST_CASE("finite gkp factories") {
  CHECK(FiniteGkp::ideal().exact());
  const FiniteGkp f = FiniteGkp::with_variance(0.05);
  CHECK(f.prep_var == 0.05);
  CHECK(f.meas_var == 0.05);
  CHECK(!f.exact());
  CHECK(gkp_variance_from_db(10.0) == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(gkp_db_from_variance(gkp_variance_from_db(12.3)) ==
        doctest::Approx(12.3).epsilon(1e-12));
  CHECK(gkp_variance_from_delta(0.5) ==
        doctest::Approx(std::tanh(0.125)).epsilon(1e-15));
  CHECK_THROWS_AS(FiniteGkp::with_variance(1.0), DomainError);
  CHECK_THROWS_AS(FiniteGkp::with_variance(-0.1), DomainError);
  CHECK_THROWS_AS(gkp_variance_from_delta(0.0), DomainError);
}

TEST_CASE("noise blocks invert the transformed covariance") {
  const CodeSpec code = make_code(tms(3.0), hexagonal(), 1, 1);
  const Mat v_x = propagate_noise(code, iid_noise(0.01, 2));
  const NoiseBlocks b = noise_blocks(v_x, code.lattice);
  const Mat t = syndrome_covariance(v_x, code.lattice);

  Mat prec(4, 4);
  prec.topLeftCorner(2, 2) = b.v_d;
  prec.topRightCorner(2, 2) = b.v_da;
  prec.bottomLeftCorner(2, 2) = b.v_da.transpose();
  prec.bottomRightCorner(2, 2) = b.v_a;
  CHECK((prec * t - Mat::Identity(4, 4)).norm() < 1e-9);

  // Syndrome-sector precision two ways: Schur complement of the inverse
  // blocks, and the direct inverse of the forward syndrome covariance.
  const Mat schur = b.v_a - b.v_da.transpose() * b.v_d.inverse() * b.v_da;
  CHECK((b.v_cond - schur).norm() < 1e-9);
  const Mat t_aa = t.bottomRightCorner(2, 2);
  CHECK((b.v_cond - t_aa.inverse()).norm() < 1e-9);
  CHECK(b.data_modes == 1);
  CHECK(b.ancilla_modes == 1);
}

TEST_CASE("finite gkp adds prep and measurement noise") {
  const CodeSpec code = make_code(tms(2.5), square(1), 1, 1);
  const Mat v_x = propagate_noise(code, iid_noise(0.01, 2));
  const FiniteGkp fin = FiniteGkp::with_variance(0.03);
  const Mat exact = syndrome_covariance(v_x, code.lattice);
  const Mat noisy = syndrome_covariance(v_x, code.lattice, fin);
  const Mat mhat = code.lattice.generator / kEll;
  const Mat extra = 0.03 * (mhat.transpose() * mhat) +
                    0.03 * Mat::Identity(2, 2);
  CHECK((noisy.topLeftCorner(2, 2) - exact.topLeftCorner(2, 2)).norm() <
        1e-12);
  CHECK((noisy.bottomRightCorner(2, 2) - exact.bottomRightCorner(2, 2) -
         extra)
            .norm() < 1e-12);
  CHECK_THROWS_AS(noise_blocks(Mat::Identity(2, 2), square(1)),
                  DimensionError);
}

}  // TEST_SUITE
