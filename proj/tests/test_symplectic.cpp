#include <cmath>
#include <random>

#include "doctest.h"
#include "gkpstab/symplectic.hpp"
#include "helpers.hpp"

using namespace gkpstab;

namespace {

double frob(const Mat& a) { return a.norm(); }

}  // namespace

TEST_SUITE("symplectic") {

TEST_CASE("omega structure") {
  const Mat w = omega(2);
  Mat expect(4, 4);
  expect << 0, 1, 0, 0, -1, 0, 0, 0, 0, 0, 0, 1, 0, 0, -1, 0;
  CHECK(frob(w - expect) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(frob(w * w.transpose() - Mat::Identity(4, 4)) < 1e-15);
  CHECK_THROWS_AS(omega(0), DomainError);
}

TEST_CASE("rotation entries") {
  const double t = 0.3;
  const Mat r = rotation(t).entries;
  CHECK(r(0, 0) == doctest::Approx(std::cos(t)).epsilon(1e-15));
  CHECK(r(0, 1) == doctest::Approx(std::sin(t)).epsilon(1e-15));
  CHECK(r(1, 0) == doctest::Approx(-std::sin(t)).epsilon(1e-15));
  CHECK(r(1, 1) == doctest::Approx(std::cos(t)).epsilon(1e-15));
}

TEST_CASE("squeeze entries and domain") {
  const Mat s = squeeze(1.7).entries;
  CHECK(s(0, 0) == doctest::Approx(1.7));
  CHECK(s(1, 1) == doctest::Approx(1.0 / 1.7));
  CHECK(s(0, 1) == 0.0);
  CHECK(s(1, 0) == 0.0);
  CHECK_THROWS_AS(squeeze(0.0), DomainError);
  CHECK_THROWS_AS(squeeze(-1.0), DomainError);
}

TEST_CASE("beamsplitter blocks") {
  const double t = 0.4;
  const Mat b = beamsplitter(t).entries;
  const Mat i2 = Mat::Identity(2, 2);
  CHECK(frob(b.block(0, 0, 2, 2) - std::cos(t) * i2) < 1e-15);
  CHECK(frob(b.block(0, 2, 2, 2) - std::sin(t) * i2) < 1e-15);
  CHECK(frob(b.block(2, 0, 2, 2) + std::sin(t) * i2) < 1e-15);
  CHECK(frob(b.block(2, 2, 2, 2) - std::cos(t) * i2) < 1e-15);
}

TEST_CASE("sum gate entries and additivity") {
  const double d = 0.7;
  const Mat g = sum_gate(d).entries;
  Mat expect = Mat::Identity(4, 4);
  expect(1, 3) = -d;
  expect(2, 0) = d;
  CHECK(frob(g - expect) < 1e-15);
  CHECK(frob(sum_gate(0.3).entries * sum_gate(0.4).entries - g) < 1e-15);
}

TEST_CASE("tms blocks") {
  const double gain = 3.0;
  const Mat t = tms(gain).entries;
  const Mat i2 = Mat::Identity(2, 2);
  Mat z(2, 2);
  z << 1, 0, 0, -1;
  CHECK(frob(t.block(0, 0, 2, 2) - std::sqrt(gain) * i2) < 1e-14);
  CHECK(frob(t.block(0, 2, 2, 2) - std::sqrt(gain - 1) * z) < 1e-14);
  CHECK(frob(t.block(2, 0, 2, 2) - std::sqrt(gain - 1) * z) < 1e-14);
  CHECK(frob(t.block(2, 2, 2, 2) - std::sqrt(gain) * i2) < 1e-14);
  CHECK(frob(tms(1.0).entries - Mat::Identity(4, 4)) < 1e-15);
  CHECK_THROWS_AS(tms(0.99), DomainError);
}

TEST_CASE("sqrep2 entries") {
  const double l = 1.3;
  Mat expect(4, 4);
  expect << 1 / l, 0, l, 0,
            0, l, 0, 0,
            0, 0, l, 0,
            0, -l, 0, 1 / l;
  CHECK(frob(sqrep2(l).entries - expect) < 1e-14);
  CHECK(is_symplectic(sqrep2(l).entries));
  CHECK_THROWS_AS(sqrep2(0.0), DomainError);
}

TEST_CASE("sqrep3 entries") {
  const double l = 0.7;
  Mat expect(6, 6);
  expect << 1 / (l * l), 0, 1, 0, l * l, 0,
            0, l * l, 0, 0, 0, 0,
            0, 0, l, 0, l * l * l, 0,
            0, -l, 0, 1 / l, 0, 0,
            0, 0, 0, 0, l, 0,
            0, 0, 0, -l, 0, 1 / l;
  CHECK(frob(sqrep3(l).entries - expect) < 1e-14);
  CHECK(is_symplectic(sqrep3(l).entries));
  CHECK_THROWS_AS(sqrep3(-0.5), DomainError);
}

TEST_CASE("as_symplectic rejects defects") {
  Mat bad = Mat::Identity(2, 2);
  bad(0, 0) = 1.01;
  CHECK_THROWS_AS(as_symplectic(bad), ValidationError);
  CHECK_THROWS_AS(as_symplectic(Mat::Identity(3, 3)), DimensionError);
}

TEST_CASE("random products satisfy the group identities") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<int> nmodes(1, 3);
  for (int it = 0; it < 300; ++it) {
    const int k = nmodes(rng);
    const SymplecticMatrix s = testutil::random_symplectic(rng, k, 6);
    const Mat w = omega(k);
    CHECK(is_symplectic(s.entries, 1e-8));
    const Mat inv = w * s.entries.transpose() * w.transpose();
    CHECK(frob(inv * s.entries - Mat::Identity(2 * k, 2 * k)) < 1e-8);
    CHECK(std::abs(s.entries.determinant() - 1.0) < 1e-6);
  }
}

TEST_CASE("embed acts only on the chosen pair") {
  const Mat b = beamsplitter(0.6).entries;
  const Mat e = embed_two_mode(b, 3, 0, 2);
  CHECK(frob(e.block(2, 2, 2, 2) - Mat::Identity(2, 2)) < 1e-15);
  CHECK(frob(e.block(0, 0, 2, 2) - b.block(0, 0, 2, 2)) < 1e-15);
  CHECK(frob(e.block(0, 4, 2, 2) - b.block(0, 2, 2, 2)) < 1e-15);
  CHECK(frob(e.block(4, 0, 2, 2) - b.block(2, 0, 2, 2)) < 1e-15);
  CHECK(frob(e.block(4, 4, 2, 2) - b.block(2, 2, 2, 2)) < 1e-15);
  CHECK_THROWS_AS(embed_two_mode(b, 3, 0, 3), DomainError);
  CHECK_THROWS_AS(embed_two_mode(Mat::Identity(2, 2), 3, 0, 1),
                  DimensionError);
}

TEST_CASE("direct sum and squeeze chain") {
  const Mat d = direct_sum(rotation(0.2).entries, squeeze(2.0).entries);
  CHECK(d.rows() == 4);
  CHECK(frob(d.block(0, 2, 2, 2)) == 0.0);
  Vec r(2);
  r << 2.0, 3.0;
  const Mat c = squeeze_chain(r);
  CHECK(c(0, 0) == doctest::Approx(2.0));
  CHECK(c(1, 1) == doctest::Approx(0.5));
  CHECK(c(2, 2) == doctest::Approx(3.0));
  CHECK(c(3, 3) == doctest::Approx(1.0 / 3.0));
  Vec bad(1);
  bad << -1.0;
  CHECK_THROWS_AS(squeeze_chain(bad), DomainError);
}

TEST_CASE("bloch-messiah round trip") {
  std::mt19937_64 rng(777);
  std::uniform_int_distribution<int> nmodes(1, 3);
  for (int it = 0; it < 25; ++it) {
    const int k = nmodes(rng);
    const SymplecticMatrix s = testutil::random_symplectic(rng, k, 8);
    const BlochMessiah bm = bloch_messiah(s, 1e-8);
    const Mat rebuilt = bm.left_passive.entries *
                        squeeze_chain(bm.squeezings) *
                        bm.right_passive.entries;
    CHECK(frob(rebuilt - s.entries) < 1e-8 * std::max(1.0, frob(s.entries)));
    for (int i = 0; i < bm.squeezings.size(); ++i) {
      CHECK(bm.squeezings(i) >= 1.0 - 1e-12);
      if (i > 0) CHECK(bm.squeezings(i) <= bm.squeezings(i - 1) + 1e-12);
    }
    const Mat& lp = bm.left_passive.entries;
    CHECK(frob(lp * lp.transpose() - Mat::Identity(2 * k, 2 * k)) < 1e-9);
  }
}

TEST_CASE("williamson round trip") {
  std::mt19937_64 rng(4242);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> nmodes(1, 3);
  for (int it = 0; it < 25; ++it) {
    const int k = nmodes(rng);
    Mat a(2 * k, 2 * k);
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j) a(i, j) = gauss(rng);
    const Mat v =
        a * a.transpose() + 0.2 * Mat::Identity(2 * k, 2 * k);
    const WilliamsonResult w = williamson(v);
    Vec dup(2 * k);
    for (int i = 0; i < k; ++i) {
      dup(2 * i) = w.eigenvalues(i);
      dup(2 * i + 1) = w.eigenvalues(i);
      CHECK(w.eigenvalues(i) > 0.0);
      if (i > 0) CHECK(w.eigenvalues(i) <= w.eigenvalues(i - 1) + 1e-12);
    }
    const Mat rebuilt =
        w.sympl.entries * dup.asDiagonal() * w.sympl.entries.transpose();
    CHECK(frob(rebuilt - v) < 1e-8 * std::max(1.0, frob(v)));
  }
  CHECK_THROWS_AS(williamson(-Mat::Identity(2, 2)), DomainError);
  Mat asym(2, 2);
  asym << 1.0, 0.4, 0.1, 1.0;
  CHECK_THROWS_AS(williamson(asym), DomainError);
}

TEST_CASE("gaussian channel composition") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto rand_channel = [&](int dim) {
    GaussianChannel ch;
    ch.d = Vec(dim);
    ch.x = Mat(dim, dim);
    Mat a(dim, dim);
    for (int i = 0; i < dim; ++i) {
      ch.d(i) = gauss(rng);
      for (int j = 0; j < dim; ++j) {
        ch.x(i, j) = gauss(rng);
        a(i, j) = gauss(rng);
      }
    }
    ch.y = a * a.transpose();
    return ch;
  };
  const GaussianChannel c1 = rand_channel(4);
  const GaussianChannel c2 = rand_channel(4);
  const GaussianChannel c = gaussian_compose(c1, c2);
  CHECK(frob(c.x - c2.x * c1.x) < 1e-12);
  CHECK((c.d - (c2.x * c1.d + c2.d)).norm() < 1e-12);
  CHECK(frob(c.y - (c2.x * c1.y * c2.x.transpose() + c2.y)) < 1e-12);
  const GaussianChannel c3 = rand_channel(2);
  CHECK_THROWS_AS(gaussian_compose(c1, c3), DimensionError);
}

}  // TEST_SUITE
