#include <array>
#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "gkpstab/rng.hpp"

using namespace gkpstab;

TEST_SUITE("rng") {

TEST_CASE("philox known-answer blocks") {
  using A4 = std::array<std::uint32_t, 4>;
  using A2 = std::array<std::uint32_t, 2>;

  const A4 zero = Philox::block({0, 0, 0, 0}, {0, 0});
  CHECK(zero == A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});

  const A4 ones = Philox::block(
      {0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
      {0xffffffffu, 0xffffffffu});
  CHECK(ones == A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});

  const A4 pi = Philox::block(
      {0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
      A2{0xa4093822u, 0x299f31d0u});
  CHECK(pi == A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("uniform doubles live in the unit interval") {
  Philox gen(42, 0);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = gen.next_double();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("streams are independent and reproducible") {
  Philox a(7, 0), b(7, 0), c(7, 1), d(8, 0);
  bool same_ab = true, same_ac = true, same_ad = true;
  for (int i = 0; i < 64; ++i) {
    const std::uint32_t xa = a.next_u32();
    same_ab &= xa == b.next_u32();
    same_ac &= xa == c.next_u32();
    same_ad &= xa == d.next_u32();
  }
  CHECK(same_ab);
  CHECK(!same_ac);
  CHECK(!same_ad);
}

TEST_CASE("gaussian stream moments") {
  GaussianStream g(123, 5);
  const int n = 40000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = g.next();
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(var == doctest::Approx(1.0).epsilon(0.03));

  GaussianStream g2(123, 5);
  CHECK(g2.next() == GaussianStream(123, 5).next());
}

}  // TEST_SUITE
