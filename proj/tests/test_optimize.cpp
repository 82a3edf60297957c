#include <cmath>

#include "doctest.h"
#include "gkpstab/optimize.hpp"

using namespace gkpstab;

TEST_SUITE("optimize") {

TEST_CASE("single-layer encodings") {
  CHECK((single_layer_encoding(2.0, 1).entries - tms(2.0).entries).norm() <
        1e-14);
  const Mat t = tms(2.5).entries;
  const Mat expect = embed_two_mode(t, 4, 0, 2) * embed_two_mode(t, 4, 1, 3);
  CHECK((single_layer_encoding(2.5, 2).entries - expect).norm() < 1e-14);
  CHECK_THROWS_AS(single_layer_encoding(2.0, 3), DimensionError);
}

TEST_CASE("staircase encoding layout") {
  const Mat expect = embed_two_mode(tms(2.0).entries, 3, 0, 1) *
                     embed_two_mode(tms(3.0).entries, 3, 1, 2);
  CHECK((staircase_encoding(2.0, 3.0).entries - expect).norm() < 1e-14);
}

TEST_CASE("square-lattice gain optimum") {
  const OptResult res = optimize_gain(square(1), 0.1, EstimatorKind::kMmse);
  REQUIRE(res.params.size() == 1);
  CHECK(res.params[0] == doctest::Approx(4.9233).epsilon(0.01));
  CHECK(res.sigma_rms_sq == doctest::Approx(1.25129031e-3).epsilon(2e-6));
  CHECK(std::abs(res.objective - res.sigma_rms_sq) < 1e-15);
  CHECK(res.evaluations > 0);
  CHECK_THROWS_AS(optimize_gain(square(3), 0.1, EstimatorKind::kMmse),
                  DimensionError);
  CHECK_THROWS_AS(optimize_gain(square(1), -0.1, EstimatorKind::kMmse),
                  DomainError);
  GainSearchConfig bad;
  bad.coarse_points = 2;
  CHECK_THROWS_AS(optimize_gain(square(1), 0.1, EstimatorKind::kMmse, bad),
                  ConfigError);
}

TEST_CASE("tiny sweep stays consistent on the square line") {
  SweepGrid grid;
  grid.r_values = Vec::Ones(1);
  grid.theta_values = Vec(3);
  grid.theta_values << 0.0, 0.4, M_PI / 4.0;
  grid.sigma_sq = 1e-2;
  const auto rows = sweep_single_mode(grid, EstimatorKind::kMmse);
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    CHECK(!row.failed);
    CHECK(std::abs(row.sigma_rms_sq - rows[0].sigma_rms_sq) < 1e-6);
  }
  grid.theta_values(1) = 2.0;  // outside [0, pi/4]
  CHECK_THROWS_AS(sweep_single_mode(grid, EstimatorKind::kMmse), DomainError);
}

TEST_CASE("breakeven bisection demands a bracket") {
  BreakevenConfig cfg;
  cfg.lo = 0.10;
  cfg.hi = 0.12;
  CHECK_THROWS_AS(find_breakeven(square(1), EstimatorKind::kMmse, cfg),
                  NumericalError);
  cfg.lo = 0.5;
  cfg.hi = 0.4;
  CHECK_THROWS_AS(find_breakeven(square(1), EstimatorKind::kMmse, cfg),
                  ConfigError);
}

TEST_CASE("sample scaling for a target standard error") {
  DecodeReport pilot;
  pilot.numerical_error = 4e-4;
  CHECK(scale_samples_for_se(pilot, 1000, 1e-4) ==
        static_cast<long long>(std::ceil(1.3 * 1000 * 16.0)));
  CHECK(scale_samples_for_se(pilot, 1000, 5e-4) == 1000);
  CHECK_THROWS_AS(scale_samples_for_se(pilot, 0, 1e-4), DomainError);
  CHECK_THROWS_AS(scale_samples_for_se(pilot, 1000, 0.0), DomainError);
}

}  // TEST_SUITE
