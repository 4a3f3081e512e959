// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rissrf/errors.hpp"
#include "rissrf/geometry.hpp"

namespace rissrf {
namespace {

TEST(Layout, SingleElementSitsOnBoresight) {
  const auto grid = layout_elements(1, 0.008, 1.0);
  ASSERT_EQ(grid.positions.size(), 1u);
  EXPECT_DOUBLE_EQ(grid.positions[0].r, 1.0);
  EXPECT_DOUBLE_EQ(grid.positions[0].theta, kPi / 2);
  EXPECT_DOUBLE_EQ(grid.positions[0].phi, 0.0);
}

TEST(Layout, FourElementsAtHalfPitchOffsets) {
  const auto grid = layout_elements(4, 0.008, 1.0);
  ASSERT_EQ(grid.positions.size(), 4u);
  for (const auto& p : grid.positions) EXPECT_NEAR(p.r, 1.000015999872002, 1e-14);
}

TEST(Layout, CornerDistanceForDefaultFeedDistance) {
  const double lambda = 0.008;
  const double rd = default_feed_distance(64, lambda);
  EXPECT_NEAR(rd, 0.036108133347056405, 1e-15);
  const auto grid = layout_elements(64, lambda, rd);
  double max_r = 0.0;
  for (const auto& p : grid.positions) max_r = std::max(max_r, p.r);
  EXPECT_NEAR(max_r, 0.053589152762558274, 1e-14);
}

TEST(Layout, GridHasPitchLambda) {
  const double lambda = 0.01;
  const auto grid = layout_elements(9, lambda, 0.5);
  EXPECT_EQ(grid.side(), 3);
  // Recover Cartesian surface coordinates and check neighbour spacing.
  auto cart = [](const SphericalPosition& p) {
    return Eigen::Vector3d(p.r * std::sin(p.theta) * std::cos(p.phi), p.r * std::sin(p.theta) * std::sin(p.phi),
                           p.r * std::cos(p.theta));
  };
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col + 1 < 3; ++col) {
      const auto a = cart(grid.positions[row * 3 + col]);
      const auto b = cart(grid.positions[row * 3 + col + 1]);
      EXPECT_NEAR((a - b).norm(), lambda, 1e-12);
      EXPECT_NEAR(a.x(), 0.5, 1e-12);
    }
  }
}

TEST(Layout, RejectsInvalidArguments) {
  EXPECT_THROW(layout_elements(3, 0.008, 1.0), std::invalid_argument);
  EXPECT_THROW(layout_elements(0, 0.008, 1.0), std::invalid_argument);
  EXPECT_THROW(layout_elements(4, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(layout_elements(4, 0.008, -1.0), std::invalid_argument);
}

TEST(Pattern, NormalizedPeakMatchesQuadrature) {
  for (const double beamwidth : {2.0 * kPi / 3.0, kPi, kPi / 4.0}) {
    const auto pattern = FeedPattern::ideal_sector(beamwidth);
    const double total = oracle::sphere_integral([&](double t, double p) { return pattern_gain(pattern, t, p); });
    EXPECT_NEAR(total / (4.0 * kPi), 1.0, 0.01) << "beamwidth " << beamwidth;
  }
}

TEST(Pattern, SectorGainValues) {
  const auto sector120 = FeedPattern::ideal_sector(2.0 * kPi / 3.0);
  // 4 pi over the 4 pi sin(60 deg) steradians of the band.
  EXPECT_NEAR(pattern_gain(sector120, kPi / 2, 0.0), 1.1547005383792517, 1e-14);
  EXPECT_EQ(pattern_gain(sector120, 0.0, 0.0), 0.0);
  EXPECT_NEAR(pattern_gain(sector120, kPi / 2, 2.0), pattern_gain(sector120, kPi / 2, -2.0), 0.0);

  const auto full = FeedPattern::ideal_sector(kPi);
  EXPECT_NEAR(pattern_gain(full, kPi / 4, 0.0), 1.0, 1e-15);
}

TEST(Pattern, RejectsOutOfRangeAngles) {
  const auto p = FeedPattern::ideal_sector(kPi / 2);
  EXPECT_THROW(pattern_gain(p, -0.1, 0.0), std::invalid_argument);
  EXPECT_THROW(pattern_gain(p, 3.2, 0.0), std::invalid_argument);
  EXPECT_THROW(pattern_gain(p, 1.0, kPi), std::invalid_argument);
  EXPECT_THROW(FeedPattern::ideal_sector(0.0), std::invalid_argument);
  EXPECT_THROW(FeedPattern::ideal_sector(4.0), std::invalid_argument);
  EXPECT_THROW(FeedPattern::ideal_sector(1.0, -2.0), std::invalid_argument);
}

TEST(Propagation, UnitGainElementAtOneMetre) {
  const auto grid = layout_elements(1, 0.008, 1.0);
  const auto pattern = FeedPattern::ideal_sector(kPi, 1.0);
  const auto s = propagation_coeffs(grid, pattern, 1.0);
  EXPECT_NEAR(s.attenuation[0], 0.0006366197723675814, 1e-18);
  // -2 pi / 0.008 = -250 pi, a whole number of turns.
  EXPECT_NEAR(std::remainder(s.phase[0], kTwoPi), 0.0, 1e-10);
  EXPECT_GE(s.phase[0], -kPi);
  EXPECT_LT(s.phase[0], kPi);
}

TEST(Propagation, ElementOneWavelengthAway) {
  const double lambda = 0.125;
  const auto grid = layout_elements(1, lambda, lambda);
  const auto s = propagation_coeffs(grid, FeedPattern::ideal_sector(kPi, 1.0), 1.0);
  EXPECT_NEAR(s.attenuation[0], 0.07957747154594767, 1e-16);
  EXPECT_DOUBLE_EQ(s.phase[0], 0.0);
}

TEST(Propagation, EfficiencyScalesAmplitudeBySquareRoot) {
  const auto grid = layout_elements(16, 0.008, 0.05);
  const auto pattern = FeedPattern::ideal_sector(2.0 * kPi / 3.0);
  const auto full = propagation_coeffs(grid, pattern, 1.0);
  const auto quarter = propagation_coeffs(grid, pattern, 0.25);
  for (int m = 0; m < 16; ++m) {
    EXPECT_NEAR(quarter.attenuation[m], 0.5 * full.attenuation[m], 1e-18);
    EXPECT_EQ(quarter.phase[m], full.phase[m]);
  }
}

TEST(Propagation, InverseDistanceLawAndPhaseWrap) {
  const double lambda = 0.008;
  const auto pattern = FeedPattern::ideal_sector(kPi, 1.0);
  const auto near = propagation_coeffs(layout_elements(1, lambda, 0.3), pattern, 1.0);
  const auto far = propagation_coeffs(layout_elements(1, lambda, 0.9), pattern, 1.0);
  EXPECT_NEAR(far.attenuation[0] * 3.0, near.attenuation[0], 1e-16);

  // Shifting the distance by whole wavelengths leaves the wrapped phase unchanged.
  const auto shifted = propagation_coeffs(layout_elements(1, lambda, 0.3 + 7 * lambda), pattern, 1.0);
  EXPECT_NEAR(std::remainder(shifted.phase[0] - near.phase[0], kTwoPi), 0.0, 1e-9);
}

TEST(Propagation, ReconstructsFromGridAndPattern) {
  const double lambda = 0.008;
  const auto grid = layout_elements(121, lambda, default_feed_distance(121, lambda));
  const auto pattern = FeedPattern::ideal_sector(2.0 * kPi / 3.0);
  const auto model = propagation_coeffs(grid, pattern, 0.8);
  for (int m = 0; m < 121; ++m) {
    const auto& p = grid.positions[m];
    const double t = lambda * std::sqrt(0.8 * pattern_gain(pattern, p.theta, p.phi)) / (4.0 * kPi * p.r);
    EXPECT_EQ(model.attenuation[m], t);
    EXPECT_GT(model.attenuation[m], 0.0);
  }
  EXPECT_EQ(model, propagation_coeffs(grid, pattern, 0.8));
}

TEST(Propagation, SingleElementDefaultDistanceIsScalarChannel) {
  const double lambda = 0.008;
  const double rd = default_feed_distance(1, lambda);
  const auto pattern = FeedPattern::ideal_sector(2.0 * kPi / 3.0);
  const auto model = propagation_coeffs(layout_elements(1, lambda, rd), pattern, 1.0);
  const auto diag = model.diagonal();
  ASSERT_EQ(diag.size(), 1);
  EXPECT_NEAR(std::abs(diag(0)), lambda * std::sqrt(pattern.peak_gain) / (4.0 * kPi * rd), 1e-15);
}

TEST(Propagation, RejectsUnilluminatedSurfaces) {
  // A narrow beam cannot cover a large surface close to the feed.
  const auto grid = layout_elements(225, 0.008, 0.01);
  EXPECT_THROW(propagation_coeffs(grid, FeedPattern::ideal_sector(kPi / 6), 1.0), UnilluminatedElement);
  EXPECT_THROW(propagation_coeffs(grid, FeedPattern::ideal_sector(kPi), 0.0), std::invalid_argument);
  EXPECT_THROW(propagation_coeffs(grid, FeedPattern::ideal_sector(kPi), 1.5), std::invalid_argument);
}

TEST(WrapPhase, StaysInHalfOpenInterval) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1000.0, 1000.0);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng);
    const double w = wrap_phase(x);
    ASSERT_GE(w, -kPi);
    ASSERT_LT(w, kPi);
    ASSERT_NEAR(std::remainder(w - x, kTwoPi), 0.0, 1e-9);
  }
  EXPECT_EQ(wrap_phase(kPi), -kPi);
  EXPECT_EQ(wrap_phase(-kPi), -kPi);
  EXPECT_EQ(wrap_phase(-kTwoPi), 0.0);
}

}  // namespace
}  // namespace rissrf
