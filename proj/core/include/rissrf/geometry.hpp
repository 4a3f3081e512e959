// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "rissrf/types.hpp"

namespace rissrf {

enum class PatternKind { IdealSector };

/// Radiation pattern of the RF feed.
///
/// The ideal sector radiates a constant gain into the elevation band
/// |theta - pi/2| <= vertical_beamwidth / 2 (omnidirectional in azimuth) and
/// nothing outside it.
struct FeedPattern {
  PatternKind kind = PatternKind::IdealSector;
  double vertical_beamwidth = 2.0 * kPi / 3.0;
  double peak_gain = 0.0;

  /// Ideal sector whose gain integrates to 4*pi over the sphere.
  static FeedPattern ideal_sector(double vertical_beamwidth);
  static FeedPattern ideal_sector(double vertical_beamwidth, double peak_gain);
};

/// Spherical coordinates about the feed; theta is measured from the feed's
/// zenith axis so broadside is theta = pi/2.
struct SphericalPosition {
  double r = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

struct ElementGrid {
  int num_elements = 0;
  double wavelength = 0.0;
  double feed_distance = 0.0;
  std::vector<SphericalPosition> positions;

  int side() const;
};

/// Per-element propagation from the feed: attenuation T_m and phase omega_m.
struct SurfaceModel {
  int num_elements = 0;
  double wavelength = 0.0;
  double feed_distance = 0.0;
  double efficiency = 1.0;
  std::vector<double> attenuation;
  std::vector<double> phase;  // wrapped to [-pi, pi)

  /// Diagonal of T, i.e. T_m * exp(j omega_m).
  CVector diagonal() const;
  /// Sum of T_m^2, the radiated power of a unit-gain, unit-power feed.
  double power_gain() const;

  friend bool operator==(const SurfaceModel&, const SurfaceModel&) = default;
};

/// Wraps an angle into [-pi, pi).
double wrap_phase(double angle);

/// Feed distance lambda * sqrt(M / pi) used by the default experiment setup.
double default_feed_distance(int num_elements, double wavelength);

/// Lays out a sqrt(M) x sqrt(M) grid of pitch lambda centred on the feed's
/// broadside axis at distance feed_distance.
///
/// Element m = row * side + col; row runs along the vertical surface axis.
/// Throws std::invalid_argument for non-square M or non-positive lengths.
ElementGrid layout_elements(int num_elements, double wavelength, double feed_distance);

/// Gain of the feed pattern in direction (theta, phi).
/// Requires theta in [0, pi] and phi in [-pi, pi).
double pattern_gain(const FeedPattern& pattern, double theta, double phi);

/// T_m = lambda sqrt(zeta G) / (4 pi r_m), omega_m = -2 pi r_m / lambda.
/// Throws UnilluminatedElement if any element sits outside the feed's beam.
SurfaceModel propagation_coeffs(const ElementGrid& grid, const FeedPattern& pattern, double efficiency);

}  // namespace rissrf
