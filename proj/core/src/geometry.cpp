// SPDX-License-Identifier: Apache-2.0

#include "rissrf/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rissrf/errors.hpp"

namespace rissrf {

FeedPattern FeedPattern::ideal_sector(double vertical_beamwidth) {
  if (!(vertical_beamwidth > 0.0) || vertical_beamwidth > kPi) {
    throw std::invalid_argument("feed pattern: vertical beamwidth must lie in (0, pi]");
  }
  // The band |theta - pi/2| <= b/2 subtends 4 pi sin(b/2) steradians.
  return ideal_sector(vertical_beamwidth, 1.0 / std::sin(0.5 * vertical_beamwidth));
}

FeedPattern FeedPattern::ideal_sector(double vertical_beamwidth, double peak_gain) {
  if (!(vertical_beamwidth > 0.0) || vertical_beamwidth > kPi) {
    throw std::invalid_argument("feed pattern: vertical beamwidth must lie in (0, pi]");
  }
  if (!(peak_gain > 0.0)) {
    throw std::invalid_argument("feed pattern: peak gain must be positive");
  }
  return FeedPattern{PatternKind::IdealSector, vertical_beamwidth, peak_gain};
}

int ElementGrid::side() const { return static_cast<int>(std::lround(std::sqrt(static_cast<double>(num_elements)))); }

CVector SurfaceModel::diagonal() const {
  CVector d(num_elements);
  for (int m = 0; m < num_elements; ++m) {
    d(m) = std::polar(attenuation[m], phase[m]);
  }
  return d;
}

double SurfaceModel::power_gain() const {
  double sum = 0.0;
  for (const double t : attenuation) sum += t * t;
  return sum;
}

double wrap_phase(double angle) {
  double wrapped = angle - kTwoPi * std::floor((angle + kPi) / kTwoPi);
  // Rounding in the subtraction can land exactly on +pi.
  if (wrapped >= kPi) wrapped -= kTwoPi;
  if (wrapped < -kPi) wrapped = -kPi;
  return wrapped;
}

double default_feed_distance(int num_elements, double wavelength) {
  return wavelength * std::sqrt(static_cast<double>(num_elements) / kPi);
}

ElementGrid layout_elements(int num_elements, double wavelength, double feed_distance) {
  if (num_elements < 1) {
    throw std::invalid_argument("layout: number of elements must be positive");
  }
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(num_elements))));
  if (side * side != num_elements) {
    throw std::invalid_argument("layout: number of elements must be a perfect square, got " +
                                std::to_string(num_elements));
  }
  if (!(wavelength > 0.0)) throw std::invalid_argument("layout: wavelength must be positive");
  if (!(feed_distance > 0.0)) throw std::invalid_argument("layout: feed distance must be positive");

  ElementGrid grid;
  grid.num_elements = num_elements;
  grid.wavelength = wavelength;
  grid.feed_distance = feed_distance;
  grid.positions.reserve(num_elements);

  const double centre = 0.5 * (side - 1);
  for (int row = 0; row < side; ++row) {
    const double vertical = (row - centre) * wavelength;
    for (int col = 0; col < side; ++col) {
      const double horizontal = (col - centre) * wavelength;
      // Feed at the origin, zenith along +z, surface in the plane x = feed_distance.
      const double r = std::sqrt(feed_distance * feed_distance + horizontal * horizontal + vertical * vertical);
      grid.positions.push_back({r, std::acos(vertical / r), std::atan2(horizontal, feed_distance)});
    }
  }
  return grid;
}

double pattern_gain(const FeedPattern& pattern, double theta, double phi) {
  if (!(theta >= 0.0 && theta <= kPi)) throw std::invalid_argument("pattern_gain: theta outside [0, pi]");
  if (!(phi >= -kPi && phi < kPi)) throw std::invalid_argument("pattern_gain: phi outside [-pi, pi)");
  switch (pattern.kind) {
    case PatternKind::IdealSector:
      return std::abs(theta - 0.5 * kPi) <= 0.5 * pattern.vertical_beamwidth ? pattern.peak_gain : 0.0;
  }
  return 0.0;
}

SurfaceModel propagation_coeffs(const ElementGrid& grid, const FeedPattern& pattern, double efficiency) {
  if (!(efficiency > 0.0 && efficiency <= 1.0)) {
    throw std::invalid_argument("propagation_coeffs: efficiency must lie in (0, 1]");
  }
  SurfaceModel model;
  model.num_elements = grid.num_elements;
  model.wavelength = grid.wavelength;
  model.feed_distance = grid.feed_distance;
  model.efficiency = efficiency;
  model.attenuation.reserve(grid.positions.size());
  model.phase.reserve(grid.positions.size());

  const double lambda = grid.wavelength;
  for (std::size_t m = 0; m < grid.positions.size(); ++m) {
    const auto& pos = grid.positions[m];
    const double gain = pattern_gain(pattern, pos.theta, pos.phi);
    if (gain <= 0.0) {
      throw UnilluminatedElement("propagation_coeffs: element " + std::to_string(m) +
                                 " lies outside the feed beam (theta = " + std::to_string(pos.theta) + ")");
    }
    model.attenuation.push_back(lambda * std::sqrt(efficiency * gain) / (4.0 * kPi * pos.r));
    model.phase.push_back(wrap_phase(-kTwoPi * pos.r / lambda));
  }
  return model;
}

}  // namespace rissrf
