// SPDX-License-Identifier: Apache-2.0

#include "rissrf/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace rissrf {

double UserLargeScale::shadowing_db() const { return 10.0 * std::log10(shadowing); }

double UserLargeScale::power_gain() const { return shadowing / std::pow(normalized_distance, path_loss_exponent); }

PostGains PostGains::identity(Index users) { return PostGains{CVector::Ones(users)}; }

CMatrix PostGains::apply(const CMatrix& channel) const {
  if (channel.rows() != gains.size()) {
    throw std::invalid_argument("PostGains::apply: gain count does not match channel rows");
  }
  return gains.asDiagonal() * channel;
}

std::vector<UserLargeScale> draw_users(int users, const CellParams& cell, RandomStream& rng) {
  if (users < 1) throw std::invalid_argument("draw_users: number of users must be positive");
  if (!(cell.min_distance > 0.0)) throw std::invalid_argument("draw_users: minimum distance must be positive");
  if (!(cell.max_distance > cell.min_distance)) {
    throw std::invalid_argument("draw_users: maximum distance must exceed the minimum distance");
  }
  if (!(cell.path_loss_exponent > 0.0)) throw std::invalid_argument("draw_users: path-loss exponent must be positive");
  if (!(cell.shadowing_std_db >= 0.0)) throw std::invalid_argument("draw_users: shadowing std must be non-negative");

  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  const double inner_sq = cell.min_distance * cell.min_distance;
  const double outer_sq = cell.max_distance * cell.max_distance;

  std::vector<UserLargeScale> out;
  out.reserve(users);
  for (int k = 0; k < users; ++k) {
    // Inverse of F(r) = (r^2 - r_h^2) / (r_max^2 - r_h^2).
    const double u = uniform(rng);
    const double r = std::max(cell.min_distance, std::sqrt(inner_sq + u * (outer_sq - inner_sq)));
    const double shadow_db = cell.shadowing_std_db * normal(rng);
    UserLargeScale user;
    user.distance = r;
    user.reference_distance = cell.min_distance;
    user.normalized_distance = r / cell.min_distance;
    user.shadowing = std::pow(10.0, shadow_db / 10.0);
    user.path_loss_exponent = cell.path_loss_exponent;
    out.push_back(user);
  }
  return out;
}

CMatrix draw_fading(int users, int elements, RandomStream& rng) {
  if (users < 1 || elements < 1) throw std::invalid_argument("draw_fading: dimensions must be positive");
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMatrix fading(users, elements);
  for (Index m = 0; m < fading.cols(); ++m) {
    for (Index k = 0; k < fading.rows(); ++k) {
      const double re = normal(rng);
      const double im = normal(rng);
      fading(k, m) = Complex(re, im);
    }
  }
  return fading;
}

CMatrix draw_symbols(int users, int block_length, RandomStream& rng) {
  if (users < 1 || block_length < 1) throw std::invalid_argument("draw_symbols: dimensions must be positive");
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMatrix symbols(users, block_length);
  for (Index n = 0; n < symbols.cols(); ++n) {
    for (Index k = 0; k < symbols.rows(); ++k) {
      const double re = normal(rng);
      const double im = normal(rng);
      symbols(k, n) = Complex(re, im);
    }
  }
  return symbols;
}

ChannelRealization assemble_channel(std::vector<UserLargeScale> large_scale, CMatrix fading) {
  if (static_cast<Index>(large_scale.size()) != fading.rows()) {
    throw std::invalid_argument("assemble_channel: large-scale list and fading rows disagree");
  }
  ChannelRealization out;
  out.channel.resize(fading.rows(), fading.cols());
  for (Index k = 0; k < fading.rows(); ++k) {
    out.channel.row(k) = std::sqrt(large_scale[k].power_gain()) * fading.row(k);
  }
  out.large_scale = std::move(large_scale);
  out.fading = std::move(fading);
  return out;
}

PostGains compensating_gains(std::span<const UserLargeScale> large_scale) {
  PostGains g;
  g.gains.resize(static_cast<Index>(large_scale.size()));
  for (std::size_t k = 0; k < large_scale.size(); ++k) {
    const double gain = large_scale[k].power_gain();
    if (!(gain > 0.0)) throw std::invalid_argument("compensating_gains: large-scale gain must be positive");
    g.gains(static_cast<Index>(k)) = 1.0 / std::sqrt(gain);
  }
  return g;
}

}  // namespace rissrf
