// SPDX-License-Identifier: Apache-2.0

#include "rissrf/baseline.hpp"

#include <cmath>
#include <stdexcept>

#include "rissrf/errors.hpp"

namespace rissrf {

MfPrecoding mf_precode(const CMatrix& channel, const CVector& symbols, double target_power) {
  if (channel.rows() != symbols.size()) throw std::invalid_argument("mf_precode: dimension mismatch");
  if (!(target_power >= 0.0)) throw std::invalid_argument("mf_precode: target power must be non-negative");

  MfPrecoding out;
  CVector direction = channel.adjoint() * symbols;
  const double energy = direction.squaredNorm();
  if (target_power == 0.0) {
    out.transmit = CVector::Zero(channel.cols());
    out.degenerate = energy == 0.0;
    return out;
  }
  if (energy == 0.0) throw DegenerateDirection("mf_precode: H^H s vanishes");
  out.scale = std::sqrt(target_power / energy);
  out.transmit = out.scale * direction;
  return out;
}

PostGains mf_post_gains(std::span<const UserLargeScale> large_scale, Index elements, double mean_scale) {
  if (!(mean_scale > 0.0)) throw std::invalid_argument("mf_post_gains: mean scaling must be positive");
  if (elements < 1) throw std::invalid_argument("mf_post_gains: element count must be positive");
  PostGains g;
  g.gains.resize(static_cast<Index>(large_scale.size()));
  for (std::size_t k = 0; k < large_scale.size(); ++k) {
    g.gains(static_cast<Index>(k)) = 1.0 / (mean_scale * static_cast<double>(elements) * large_scale[k].power_gain());
  }
  return g;
}

}  // namespace rissrf
