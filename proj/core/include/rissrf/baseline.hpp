// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "rissrf/channel.hpp"
#include "rissrf/types.hpp"

namespace rissrf {

/// Fully digital matched-filter precoding x = c H^H s, scaled to a target power.
struct MfPrecoding {
  CVector transmit;
  double scale = 0.0;     // c >= 0
  bool degenerate = false;  // H^H s vanished with a zero power target
};

/// Throws DegenerateDirection when H^H s = 0 and the target power is positive.
MfPrecoding mf_precode(const CMatrix& channel, const CVector& symbols, double target_power);

/// G_k = 1 / (mean_scale * M * alpha_k / rbar_k^nu).
///
/// Compensates the expected matched-filter self-gain M alpha_k / rbar_k^nu and
/// the block-mean precoder scaling, since G may not vary across intervals.
PostGains mf_post_gains(std::span<const UserLargeScale> large_scale, Index elements, double mean_scale);

}  // namespace rissrf
