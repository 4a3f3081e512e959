// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "rissrf/random.hpp"
#include "rissrf/types.hpp"

namespace rissrf {

struct CellParams {
  double min_distance = 100.0;   // r_h, metres
  double max_distance = 1000.0;  // metres
  double path_loss_exponent = 3.2;
  double shadowing_std_db = 5.0;
};

struct UserLargeScale {
  double distance = 1.0;             // r_k
  double normalized_distance = 1.0;  // r_k / r_h
  double shadowing = 1.0;            // alpha_k, linear
  double path_loss_exponent = 3.2;
  double reference_distance = 1.0;

  double shadowing_db() const;
  /// alpha_k / rbar_k^nu, the large-scale power gain of the user.
  double power_gain() const;
};

struct ChannelRealization {
  CMatrix channel;  // K x M, H
  std::vector<UserLargeScale> large_scale;
  CMatrix fading;   // K x M, h_{k,m}
};

/// Diagonal receive-side gains G = diag(G_1, ..., G_K).
struct PostGains {
  CVector gains;

  static PostGains identity(Index users);
  Index size() const { return gains.size(); }
  /// Returns G * H.
  CMatrix apply(const CMatrix& channel) const;
};

/// Draws K users uniformly over the annulus [r_h, r_max] (density ~ r) with
/// log-normal shadowing that is zero-mean in dB.
std::vector<UserLargeScale> draw_users(int users, const CellParams& cell, RandomStream& rng);

/// K x M matrix of i.i.d. CN(0, 1) entries.
CMatrix draw_fading(int users, int elements, RandomStream& rng);

/// K x N block of i.i.d. CN(0, 1) information symbols, one column per interval.
CMatrix draw_symbols(int users, int block_length, RandomStream& rng);

/// H_{k,m} = sqrt(alpha_k / rbar_k^nu) h_{k,m}.
ChannelRealization assemble_channel(std::vector<UserLargeScale> large_scale, CMatrix fading);

/// G_k = (alpha_k / rbar_k^nu)^(-1/2); G * H recovers the fading matrix.
PostGains compensating_gains(std::span<const UserLargeScale> large_scale);

}  // namespace rissrf
