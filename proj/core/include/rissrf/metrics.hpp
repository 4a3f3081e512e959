// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "rissrf/channel.hpp"
#include "rissrf/types.hpp"

namespace rissrf {

/// Linear values at or below zero are reported at this floor with `floored` set.
inline constexpr double kDbFloor = -200.0;

struct Decibel {
  double value = kDbFloor;
  bool floored = false;
};

Decibel to_db(double linear);

/// ||s - G H x||^2 + ||G||_F^2 sigma^2.
double received_mse(const CVector& symbols, const PostGains& gains, const CMatrix& channel, const CVector& transmit,
                    double noise_variance);

/// Per-user distortion (1/K)(1/N) sum_n ||s(n) - G H x(n)||^2.
///
/// `symbols` is K x N and `transmit` is M x N, one column per interval.
double distortion(const CMatrix& symbols, const PostGains& gains, const CMatrix& channel, const CMatrix& transmit);

/// (1/N) sum_n |A(n)|^2 P.
double average_power(std::span<const double> gains, double power);

/// max_n |A(n)|^2 P / P_out. Throws DegenerateBlock when every gain is zero.
double papr(std::span<const double> gains, double power);

}  // namespace rissrf
