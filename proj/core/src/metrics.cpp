// SPDX-License-Identifier: Apache-2.0

#include "rissrf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rissrf/errors.hpp"

namespace rissrf {

Decibel to_db(double linear) {
  if (!(linear > 0.0)) return {kDbFloor, true};
  return {std::max(kDbFloor, 10.0 * std::log10(linear)), false};
}

double received_mse(const CVector& symbols, const PostGains& gains, const CMatrix& channel, const CVector& transmit,
                    double noise_variance) {
  if (channel.rows() != symbols.size() || gains.size() != symbols.size() || channel.cols() != transmit.size()) {
    throw std::invalid_argument("received_mse: dimension mismatch");
  }
  if (!(noise_variance >= 0.0)) throw std::invalid_argument("received_mse: noise variance must be non-negative");
  const CVector residual = symbols - gains.gains.cwiseProduct(channel * transmit);
  return residual.squaredNorm() + gains.gains.squaredNorm() * noise_variance;
}

double distortion(const CMatrix& symbols, const PostGains& gains, const CMatrix& channel, const CMatrix& transmit) {
  if (symbols.cols() == 0) throw std::invalid_argument("distortion: block length must be positive");
  if (symbols.cols() != transmit.cols()) throw std::invalid_argument("distortion: symbol and transmit blocks differ in length");
  if (channel.rows() != symbols.rows() || gains.size() != symbols.rows() || channel.cols() != transmit.rows()) {
    throw std::invalid_argument("distortion: dimension mismatch");
  }
  const CMatrix residual = symbols - gains.gains.asDiagonal() * (channel * transmit);
  return residual.squaredNorm() / static_cast<double>(symbols.rows() * symbols.cols());
}

double average_power(std::span<const double> gains, double power) {
  if (gains.empty()) throw std::invalid_argument("average_power: block length must be positive");
  double sum = 0.0;
  for (const double a : gains) sum += a * a;
  return sum * power / static_cast<double>(gains.size());
}

double papr(std::span<const double> gains, [[maybe_unused]] double power) {
  if (gains.empty()) throw std::invalid_argument("papr: block length must be positive");
  double peak = 0.0;
  double sum = 0.0;
  for (const double a : gains) {
    peak = std::max(peak, a * a);
    sum += a * a;
  }
  if (peak == 0.0) throw DegenerateBlock("papr: all gains are zero");
  // P cancels between peak and mean.
  return peak * static_cast<double>(gains.size()) / sum;
}

}  // namespace rissrf
