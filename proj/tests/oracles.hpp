// SPDX-License-Identifier: Apache-2.0

// Test-only reference computations. None of these call into the code paths
// they are used to check.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace rissrf::oracle {

using Cx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr double pi = 3.14159265358979323846;

inline CMat random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Cx(n(rng), n(rng));
  return m;
}

inline CVec random_vector(int size, std::mt19937_64& rng) { return random_matrix(size, 1, rng).col(0); }

inline CVec random_unit_modulus(int size, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-pi, pi);
  CVec w(size);
  for (int i = 0; i < size; ++i) w(i) = std::polar(1.0, u(rng));
  return w;
}

/// Largest squared singular value by power iteration on H^H H.
inline double power_iteration_norm_sq(const CMat& h, int iterations = 2000) {
  std::mt19937_64 rng(12345);
  CVec z = random_vector(static_cast<int>(h.cols()), rng);
  z.normalize();
  double lambda = 0.0;
  for (int i = 0; i < iterations; ++i) {
    CVec next = h.adjoint() * (h * z);
    const double estimate = next.norm();
    next /= estimate;
    const bool settled = std::abs(estimate - lambda) <= 1e-15 * estimate;
    lambda = estimate;
    z = next;
    if (settled) break;
  }
  return (h * z).squaredNorm();
}

/// Exhaustive minimum of ||s - A H w||^2 over w in {phase set}^M and real A.
inline double brute_force_optimum(const CMat& h, const CVec& s, const std::vector<double>& phases) {
  const int m = static_cast<int>(h.cols());
  const int q = static_cast<int>(phases.size());
  std::vector<int> digits(m, 0);
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    CVec w(m);
    for (int i = 0; i < m; ++i) w(i) = std::polar(1.0, phases[digits[i]]);
    const CVec hw = h * w;
    const double energy = hw.squaredNorm();
    if (energy > 1e-300) {
      Cx inner(0.0, 0.0);
      for (int k = 0; k < hw.size(); ++k) inner += std::conj(hw(k)) * s(k);
      const double a = inner.real() / energy;
      best = std::min(best, (s - a * hw).squaredNorm());
    } else {
      best = std::min(best, s.squaredNorm());
    }
    int i = 0;
    while (i < m && ++digits[i] == q) digits[i++] = 0;
    if (i == m) break;
  }
  return best;
}

/// Gradient of f(w) = ||s - A H w||^2 w.r.t. (Re w, Im w), returned as a
/// complex vector d/dRe + j d/dIm, by central differences.
inline CVec finite_difference_gradient(const CMat& h, const CVec& s, const CVec& w, double a, double step = 1e-6) {
  auto f = [&](const CVec& x) { return (s - a * (h * x)).squaredNorm(); };
  CVec g(w.size());
  for (int i = 0; i < w.size(); ++i) {
    CVec plus = w, minus = w;
    plus(i) += Cx(step, 0.0);
    minus(i) -= Cx(step, 0.0);
    const double d_re = (f(plus) - f(minus)) / (2.0 * step);
    plus = w;
    minus = w;
    plus(i) += Cx(0.0, step);
    minus(i) -= Cx(0.0, step);
    const double d_im = (f(plus) - f(minus)) / (2.0 * step);
    g(i) = Cx(d_re, d_im);
  }
  return g;
}

/// Two-sided Kolmogorov-Smirnov statistic of a sample against a CDF.
template <typename Cdf>
double ks_statistic(std::vector<double> sample, Cdf cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

/// Critical KS distance at 1% significance, large-sample approximation.
inline double ks_critical_1pct(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

/// Integral over the sphere of g(theta, phi) sin(theta) by the midpoint rule.
template <typename Gain>
double sphere_integral(Gain g, int theta_steps = 4000, int phi_steps = 64) {
  const double dt = pi / theta_steps;
  const double dp = 2.0 * pi / phi_steps;
  double sum = 0.0;
  for (int i = 0; i < theta_steps; ++i) {
    const double theta = (i + 0.5) * dt;
    for (int j = 0; j < phi_steps; ++j) {
      const double phi = -pi + (j + 0.5) * dp;
      sum += g(theta, phi) * std::sin(theta);
    }
  }
  return sum * dt * dp;
}

}  // namespace rissrf::oracle
