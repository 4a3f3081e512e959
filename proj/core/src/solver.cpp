// SPDX-License-Identifier: Apache-2.0

#include "rissrf/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rissrf/errors.hpp"

namespace rissrf {

namespace {

// Two wrapped distances closer than this are treated as an exact midpoint.
constexpr double kTieTolerance = 16.0 * std::numeric_limits<double>::epsilon() * kPi;

// Floor on |A| in the step size when the gain collapses to zero.
constexpr double kGainFloor = 1e-12;

double wrapped_distance(double a, double b) { return std::abs(wrap_phase(a - b)); }

Complex snap(Complex z) {
  constexpr double tiny = 1e-15;
  return {std::abs(z.real()) < tiny ? 0.0 : z.real(), std::abs(z.imag()) < tiny ? 0.0 : z.imag()};
}

void check_symbols(const EffectiveMatrix& eff, const CVector& symbols, const char* where) {
  if (symbols.size() != eff.users()) {
    throw std::invalid_argument(std::string(where) + ": symbol vector length does not match the number of users");
  }
}

void check_weights(const EffectiveMatrix& eff, const CVector& weights, const char* where) {
  if (weights.size() != eff.elements()) {
    throw std::invalid_argument(std::string(where) + ": weight vector length does not match the number of elements");
  }
}

// Gain and residual for a fixed w, sharing one product H~ w.
struct GainStep {
  double gain;
  CVector residual;
  double objective;
};

GainStep gain_step(const EffectiveMatrix& eff, const CVector& weights, const CVector& symbols) {
  const CVector hw = eff.matrix() * weights;
  const double energy = hw.squaredNorm();
  if (energy < std::numeric_limits<double>::epsilon()) {
    throw DegenerateDirection("update_gain: ||H~ w||^2 vanishes");
  }
  const double gain = hw.dot(symbols).real() / energy;
  CVector residual = symbols - gain * hw;
  const double obj = residual.squaredNorm();
  return {gain, std::move(residual), obj};
}

// The signed literal step keeps psi * v = psi_0 / (A^2 rho^2) * (A v), which is
// a descent direction for either sign of A. Only |A| is floored.
double guarded_step_size(double initial_step, double gain, double spectral_norm_sq) {
  const double magnitude = std::max(std::abs(gain), kGainFloor);
  return initial_step / (std::copysign(magnitude, gain == 0.0 ? 1.0 : gain) * spectral_norm_sq);
}

}  // namespace

PhaseCodebook::PhaseCodebook(int bits) : bits_(bits) {
  if (bits == 0) {
    points_.push_back(Complex(-1.0, 0.0));
    return;
  }
  const int half = 1 << (bits - 1);
  const double spacing = kPi / half;
  const int count = 2 * half;
  phases_.reserve(count);
  points_.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double phase = (i == 0) ? -kPi : (i - half) * spacing;
    phases_.push_back(phase);
    points_.push_back(snap(std::polar(1.0, phase)));
  }
}

PhaseCodebook PhaseCodebook::quantized(int bits) {
  if (bits < 1 || bits > 24) throw std::invalid_argument("PhaseCodebook: bits must lie in [1, 24]");
  return PhaseCodebook(bits);
}

PhaseCodebook PhaseCodebook::continuous() { return PhaseCodebook(0); }

double PhaseCodebook::spacing() const { return is_continuous() ? 0.0 : kPi / (1 << (bits_ - 1)); }

std::string PhaseCodebook::label() const { return is_continuous() ? "inf" : std::to_string(bits_); }

namespace {

std::size_t nearest_index(const std::vector<double>& phases, double spacing, double angle) {
  const double a = wrap_phase(angle);
  const std::size_t count = phases.size();
  auto lower = static_cast<std::size_t>(std::floor((a + kPi) / spacing));
  lower = std::min(lower, count - 1);
  const std::size_t upper = (lower + 1) % count;
  const double d_lower = wrapped_distance(a, phases[lower]);
  const double d_upper = wrapped_distance(a, phases[upper]);
  if (std::abs(d_lower - d_upper) <= kTieTolerance) {
    return phases[lower] < phases[upper] ? lower : upper;
  }
  return d_lower < d_upper ? lower : upper;
}

}  // namespace

double PhaseCodebook::nearest_phase(double angle) const {
  if (is_continuous()) return wrap_phase(angle);
  return phases_[nearest_index(phases_, spacing(), angle)];
}

Complex PhaseCodebook::project(Complex u) const {
  if (u == Complex(0.0, 0.0)) return points_.front();
  if (is_continuous()) return u / std::abs(u);
  return points_[nearest_index(phases_, spacing(), std::arg(u))];
}

CVector quantize_phases(const CVector& u, const PhaseCodebook& codebook) {
  CVector out(u.size());
  for (Index m = 0; m < u.size(); ++m) out(m) = codebook.project(u(m));
  return out;
}

double spectral_norm_sq(const CMatrix& matrix) {
  if (matrix.size() == 0 || matrix.cwiseAbs2().maxCoeff() == 0.0) {
    throw DegenerateDirection("spectral_norm_sq: zero matrix");
  }
  const CMatrix gram = matrix.rows() <= matrix.cols() ? CMatrix(matrix * matrix.adjoint())
                                                      : CMatrix(matrix.adjoint() * matrix);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

namespace {

CMatrix pseudo_inverse_of(const CMatrix& h) {
  const bool wide = h.rows() <= h.cols();
  const CMatrix gram = wide ? CMatrix(h * h.adjoint()) : CMatrix(h.adjoint() * h);
  Eigen::LLT<CMatrix> llt(gram);
  if (llt.info() == Eigen::Success) {
    const RVector diag = CMatrix(llt.matrixL()).diagonal().real();
    // Near-singular Gram matrices go through the rank-revealing route.
    if (diag.minCoeff() > 1e-7 * diag.maxCoeff()) {
      const CMatrix identity = CMatrix::Identity(gram.rows(), gram.cols());
      return wide ? CMatrix(h.adjoint() * llt.solve(identity)) : CMatrix(llt.solve(h.adjoint()));
    }
  }
  return h.completeOrthogonalDecomposition().pseudoInverse();
}

}  // namespace

EffectiveMatrix::EffectiveMatrix(CMatrix matrix) : matrix_(std::move(matrix)) {
  spectral_norm_sq_ = rissrf::spectral_norm_sq(matrix_);
  pseudo_inverse_ = pseudo_inverse_of(matrix_);
}

EffectiveMatrix EffectiveMatrix::from_factors(double power, const PostGains& gains, const CMatrix& channel,
                                              const SurfaceModel& surface) {
  if (!(power > 0.0)) throw std::invalid_argument("EffectiveMatrix: feed power must be positive");
  if (channel.cols() != surface.num_elements) {
    throw std::invalid_argument("EffectiveMatrix: channel columns do not match the surface size");
  }
  CMatrix eff = std::sqrt(power) * gains.apply(channel) * surface.diagonal().asDiagonal();
  return EffectiveMatrix(std::move(eff));
}

void SolverOptions::validate() const {
  if (!(initial_step > 0.0 && initial_step < 1.0)) {
    throw std::invalid_argument("solver.initial_step must lie in (0, 1)");
  }
  if (!(stop_threshold_per_element > 0.0)) {
    throw std::invalid_argument("solver.stop_threshold_per_element must be positive");
  }
  if (max_iterations < 1) throw std::invalid_argument("solver.max_iterations must be at least 1");
}

double objective(const EffectiveMatrix& eff, const CVector& weights, double gain, const CVector& symbols) {
  check_symbols(eff, symbols, "objective");
  check_weights(eff, weights, "objective");
  return (symbols - gain * (eff.matrix() * weights)).squaredNorm();
}

CVector init_w(const EffectiveMatrix& eff, const CVector& symbols, const PhaseCodebook& codebook) {
  check_symbols(eff, symbols, "init_w");
  if (symbols.squaredNorm() == 0.0) throw DegenerateSymbol("init_w: symbol vector is all zero");
  CVector u = eff.pseudo_inverse() * symbols;
  for (Index m = 0; m < u.size(); ++m) {
    const double mag = std::abs(u(m));
    u(m) = mag > 0.0 ? u(m) / mag : Complex(1.0, 0.0);
  }
  return quantize_phases(u, codebook);
}

double update_gain(const EffectiveMatrix& eff, const CVector& weights, const CVector& symbols) {
  check_symbols(eff, symbols, "update_gain");
  check_weights(eff, weights, "update_gain");
  return gain_step(eff, weights, symbols).gain;
}

double update_step_size(double initial_step, double gain, double spectral_norm_sq) {
  if (gain == 0.0) throw StalledGain("update_step_size: amplification gain is zero");
  return initial_step / (gain * spectral_norm_sq);
}

CVector update_direction(const EffectiveMatrix& eff, const CVector& weights, double gain, const CVector& symbols) {
  check_symbols(eff, symbols, "update_direction");
  check_weights(eff, weights, "update_direction");
  return eff.matrix().adjoint() * (symbols - gain * (eff.matrix() * weights));
}

TuningSolution solve(const EffectiveMatrix& eff, const CVector& symbols, const PhaseCodebook& codebook,
                     const SolverOptions& options) {
  options.validate();
  check_symbols(eff, symbols, "solve");
  if (symbols.squaredNorm() == 0.0) throw DegenerateSymbol("solve: symbol vector is all zero");

  const double threshold = options.stop_threshold(eff.elements());
  const double rho_sq = eff.spectral_norm_sq();

  TuningSolution out;
  CVector w = init_w(eff, symbols, codebook);
  GainStep step = gain_step(eff, w, symbols);

  out.initial_objective = step.objective;
  out.objective_trace.push_back(step.objective);

  CVector best_w = w;
  double best_gain = step.gain;
  double best_objective = step.objective;

  int t = 0;
  while (t < options.max_iterations) {
    if (step.gain <= 0.0) ++out.negative_gain_events;
    const double psi = guarded_step_size(options.initial_step, step.gain, rho_sq);
    const CVector direction = eff.matrix().adjoint() * step.residual;
    CVector next = quantize_phases(w + psi * direction, codebook);
    const double change = (next - w).squaredNorm();
    w = std::move(next);
    ++t;

    step = gain_step(eff, w, symbols);
    out.objective_trace.push_back(step.objective);
    if (step.objective < best_objective) {
      best_objective = step.objective;
      best_gain = step.gain;
      best_w = w;
    }
    if (change < threshold) {
      out.converged = true;
      break;
    }
  }

  out.iterations = t;
  if (options.track_best) {
    out.weights = std::move(best_w);
    out.gain = best_gain;
    out.final_objective = best_objective;
  } else {
    out.weights = std::move(w);
    out.gain = step.gain;
    out.final_objective = step.objective;
  }
  out.phases.reserve(out.weights.size());
  for (Index m = 0; m < out.weights.size(); ++m) {
    out.phases.push_back(codebook.nearest_phase(std::arg(out.weights(m))));
  }
  return out;
}

}  // namespace rissrf
