// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "rissrf/channel.hpp"
#include "rissrf/geometry.hpp"
#include "rissrf/types.hpp"

namespace rissrf {

/// Phase alphabet available to each surface element.
///
/// A B-bit codebook holds the 2^B phases -pi + i pi / 2^(B-1), i = 0..2^B-1.
/// The continuous codebook is the whole circle.
class PhaseCodebook {
 public:
  static PhaseCodebook quantized(int bits);
  static PhaseCodebook continuous();

  bool is_continuous() const { return bits_ == 0; }
  /// Resolution in bits; 0 for the continuous codebook.
  int bits() const { return bits_; }
  const std::vector<double>& phases() const { return phases_; }
  /// Spacing between neighbouring phases; 0 for the continuous codebook.
  double spacing() const;

  /// Codebook phase nearest to `angle` in wrapped distance. Exact midpoints
  /// resolve to the smaller of the two phases.
  double nearest_phase(double angle) const;
  /// Unit-modulus projection of u. A zero input maps to the first codebook phase.
  Complex project(Complex u) const;

  /// "1", "2", ... or "inf".
  std::string label() const;

  friend bool operator==(const PhaseCodebook& a, const PhaseCodebook& b) { return a.bits_ == b.bits_; }

 private:
  explicit PhaseCodebook(int bits);

  int bits_ = 0;
  std::vector<double> phases_;
  std::vector<Complex> points_;
};

/// Entrywise projection onto the codebook (uniform phase quantizer).
CVector quantize_phases(const CVector& u, const PhaseCodebook& codebook);

/// Largest squared singular value of a nonzero matrix.
double spectral_norm_sq(const CMatrix& matrix);

/// The effective channel H~ = sqrt(P) G H T together with the quantities the
/// tuner needs once per channel realization.
class EffectiveMatrix {
 public:
  explicit EffectiveMatrix(CMatrix matrix);

  static EffectiveMatrix from_factors(double power, const PostGains& gains, const CMatrix& channel,
                                      const SurfaceModel& surface);

  const CMatrix& matrix() const { return matrix_; }
  const CMatrix& pseudo_inverse() const { return pseudo_inverse_; }
  double spectral_norm_sq() const { return spectral_norm_sq_; }
  Index users() const { return matrix_.rows(); }
  Index elements() const { return matrix_.cols(); }

 private:
  CMatrix matrix_;
  CMatrix pseudo_inverse_;
  double spectral_norm_sq_ = 0.0;
};

struct SolverOptions {
  double initial_step = 0.5;  // psi_0, in (0, 1)
  /// Stopping threshold E_Th on ||w_{t+1} - w_t||^2, expressed per element
  /// (E_Th = stop_threshold_per_element * M).
  double stop_threshold_per_element = 1e-3;
  int max_iterations = 1000;
  /// Return the best visited (w, A) pair instead of the last iterate.
  bool track_best = true;

  double stop_threshold(Index elements) const { return stop_threshold_per_element * static_cast<double>(elements); }
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct TuningSolution {
  CVector weights;            // w, unit modulus
  std::vector<double> phases; // beta_m = arg w_m, codebook members
  double gain = 0.0;          // A
  int iterations = 0;
  double initial_objective = 0.0;  // objective of (w_0, A_1)
  double final_objective = 0.0;    // ||s - A H~ w||^2 of the returned pair
  bool converged = false;          // stopped by E_Th rather than the iteration cap
  int negative_gain_events = 0;
  std::vector<double> objective_trace;
};

/// ||s - A H~ w||^2.
double objective(const EffectiveMatrix& eff, const CVector& weights, double gain, const CVector& symbols);

/// w_0 = Quant(u / |u|) with u = H~^P s and |.| taken entrywise.
CVector init_w(const EffectiveMatrix& eff, const CVector& symbols, const PhaseCodebook& codebook);

/// A = Re{w^H H~^H s} / ||H~ w||^2, the least-squares real gain for fixed w.
double update_gain(const EffectiveMatrix& eff, const CVector& weights, const CVector& symbols);

/// psi = psi_0 A / rho_max^2(A H~) = psi_0 / (A rho_max^2(H~)). Throws StalledGain for A = 0.
double update_step_size(double initial_step, double gain, double spectral_norm_sq);

/// v = H~^H (s - A H~ w).
CVector update_direction(const EffectiveMatrix& eff, const CVector& weights, double gain, const CVector& symbols);

/// Gradient-projection tuner for min_{w in W^M, A real} ||s - A H~ w||^2.
TuningSolution solve(const EffectiveMatrix& eff, const CVector& symbols, const PhaseCodebook& codebook,
                     const SolverOptions& options = {});

}  // namespace rissrf
