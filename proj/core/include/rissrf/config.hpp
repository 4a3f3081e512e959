// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rissrf/channel.hpp"
#include "rissrf/solver.hpp"

namespace rissrf {

enum class Scheme { SingleRf, MfDigital };

std::string to_string(Scheme scheme);
/// Accepts "single_rf" and "mf_digital".
Scheme scheme_from_string(std::string_view name);

/// Invalid configuration; `field()` is the dotted path of the offending entry.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Monte-Carlo experiment configuration. Defaults reproduce the reference
/// numerical setup (P = 1, lambda = 8 mm, 120 degree feed, zeta = 0 dB, N = 100).
struct SimConfig {
  double power = 1.0;
  double wavelength = 0.008;
  std::vector<int> elements{64, 121, 225};
  /// Explicit feed distance in metres; unset means lambda * sqrt(M / pi).
  std::optional<double> feed_distance;
  double efficiency_db = 0.0;
  double feed_beamwidth_deg = 120.0;
  std::vector<PhaseCodebook> codebooks{PhaseCodebook::quantized(1), PhaseCodebook::quantized(2),
                                       PhaseCodebook::quantized(4), PhaseCodebook::continuous()};
  std::vector<int> users = default_users();
  int block_length = 100;
  CellParams cell;
  /// Only enters the optional received-MSE column; distortion is noise-free.
  double noise_variance = 0.0;
  int trials = 200;
  std::uint64_t seed = 1;
  SolverOptions solver;
  std::vector<Scheme> schemes{Scheme::SingleRf};

  static std::vector<int> default_users();

  double feed_distance_for(int num_elements) const;
  double efficiency() const;
  FeedPattern feed_pattern() const;
  bool runs(Scheme scheme) const;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

/// Named presets "fig2" (B = 4, M in {64, 121, 225}, with the digital MF
/// baseline), "fig3" (same grid, single-RF only) and "fig4" (M = 64, all bit depths).
SimConfig preset(std::string_view name);
std::vector<std::string> preset_names();

/// Parses a config object, or a sweep manifest carrying one under "config".
/// Unknown keys are rejected. Throws ConfigError.
SimConfig config_from_json(const nlohmann::json& json);
nlohmann::json to_json(const SimConfig& config);

/// Reads and validates a JSON config file. Throws ConfigError.
SimConfig load_config(const std::filesystem::path& path);

/// Parses "1".."24", "inf" or "continuous".
PhaseCodebook codebook_from_string(std::string_view text);

}  // namespace rissrf
