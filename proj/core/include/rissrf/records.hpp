// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rissrf/channel.hpp"
#include "rissrf/experiment.hpp"
#include "rissrf/geometry.hpp"

namespace rissrf {

/// Shortest text that parses back to the same double.
std::string format_double(double value);

nlohmann::json surface_to_json(const SurfaceModel& surface);
nlohmann::json users_to_json(const std::vector<UserLargeScale>& users);

/// Per-trial CSV: scheme,K,M,B,trial,trial_seed,D_dB,D_linear,D_floored,P_out,PAPR_dB,PAPR_linear,
/// MSE_R,iterations_mean,converged_fraction,negative_gain_events,status.
std::string trial_csv_header();
std::string trial_csv_row(const TrialResult& result);
/// Inverse of trial_csv_row; std::nullopt for malformed or truncated lines.
std::optional<TrialResult> parse_trial_csv_row(std::string_view line);

std::string summary_csv_header();
std::string summary_csv_row(const PointSummary& summary);

}  // namespace rissrf
