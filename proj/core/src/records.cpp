// SPDX-License-Identifier: Apache-2.0

#include "rissrf/records.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace rissrf {

namespace {

constexpr std::size_t kTrialColumns = 17;

std::vector<std::string_view> split(std::string_view line, char sep, std::size_t max_fields) {
  std::vector<std::string_view> out;
  while (out.size() + 1 < max_fields) {
    const auto pos = line.find(sep);
    if (pos == std::string_view::npos) break;
    out.push_back(line.substr(0, pos));
    line.remove_prefix(pos + 1);
  }
  out.push_back(line);
  return out;
}

template <typename T>
bool parse_number(std::string_view text, T& value) {
  if constexpr (std::is_floating_point_v<T>) {
    if (text == "nan") {
      value = std::nan("");
      return true;
    }
  }
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::string sanitize(std::string text) {
  for (auto& c : text) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return text;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

nlohmann::json surface_to_json(const SurfaceModel& surface) {
  return {{"M", surface.num_elements},
          {"lambda_m", surface.wavelength},
          {"R_d_m", surface.feed_distance},
          {"zeta", surface.efficiency},
          {"T", surface.attenuation},
          {"omega", surface.phase}};
}

nlohmann::json users_to_json(const std::vector<UserLargeScale>& users) {
  auto out = nlohmann::json::array();
  for (const auto& u : users) out.push_back({{"r_m", u.distance}, {"alpha_dB", u.shadowing_db()}});
  return out;
}

std::string trial_csv_header() {
  return "scheme,K,M,B,trial,trial_seed,D_dB,D_linear,D_floored,P_out,PAPR_dB,PAPR_linear,MSE_R,"
         "iterations_mean,converged_fraction,negative_gain_events,status";
}

std::string trial_csv_row(const TrialResult& r) {
  const auto d_db = r.distortion_db();
  std::ostringstream os;
  os << to_string(r.scheme) << ',' << r.users << ',' << r.elements << ',' << r.bits << ',' << r.trial_index << ','
     << r.trial_seed << ',';
  if (r.ok) {
    os << format_double(d_db.value) << ',' << format_double(r.distortion) << ',' << (d_db.floored ? 1 : 0) << ','
       << format_double(r.p_out) << ',' << format_double(r.papr_db().value) << ',' << format_double(r.papr) << ','
       << format_double(r.received_mse) << ',' << format_double(r.solver.iterations_mean) << ','
       << format_double(r.solver.converged_fraction) << ',' << r.solver.negative_gain_events << ",ok";
  } else {
    os << "nan,nan,0,nan,nan,nan,nan,nan,nan,0,failed: " << sanitize(r.error);
  }
  return os.str();
}

std::optional<TrialResult> parse_trial_csv_row(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto f = split(line, ',', kTrialColumns);
  if (f.size() != kTrialColumns) return std::nullopt;

  TrialResult r;
  try {
    r.scheme = scheme_from_string(f[0]);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
  double d_db = 0.0;
  double papr_db = 0.0;
  int floored = 0;
  bool good = parse_number(f[1], r.users) && parse_number(f[2], r.elements) && !f[3].empty() &&
              parse_number(f[4], r.trial_index) && parse_number(f[5], r.trial_seed) && parse_number(f[6], d_db) &&
              parse_number(f[7], r.distortion) && parse_number(f[8], floored) && parse_number(f[9], r.p_out) &&
              parse_number(f[10], papr_db) && parse_number(f[11], r.papr) && parse_number(f[12], r.received_mse) &&
              parse_number(f[13], r.solver.iterations_mean) && parse_number(f[14], r.solver.converged_fraction) &&
              parse_number(f[15], r.solver.negative_gain_events);
  if (!good) return std::nullopt;
  r.bits = std::string(f[3]);
  const std::string_view status = f[16];
  if (status == "ok") {
    r.ok = true;
  } else if (status.starts_with("failed: ")) {
    r.ok = false;
    r.error = std::string(status.substr(8));
  } else {
    return std::nullopt;
  }
  return r;
}

std::string summary_csv_header() {
  return "scheme,K,M,B,trials,failed,D_dB_mean,D_dB_std,D_linear_mean,P_out_mean,PAPR_dB_mean,PAPR_dB_std,"
         "PAPR_linear_mean,iterations_mean,converged_fraction";
}

std::string summary_csv_row(const PointSummary& s) {
  std::ostringstream os;
  os << to_string(s.scheme) << ',' << s.users << ',' << s.elements << ',' << s.bits << ',' << s.trials << ','
     << s.failed << ',' << format_double(s.d_db_mean) << ',' << format_double(s.d_db_std) << ','
     << format_double(s.d_linear_mean) << ',' << format_double(s.p_out_mean) << ',' << format_double(s.papr_db_mean)
     << ',' << format_double(s.papr_db_std) << ',' << format_double(s.papr_linear_mean) << ','
     << format_double(s.iterations_mean) << ',' << format_double(s.converged_fraction);
  return os.str();
}

}  // namespace rissrf
