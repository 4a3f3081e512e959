// SPDX-License-Identifier: Apache-2.0

#include "rissrf/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace rissrf {

namespace {

using nlohmann::json;

const std::set<std::string> kTopKeys{"power",        "wavelength_m",   "elements",     "feed_distance_m",
                                     "efficiency_db", "feed_beamwidth_deg", "bits",     "users",
                                     "block_length", "channel",        "noise_variance", "trials",
                                     "seed",         "solver",         "schemes"};
const std::set<std::string> kChannelKeys{"path_loss_exponent", "shadowing_std_db", "min_distance_m",
                                         "max_distance_m"};
const std::set<std::string> kSolverKeys{"initial_step", "stop_threshold_per_element", "max_iterations",
                                        "track_best"};

void reject_unknown(const json& object, const std::set<std::string>& allowed, const std::string& prefix) {
  for (const auto& [key, value] : object.items()) {
    if (!allowed.contains(key)) throw ConfigError(prefix + key, "unknown field");
  }
}

double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field, "expected a number");
  return j.get<double>();
}

std::int64_t get_integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ConfigError(field, "expected an integer");
  return j.get<std::int64_t>();
}

bool get_bool(const json& j, const std::string& field) {
  if (!j.is_boolean()) throw ConfigError(field, "expected true or false");
  return j.get<bool>();
}

std::vector<int> get_int_list(const json& j, const std::string& field) {
  if (!j.is_array()) throw ConfigError(field, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(static_cast<int>(get_integer(j[i], field + "[" + std::to_string(i) + "]")));
  }
  return out;
}

std::vector<int> parse_users(const json& j) {
  if (j.is_array()) return get_int_list(j, "users");
  if (!j.is_object()) throw ConfigError("users", "expected an array or {start, stop, step}");
  reject_unknown(j, {"start", "stop", "step"}, "users.");
  for (const char* key : {"start", "stop"}) {
    if (!j.contains(key)) throw ConfigError(std::string("users.") + key, "missing");
  }
  const auto start = get_integer(j["start"], "users.start");
  const auto stop = get_integer(j["stop"], "users.stop");
  const auto step = j.contains("step") ? get_integer(j["step"], "users.step") : 1;
  if (step < 1) throw ConfigError("users.step", "must be at least 1");
  std::vector<int> out;
  for (auto k = start; k <= stop; k += step) out.push_back(static_cast<int>(k));
  return out;
}

}  // namespace

std::string to_string(Scheme scheme) { return scheme == Scheme::SingleRf ? "single_rf" : "mf_digital"; }

Scheme scheme_from_string(std::string_view name) {
  if (name == "single_rf") return Scheme::SingleRf;
  if (name == "mf_digital") return Scheme::MfDigital;
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

PhaseCodebook codebook_from_string(std::string_view text) {
  if (text == "inf" || text == "continuous") return PhaseCodebook::continuous();
  int bits = 0;
  for (const char c : text) {
    if (c < '0' || c > '9' || bits > 1000) throw std::invalid_argument("invalid bit depth '" + std::string(text) + "'");
    bits = bits * 10 + (c - '0');
  }
  if (text.empty()) throw std::invalid_argument("empty bit depth");
  return PhaseCodebook::quantized(bits);
}

std::vector<int> SimConfig::default_users() {
  std::vector<int> out;
  for (int k = 2; k <= 32; k += 2) out.push_back(k);
  return out;
}

double SimConfig::feed_distance_for(int num_elements) const {
  return feed_distance ? *feed_distance : default_feed_distance(num_elements, wavelength);
}

double SimConfig::efficiency() const { return std::pow(10.0, efficiency_db / 10.0); }

FeedPattern SimConfig::feed_pattern() const { return FeedPattern::ideal_sector(feed_beamwidth_deg * kPi / 180.0); }

bool SimConfig::runs(Scheme scheme) const {
  for (const auto s : schemes) {
    if (s == scheme) return true;
  }
  return false;
}

void SimConfig::validate() const {
  if (!(power > 0.0)) throw ConfigError("power", "must be positive");
  if (!(wavelength > 0.0)) throw ConfigError("wavelength_m", "must be positive");
  if (elements.empty()) throw ConfigError("elements", "must not be empty");
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const int m = elements[i];
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(std::max(m, 0)))));
    if (m < 1 || side * side != m) {
      throw ConfigError("elements[" + std::to_string(i) + "]", "must be a positive perfect square");
    }
  }
  if (feed_distance && !(*feed_distance > 0.0)) throw ConfigError("feed_distance_m", "must be positive");
  if (!(efficiency_db <= 0.0)) throw ConfigError("efficiency_db", "must be at most 0 dB");
  if (!(feed_beamwidth_deg > 0.0 && feed_beamwidth_deg <= 180.0)) {
    throw ConfigError("feed_beamwidth_deg", "must lie in (0, 180]");
  }
  if (codebooks.empty()) throw ConfigError("bits", "must not be empty");
  if (users.empty()) throw ConfigError("users", "must not be empty");
  for (std::size_t i = 0; i < users.size(); ++i) {
    if (users[i] < 1) throw ConfigError("users[" + std::to_string(i) + "]", "must be positive");
  }
  if (block_length < 1) throw ConfigError("block_length", "must be positive");
  if (!(cell.min_distance > 0.0)) throw ConfigError("channel.min_distance_m", "must be positive");
  if (!(cell.max_distance > cell.min_distance)) {
    throw ConfigError("channel.max_distance_m", "must exceed channel.min_distance_m");
  }
  if (!(cell.path_loss_exponent > 0.0)) throw ConfigError("channel.path_loss_exponent", "must be positive");
  if (!(cell.shadowing_std_db >= 0.0)) throw ConfigError("channel.shadowing_std_db", "must be non-negative");
  if (!(noise_variance >= 0.0)) throw ConfigError("noise_variance", "must be non-negative");
  if (trials < 1) throw ConfigError("trials", "must be at least 1");
  if (schemes.empty()) throw ConfigError("schemes", "must not be empty");
  if (!runs(Scheme::SingleRf)) throw ConfigError("schemes", "the mf_digital baseline needs single_rf in the same run");
  try {
    solver.validate();
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    const auto space = what.find(' ');
    throw ConfigError(what.substr(0, space), space == std::string::npos ? what : what.substr(space + 1));
  }
  // Every element must sit inside the feed beam.
  for (std::size_t i = 0; i < elements.size(); ++i) {
    try {
      propagation_coeffs(layout_elements(elements[i], wavelength, feed_distance_for(elements[i])), feed_pattern(),
                         efficiency());
    } catch (const std::exception& e) {
      throw ConfigError("elements[" + std::to_string(i) + "]", e.what());
    }
  }
}

SimConfig preset(std::string_view name) {
  SimConfig cfg;
  if (name == "fig2" || name == "fig3") {
    cfg.codebooks = {PhaseCodebook::quantized(4)};
    cfg.elements = {64, 121, 225};
    cfg.schemes = name == "fig2" ? std::vector<Scheme>{Scheme::SingleRf, Scheme::MfDigital}
                                 : std::vector<Scheme>{Scheme::SingleRf};
    return cfg;
  }
  if (name == "fig4") {
    cfg.elements = {64};
    cfg.codebooks = {PhaseCodebook::quantized(1), PhaseCodebook::quantized(2), PhaseCodebook::quantized(4),
                     PhaseCodebook::continuous()};
    return cfg;
  }
  throw ConfigError("preset", "unknown preset '" + std::string(name) + "' (expected fig2, fig3 or fig4)");
}

std::vector<std::string> preset_names() { return {"fig2", "fig3", "fig4"}; }

SimConfig config_from_json(const json& input) {
  const json& j = (input.is_object() && input.contains("config") && input["config"].is_object()) ? input["config"]
                                                                                                  : input;
  if (!j.is_object()) throw ConfigError("<root>", "expected a JSON object");
  reject_unknown(j, kTopKeys, "");

  SimConfig cfg;
  if (j.contains("power")) cfg.power = get_number(j["power"], "power");
  if (j.contains("wavelength_m")) cfg.wavelength = get_number(j["wavelength_m"], "wavelength_m");
  if (j.contains("elements")) cfg.elements = get_int_list(j["elements"], "elements");
  if (j.contains("feed_distance_m")) {
    const auto& fd = j["feed_distance_m"];
    if (fd.is_string() && fd.get<std::string>() == "auto") {
      cfg.feed_distance.reset();
    } else {
      cfg.feed_distance = get_number(fd, "feed_distance_m");
    }
  }
  if (j.contains("efficiency_db")) cfg.efficiency_db = get_number(j["efficiency_db"], "efficiency_db");
  if (j.contains("feed_beamwidth_deg")) {
    cfg.feed_beamwidth_deg = get_number(j["feed_beamwidth_deg"], "feed_beamwidth_deg");
  }
  if (j.contains("bits")) {
    const auto& bits = j["bits"];
    if (!bits.is_array()) throw ConfigError("bits", "expected an array of bit depths or \"continuous\"");
    cfg.codebooks.clear();
    for (std::size_t i = 0; i < bits.size(); ++i) {
      const std::string field = "bits[" + std::to_string(i) + "]";
      try {
        if (bits[i].is_number_integer()) {
          cfg.codebooks.push_back(PhaseCodebook::quantized(bits[i].get<int>()));
        } else if (bits[i].is_string()) {
          cfg.codebooks.push_back(codebook_from_string(bits[i].get<std::string>()));
        } else {
          throw ConfigError(field, "expected an integer or \"continuous\"");
        }
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        throw ConfigError(field, e.what());
      }
    }
  }
  if (j.contains("users")) cfg.users = parse_users(j["users"]);
  if (j.contains("block_length")) cfg.block_length = static_cast<int>(get_integer(j["block_length"], "block_length"));
  if (j.contains("channel")) {
    const auto& c = j["channel"];
    if (!c.is_object()) throw ConfigError("channel", "expected an object");
    reject_unknown(c, kChannelKeys, "channel.");
    if (c.contains("path_loss_exponent")) {
      cfg.cell.path_loss_exponent = get_number(c["path_loss_exponent"], "channel.path_loss_exponent");
    }
    if (c.contains("shadowing_std_db")) {
      cfg.cell.shadowing_std_db = get_number(c["shadowing_std_db"], "channel.shadowing_std_db");
    }
    if (c.contains("min_distance_m")) cfg.cell.min_distance = get_number(c["min_distance_m"], "channel.min_distance_m");
    if (c.contains("max_distance_m")) cfg.cell.max_distance = get_number(c["max_distance_m"], "channel.max_distance_m");
  }
  if (j.contains("noise_variance")) cfg.noise_variance = get_number(j["noise_variance"], "noise_variance");
  if (j.contains("trials")) cfg.trials = static_cast<int>(get_integer(j["trials"], "trials"));
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0)) {
      throw ConfigError("seed", "expected a non-negative integer");
    }
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    if (!s.is_object()) throw ConfigError("solver", "expected an object");
    reject_unknown(s, kSolverKeys, "solver.");
    if (s.contains("initial_step")) cfg.solver.initial_step = get_number(s["initial_step"], "solver.initial_step");
    if (s.contains("stop_threshold_per_element")) {
      cfg.solver.stop_threshold_per_element =
          get_number(s["stop_threshold_per_element"], "solver.stop_threshold_per_element");
    }
    if (s.contains("max_iterations")) {
      cfg.solver.max_iterations = static_cast<int>(get_integer(s["max_iterations"], "solver.max_iterations"));
    }
    if (s.contains("track_best")) cfg.solver.track_best = get_bool(s["track_best"], "solver.track_best");
  }
  if (j.contains("schemes")) {
    const auto& s = j["schemes"];
    if (!s.is_array()) throw ConfigError("schemes", "expected an array");
    cfg.schemes.clear();
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string field = "schemes[" + std::to_string(i) + "]";
      if (!s[i].is_string()) throw ConfigError(field, "expected \"single_rf\" or \"mf_digital\"");
      try {
        cfg.schemes.push_back(scheme_from_string(s[i].get<std::string>()));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(field, e.what());
      }
    }
  }
  cfg.validate();
  return cfg;
}

json to_json(const SimConfig& cfg) {
  json bits = json::array();
  for (const auto& cb : cfg.codebooks) {
    if (cb.is_continuous()) {
      bits.push_back("continuous");
    } else {
      bits.push_back(cb.bits());
    }
  }
  json schemes = json::array();
  for (const auto s : cfg.schemes) schemes.push_back(to_string(s));

  json out;
  out["power"] = cfg.power;
  out["wavelength_m"] = cfg.wavelength;
  out["elements"] = cfg.elements;
  out["feed_distance_m"] = cfg.feed_distance ? json(*cfg.feed_distance) : json("auto");
  out["efficiency_db"] = cfg.efficiency_db;
  out["feed_beamwidth_deg"] = cfg.feed_beamwidth_deg;
  out["bits"] = std::move(bits);
  out["users"] = cfg.users;
  out["block_length"] = cfg.block_length;
  out["channel"] = {{"path_loss_exponent", cfg.cell.path_loss_exponent},
                    {"shadowing_std_db", cfg.cell.shadowing_std_db},
                    {"min_distance_m", cfg.cell.min_distance},
                    {"max_distance_m", cfg.cell.max_distance}};
  out["noise_variance"] = cfg.noise_variance;
  out["trials"] = cfg.trials;
  out["seed"] = cfg.seed;
  out["solver"] = {{"initial_step", cfg.solver.initial_step},
                   {"stop_threshold_per_element", cfg.solver.stop_threshold_per_element},
                   {"max_iterations", cfg.solver.max_iterations},
                   {"track_best", cfg.solver.track_best}};
  out["schemes"] = std::move(schemes);
  return out;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(j);
}

}  // namespace rissrf
