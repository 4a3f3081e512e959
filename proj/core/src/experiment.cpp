// SPDX-License-Identifier: Apache-2.0

#include "rissrf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>
#include <tuple>

#include "rissrf/baseline.hpp"
#include "rissrf/records.hpp"
#include "rissrf/solver.hpp"

#ifndef RISSRF_VERSION
#define RISSRF_VERSION "unknown"
#endif

namespace rissrf {

namespace {

template <typename Body>
void parallel_for(std::size_t count, int workers, Body&& body) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
}

std::string point_context(int users, int elements, const PhaseCodebook& codebook, int trial_index) {
  return "trial K=" + std::to_string(users) + " M=" + std::to_string(elements) + " B=" + codebook.label() +
         " index=" + std::to_string(trial_index);
}

TrialResult labelled(Scheme scheme, int users, int elements, const PhaseCodebook& codebook, int trial_index,
                     std::uint64_t seed) {
  TrialResult r;
  r.scheme = scheme;
  r.users = users;
  r.elements = elements;
  r.bits = codebook.label();
  r.trial_index = trial_index;
  r.trial_seed = seed;
  return r;
}

using RowKey = std::tuple<Scheme, int, int, std::string, int>;

RowKey key_of(const TrialResult& r) { return {r.scheme, r.users, r.elements, r.bits, r.trial_index}; }

std::map<RowKey, TrialResult> read_rows(const std::filesystem::path& path) {
  std::map<RowKey, TrialResult> rows;
  std::ifstream in(path);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (auto row = parse_trial_csv_row(line)) rows.emplace(key_of(*row), std::move(*row));
  }
  return rows;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (const double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (const double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

TrialSeeds TrialSeeds::from_trial_seed(std::uint64_t seed) {
  return {derive_seed(seed, {0}), derive_seed(seed, {1}), derive_seed(seed, {2})};
}

std::uint64_t trial_seed(std::uint64_t master_seed, int users, int elements, const PhaseCodebook& codebook,
                         int trial_index) {
  return derive_seed(master_seed, {static_cast<std::uint64_t>(users), static_cast<std::uint64_t>(elements),
                                   static_cast<std::uint64_t>(codebook.bits()),
                                   static_cast<std::uint64_t>(trial_index)});
}

SurfaceCache::SurfaceCache(const SimConfig& config) : config_(config) {}

SurfaceModel SurfaceCache::build(const SimConfig& config, int elements) {
  const auto grid = layout_elements(elements, config.wavelength, config.feed_distance_for(elements));
  return propagation_coeffs(grid, config.feed_pattern(), config.efficiency());
}

std::shared_ptr<const SurfaceModel> SurfaceCache::get(int elements) {
  std::lock_guard lock(mutex_);
  auto it = surfaces_.find(elements);
  if (it == surfaces_.end()) {
    it = surfaces_.emplace(elements, std::make_shared<const SurfaceModel>(build(config_, elements))).first;
  }
  return it->second;
}

TrialOutcome run_trial(const SimConfig& config, int users, int elements, const PhaseCodebook& codebook,
                       int trial_index, SurfaceCache& surfaces, bool with_record) {
  const auto seed = trial_seed(config.seed, users, elements, codebook, trial_index);
  return run_trial_with_seeds(config, users, elements, codebook, TrialSeeds::from_trial_seed(seed), surfaces,
                              with_record, trial_index, seed);
}

TrialOutcome run_trial_with_seeds(const SimConfig& config, int users, int elements, const PhaseCodebook& codebook,
                                  const TrialSeeds& seeds, SurfaceCache& surfaces, bool with_record, int trial_index,
                                  std::uint64_t trial_seed_label) {
  try {
    const auto surface = surfaces.get(elements);
    const int block = config.block_length;

    auto user_stream = make_stream(seeds.users);
    auto large_scale = draw_users(users, config.cell, user_stream);
    auto fading_stream = make_stream(seeds.fading);
    CMatrix fading = draw_fading(users, elements, fading_stream);
    auto symbol_stream = make_stream(seeds.symbols);
    const CMatrix symbols = draw_symbols(users, block, symbol_stream);

    const ChannelRealization channel = assemble_channel(std::move(large_scale), std::move(fading));
    const PostGains post = compensating_gains(channel.large_scale);
    const EffectiveMatrix eff = EffectiveMatrix::from_factors(config.power, post, channel.channel, *surface);
    const CVector feed = std::sqrt(config.power) * surface->diagonal();

    CMatrix transmit(elements, block);
    std::vector<double> gains(block);
    SolverStats stats;
    double mse_sum = 0.0;
    int converged = 0;
    long iterations = 0;
    nlohmann::json solves = nlohmann::json::array();

    for (int n = 0; n < block; ++n) {
      const CVector s = symbols.col(n);
      const TuningSolution sol = solve(eff, s, codebook, config.solver);
      gains[n] = sol.gain;
      transmit.col(n) = sol.gain * feed.cwiseProduct(sol.weights);
      iterations += sol.iterations;
      converged += sol.converged ? 1 : 0;
      stats.negative_gain_events += sol.negative_gain_events;
      stats.trace_length += static_cast<long>(sol.objective_trace.size());
      mse_sum += received_mse(s, post, channel.channel, transmit.col(n), config.noise_variance);
      if (with_record) {
        solves.push_back({{"iterations", sol.iterations},
                          {"converged", sol.converged},
                          {"objective_trace_length", sol.objective_trace.size()},
                          {"negative_gain_events", sol.negative_gain_events},
                          {"gain", sol.gain},
                          {"final_objective", sol.final_objective}});
      }
    }
    stats.solves = block;
    stats.iterations_mean = static_cast<double>(iterations) / block;
    stats.converged_fraction = static_cast<double>(converged) / block;

    TrialOutcome out;
    out.single_rf = labelled(Scheme::SingleRf, users, elements, codebook, trial_index, trial_seed_label);
    out.single_rf.distortion = distortion(symbols, post, channel.channel, transmit);
    out.single_rf.p_out = average_power(gains, config.power);
    out.single_rf.papr = papr(gains, config.power);
    out.single_rf.received_mse = mse_sum / block;
    out.single_rf.solver = stats;

    if (config.runs(Scheme::MfDigital)) {
      CMatrix mf_transmit(elements, block);
      std::vector<double> amplitudes(block);
      double scale_sum = 0.0;
      for (int n = 0; n < block; ++n) {
        const MfPrecoding mf = mf_precode(channel.channel, symbols.col(n), transmit.col(n).squaredNorm());
        mf_transmit.col(n) = mf.transmit;
        amplitudes[n] = mf.transmit.norm();
        scale_sum += mf.scale;
      }
      const PostGains mf_post = mf_post_gains(channel.large_scale, elements, scale_sum / block);
      TrialResult mf = labelled(Scheme::MfDigital, users, elements, codebook, trial_index, trial_seed_label);
      mf.distortion = distortion(symbols, mf_post, channel.channel, mf_transmit);
      mf.p_out = average_power(amplitudes, 1.0);
      mf.papr = papr(amplitudes, 1.0);
      double mf_mse = 0.0;
      for (int n = 0; n < block; ++n) {
        mf_mse += received_mse(symbols.col(n), mf_post, channel.channel, mf_transmit.col(n), config.noise_variance);
      }
      mf.received_mse = mf_mse / block;
      out.baseline = std::move(mf);
    }

    if (with_record) {
      nlohmann::json record;
      record["seed"] = trial_seed_label;
      record["trial"] = trial_index;
      record["streams"] = {{"users", seeds.users}, {"fading", seeds.fading}, {"symbols", seeds.symbols}};
      record["K"] = users;
      record["M"] = elements;
      record["B"] = codebook.label();
      record["nu"] = config.cell.path_loss_exponent;
      record["sigma_shadow_dB"] = config.cell.shadowing_std_db;
      record["r_h"] = config.cell.min_distance;
      record["r_max"] = config.cell.max_distance;
      record["users"] = users_to_json(channel.large_scale);
      record["surface"] = surface_to_json(*surface);
      record["spectral_norm_sq"] = eff.spectral_norm_sq();
      record["solves"] = std::move(solves);
      out.record = std::move(record);
    }
    return out;
  } catch (const TrialError&) {
    throw;
  } catch (const std::exception& e) {
    throw TrialError(point_context(users, elements, codebook, trial_index) + ": " + e.what());
  }
}

std::vector<SweepPoint> sweep_points(const SimConfig& config) {
  std::vector<SweepPoint> points;
  for (const int m : config.elements) {
    for (const auto& cb : config.codebooks) {
      for (const int k : config.users) points.push_back({k, m, cb});
    }
  }
  return points;
}

PointSummary summarize(Scheme scheme, const SweepPoint& point, const std::vector<TrialResult>& trials) {
  PointSummary s;
  s.scheme = scheme;
  s.users = point.users;
  s.elements = point.elements;
  s.bits = point.codebook.label();
  std::vector<double> d_db, d_lin, p_out, papr_db, papr_lin, iters, conv;
  for (const auto& t : trials) {
    if (!t.ok) {
      ++s.failed;
      continue;
    }
    d_db.push_back(t.distortion_db().value);
    d_lin.push_back(t.distortion);
    p_out.push_back(t.p_out);
    papr_db.push_back(t.papr_db().value);
    papr_lin.push_back(t.papr);
    iters.push_back(t.solver.iterations_mean);
    conv.push_back(t.solver.converged_fraction);
  }
  s.trials = static_cast<int>(d_db.size());
  s.d_db_mean = mean_of(d_db);
  s.d_db_std = std_of(d_db);
  s.d_linear_mean = mean_of(d_lin);
  s.p_out_mean = mean_of(p_out);
  s.papr_db_mean = mean_of(papr_db);
  s.papr_db_std = std_of(papr_db);
  s.papr_linear_mean = mean_of(papr_lin);
  s.iterations_mean = mean_of(iters);
  s.converged_fraction = mean_of(conv);
  return s;
}

const PointSummary* Dataset::find(Scheme scheme, int users, int elements, const std::string& bits) const {
  for (const auto& s : summary) {
    if (s.scheme == scheme && s.users == users && s.elements == elements && s.bits == bits) return &s;
  }
  return nullptr;
}

Dataset run_sweep(const SimConfig& config, const SweepOptions& options) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  const auto points = sweep_points(config);
  const int workers =
      options.workers > 0 ? options.workers : std::max(1, static_cast<int>(std::thread::hardware_concurrency()));

  std::vector<Scheme> schemes{Scheme::SingleRf};
  if (config.runs(Scheme::MfDigital)) schemes.push_back(Scheme::MfDigital);

  std::map<RowKey, TrialResult> previous;
  std::ofstream partial;
  std::filesystem::path partial_path;
  if (options.output_dir) {
    std::filesystem::create_directories(*options.output_dir);
    partial_path = *options.output_dir / "trials.partial.csv";
    if (options.resume) {
      previous = read_rows(*options.output_dir / "trials.csv");
      for (auto& [key, row] : read_rows(partial_path)) previous.insert_or_assign(key, std::move(row));
    }
    nlohmann::json manifest{{"tool", "rissrf"}, {"version", RISSRF_VERSION}, {"status", "running"},
                            {"config", to_json(config)}};
    std::ofstream(*options.output_dir / "manifest.json") << manifest.dump(2) << '\n';
    // Rewrite surviving rows so a torn trailing line from an interrupted run is dropped.
    partial.open(partial_path, std::ios::trunc);
    partial << trial_csv_header() << '\n';
    for (const auto& [key, row] : previous) partial << trial_csv_row(row) << '\n';
    partial.flush();
  }

  Dataset data;
  data.config = config;
  SurfaceCache surfaces(config);
  const std::size_t trials = static_cast<std::size_t>(config.trials);

  for (std::size_t p = 0; p < points.size(); ++p) {
    const SweepPoint& point = points[p];
    std::vector<std::vector<std::optional<TrialResult>>> rows(schemes.size(),
                                                              std::vector<std::optional<TrialResult>>(trials));
    std::vector<int> pending;
    for (std::size_t t = 0; t < trials; ++t) {
      bool complete = true;
      for (std::size_t s = 0; s < schemes.size(); ++s) {
        const TrialResult probe = labelled(schemes[s], point.users, point.elements, point.codebook,
                                           static_cast<int>(t), 0);
        auto it = previous.find(key_of(probe));
        if (it == previous.end()) {
          complete = false;
        } else {
          rows[s][t] = it->second;
        }
      }
      if (!complete) pending.push_back(static_cast<int>(t));
    }

    parallel_for(pending.size(), workers, [&](std::size_t i) {
      const int t = pending[i];
      const auto seed = trial_seed(config.seed, point.users, point.elements, point.codebook, t);
      try {
        auto outcome = run_trial(config, point.users, point.elements, point.codebook, t, surfaces);
        rows[0][t] = std::move(outcome.single_rf);
        if (schemes.size() > 1) rows[1][t] = std::move(*outcome.baseline);
      } catch (const std::exception& e) {
        for (std::size_t s = 0; s < schemes.size(); ++s) {
          TrialResult failed = labelled(schemes[s], point.users, point.elements, point.codebook, t, seed);
          failed.ok = false;
          failed.error = e.what();
          rows[s][t] = std::move(failed);
        }
      }
    });

    if (partial.is_open()) {
      for (const int t : pending) {
        for (std::size_t s = 0; s < schemes.size(); ++s) partial << trial_csv_row(*rows[s][t]) << '\n';
      }
      partial.flush();
    }

    for (std::size_t s = 0; s < schemes.size(); ++s) {
      std::vector<TrialResult> point_rows;
      point_rows.reserve(trials);
      for (auto& row : rows[s]) point_rows.push_back(std::move(*row));
      data.summary.push_back(summarize(schemes[s], point, point_rows));
      for (auto& row : point_rows) data.trials.push_back(std::move(row));
    }
    if (options.progress) options.progress(p + 1, points.size());
  }

  data.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  if (options.output_dir) {
    const auto& dir = *options.output_dir;
    {
      std::ofstream out(dir / "trials.csv", std::ios::trunc);
      out << trial_csv_header() << '\n';
      for (const auto& row : data.trials) out << trial_csv_row(row) << '\n';
    }
    {
      std::ofstream out(dir / "summary.csv", std::ios::trunc);
      out << summary_csv_header() << '\n';
      for (const auto& row : data.summary) out << summary_csv_row(row) << '\n';
    }
    nlohmann::json counts = nlohmann::json::array();
    for (const auto& s : data.summary) {
      counts.push_back({{"scheme", to_string(s.scheme)},
                        {"K", s.users},
                        {"M", s.elements},
                        {"B", s.bits},
                        {"trials", s.trials},
                        {"failed", s.failed}});
    }
    nlohmann::json manifest{{"tool", "rissrf"},
                            {"version", RISSRF_VERSION},
                            {"status", "complete"},
                            {"config", to_json(config)},
                            {"seed", config.seed},
                            {"workers", workers},
                            {"duration_s", data.seconds},
                            {"points", std::move(counts)}};
    std::ofstream(dir / "manifest.json", std::ios::trunc) << manifest.dump(2) << '\n';
    partial.close();
    std::filesystem::remove(partial_path);
  }
  return data;
}

}  // namespace rissrf
