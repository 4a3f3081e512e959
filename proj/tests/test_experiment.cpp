// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "rissrf/experiment.hpp"
#include "rissrf/records.hpp"

namespace rissrf {
namespace {

namespace fs = std::filesystem;

SimConfig small_config() {
  SimConfig cfg;
  cfg.elements = {16};
  cfg.codebooks = {PhaseCodebook::quantized(2), PhaseCodebook::continuous()};
  cfg.users = {2, 3};
  cfg.block_length = 8;
  cfg.trials = 4;
  cfg.seed = 5;
  cfg.schemes = {Scheme::SingleRf, Scheme::MfDigital};
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("rissrf_test_" + name);
  fs::remove_all(dir);
  return dir;
}

TEST(Trial, ScalarChannelIsReproducedExactly) {
  SimConfig cfg;
  cfg.elements = {1};
  cfg.codebooks = {PhaseCodebook::continuous()};
  cfg.users = {1};
  cfg.block_length = 1;
  cfg.cell.shadowing_std_db = 0.0;
  SurfaceCache cache(cfg);
  for (int t = 0; t < 20; ++t) {
    const auto out = run_trial(cfg, 1, 1, PhaseCodebook::continuous(), t, cache);
    EXPECT_LT(out.single_rf.distortion, 1e-28);
    EXPECT_DOUBLE_EQ(out.single_rf.papr, 1.0);
  }
}

TEST(Trial, MetricsAreWellFormed) {
  const auto cfg = small_config();
  SurfaceCache cache(cfg);
  const auto out = run_trial(cfg, 3, 16, PhaseCodebook::quantized(2), 1, cache, true);
  const auto& r = out.single_rf;
  EXPECT_TRUE(r.ok);
  EXPECT_GT(r.distortion, 0.0);
  EXPECT_GE(r.papr, 1.0);
  EXPECT_GT(r.p_out, 0.0);
  EXPECT_EQ(r.solver.solves, 8);
  EXPECT_EQ(r.bits, "2");
  ASSERT_TRUE(out.baseline.has_value());
  EXPECT_EQ(out.baseline->scheme, Scheme::MfDigital);
  // The baseline matches the single-RF radiated power A^2 P sum T^2 in every interval.
  const double radiated = cache.get(16)->power_gain();
  EXPECT_NEAR(out.baseline->p_out / (r.p_out * radiated), 1.0, 1e-12);
  EXPECT_NEAR(out.baseline->papr / r.papr, 1.0, 1e-12);

  ASSERT_TRUE(out.record.has_value());
  const auto& rec = *out.record;
  for (const char* key : {"seed", "K", "M", "B", "nu", "sigma_shadow_dB", "r_h", "r_max", "users", "surface", "solves"})
    EXPECT_TRUE(rec.contains(key)) << key;
  EXPECT_EQ(rec["users"].size(), 3u);
  EXPECT_EQ(rec["surface"]["T"].size(), 16u);
  EXPECT_EQ(rec["solves"].size(), 8u);
  EXPECT_EQ(rec["seed"].get<std::uint64_t>(), r.trial_seed);
}

TEST(Trial, SameInputsSameOutputs) {
  const auto cfg = small_config();
  SurfaceCache a(cfg), b(cfg);
  const auto x = run_trial(cfg, 2, 16, PhaseCodebook::continuous(), 3, a);
  const auto y = run_trial(cfg, 2, 16, PhaseCodebook::continuous(), 3, b);
  EXPECT_EQ(trial_csv_row(x.single_rf), trial_csv_row(y.single_rf));
  EXPECT_EQ(trial_csv_row(*x.baseline), trial_csv_row(*y.baseline));
}

TEST(Trial, SeedsDependOnEveryCoordinate) {
  std::set<std::uint64_t> seen;
  for (int k : {2, 4})
    for (int m : {64, 121})
      for (const auto& cb : {PhaseCodebook::quantized(1), PhaseCodebook::continuous()})
        for (int t = 0; t < 5; ++t) seen.insert(trial_seed(1, k, m, cb, t));
  EXPECT_EQ(seen.size(), 2u * 2u * 2u * 5u);
  EXPECT_NE(trial_seed(1, 2, 64, PhaseCodebook::quantized(4), 0), trial_seed(2, 2, 64, PhaseCodebook::quantized(4), 0));
  const auto s = TrialSeeds::from_trial_seed(42);
  EXPECT_NE(s.users, s.fading);
  EXPECT_NE(s.fading, s.symbols);
}

TEST(Trial, DistortionIgnoresLargeScaleDraw) {
  auto cfg = small_config();
  cfg.schemes = {Scheme::SingleRf};
  SurfaceCache cache(cfg);
  for (const auto& cb : {PhaseCodebook::quantized(2), PhaseCodebook::continuous()}) {
    TrialSeeds seeds = TrialSeeds::from_trial_seed(77);
    const double ref = run_trial_with_seeds(cfg, 3, 16, cb, seeds, cache).single_rf.distortion;
    for (std::uint64_t u = 0; u < 10; ++u) {
      seeds.users = 1000 + u;
      const double d = run_trial_with_seeds(cfg, 3, 16, cb, seeds, cache).single_rf.distortion;
      EXPECT_NEAR(d / ref, 1.0, 1e-12) << cb.label() << " draw " << u;
    }
  }
}

TEST(Trial, ErrorsCarryContext) {
  auto cfg = small_config();
  SurfaceCache cache(cfg);
  try {
    run_trial(cfg, 2, 15, PhaseCodebook::continuous(), 0, cache);
    FAIL() << "non-square surface accepted";
  } catch (const TrialError& e) {
    EXPECT_NE(std::string(e.what()).find("M=15"), std::string::npos);
  }
}

TEST(Cache, SharesSurfaces) {
  const auto cfg = small_config();
  SurfaceCache cache(cfg);
  const auto a = cache.get(16);
  EXPECT_EQ(a.get(), cache.get(16).get());
  EXPECT_EQ(*a, SurfaceCache::build(cfg, 16));
  EXPECT_NE(a.get(), cache.get(64).get());
}

TEST(Sweep, PointOrderAndSummary) {
  const auto cfg = small_config();
  const auto points = sweep_points(cfg);
  ASSERT_EQ(points.size(), 4u);
  EXPECT_EQ(points[0].codebook.label(), "2");
  EXPECT_EQ(points[1].users, 3);
  EXPECT_EQ(points[2].codebook.label(), "inf");

  const auto data = run_sweep(cfg, {.workers = 1});
  EXPECT_EQ(data.trials.size(), 4u * 2u * 4u);
  EXPECT_EQ(data.summary.size(), 8u);
  const auto* s = data.find(Scheme::SingleRf, 3, 16, "inf");
  ASSERT_NE(s, nullptr);
  EXPECT_EQ(s->trials, 4);
  EXPECT_EQ(s->failed, 0);
  EXPECT_EQ(data.find(Scheme::SingleRf, 9, 16, "inf"), nullptr);

  double sum = 0.0;
  for (const auto& t : data.trials)
    if (t.scheme == Scheme::SingleRf && t.users == 3 && t.bits == "inf") sum += t.distortion_db().value;
  EXPECT_NEAR(s->d_db_mean, sum / 4.0, 1e-12);
}

TEST(Sweep, SummaryCountsFailures) {
  std::vector<TrialResult> rows(3);
  rows[0].distortion = 0.1;
  rows[1].distortion = 0.01;
  rows[2].ok = false;
  const auto s = summarize(Scheme::SingleRf, SweepPoint{2, 16, PhaseCodebook::quantized(1)}, rows);
  EXPECT_EQ(s.trials, 2);
  EXPECT_EQ(s.failed, 1);
  EXPECT_NEAR(s.d_db_mean, -15.0, 1e-12);
  EXPECT_NEAR(s.d_linear_mean, 0.055, 1e-15);
}

TEST(Sweep, WorkerCountDoesNotChangeOutput) {
  const auto cfg = small_config();
  const auto one = scratch_dir("w1");
  const auto three = scratch_dir("w3");
  run_sweep(cfg, {.workers = 1, .output_dir = one});
  run_sweep(cfg, {.workers = 3, .output_dir = three});
  EXPECT_EQ(slurp(one / "trials.csv"), slurp(three / "trials.csv"));
  EXPECT_EQ(slurp(one / "summary.csv"), slurp(three / "summary.csv"));
  const auto manifest = nlohmann::json::parse(slurp(one / "manifest.json"));
  EXPECT_EQ(manifest["status"], "complete");
  EXPECT_EQ(to_json(config_from_json(manifest)), to_json(cfg));
  fs::remove_all(one);
  fs::remove_all(three);
}

TEST(Sweep, ResumeFromInterruptedRun) {
  const auto cfg = small_config();
  const auto full = scratch_dir("full");
  const auto cut = scratch_dir("cut");
  run_sweep(cfg, {.workers = 1, .output_dir = full});
  const std::string reference = slurp(full / "trials.csv");

  // Keep the header and the first eleven rows, then a torn line.
  fs::create_directories(cut);
  {
    std::istringstream in(reference);
    std::ofstream out(cut / "trials.partial.csv");
    std::string line;
    for (int i = 0; i < 12 && std::getline(in, line); ++i) out << line << '\n';
    out << "single_rf,3,16,2,1,123,-1";
  }
  int progress_calls = 0;
  run_sweep(cfg, {.workers = 2, .output_dir = cut, .resume = true,
                  .progress = [&](std::size_t, std::size_t) { ++progress_calls; }});
  EXPECT_EQ(slurp(cut / "trials.csv"), reference);
  EXPECT_EQ(progress_calls, 4);
  fs::remove_all(full);
  fs::remove_all(cut);
}

}  // namespace
}  // namespace rissrf
