#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynrt/drt.hpp"
#include "dynrt/edrt.hpp"
#include "dynrt/scene.hpp"

namespace dynrt {

enum class Mode { Rt, Drt, Edrt, Oracle };

// Throws std::invalid_argument for an unknown name.
Mode parse_mode(const std::string& name);
const char* mode_name(Mode m);

// Oracle positions are spaced dt / kOracleRefinement.
inline constexpr int kOracleRefinement = 10;

struct RunConfig {
  Mode mode = Mode::Edrt;
  std::string scene_path;  // empty: the default generated V2V scene
  double t_c = 1.0;
  double dt = 0.1;
  double duration = 2.0;
  std::string out = "out";
  std::uint64_t seed = 1;  // generator seed; unused with a scene file

  // Throws std::invalid_argument unless duration = k t_c and t_c = m dt with k, m >= 1.
  void validate() const;
  PredictionConfig prediction() const;
};

struct RunResult {
  Mode mode = Mode::Rt;
  std::vector<Snapshot> snapshots;
  std::vector<bool> from_rt;
  std::vector<double> rt_times;
  StageTiming timing;
  double total_s = 0.0;
  PredictionStats stats;
  std::vector<PredictionRound> rounds;  // E-DRT only
};

// Full RT at each time, one snapshot after another.
RunResult rt_run(const Scene& scene, const std::vector<double>& times);

// Times of every position the mode produces. Oracle times on the dt grid equal the
// other modes' times bit for bit.
std::vector<double> position_times(const RunConfig& config);

// Computes the run without touching the filesystem.
RunResult execute(const Scene& scene, const RunConfig& config);

// Scene file if configured, otherwise the V2V scenario generated from config.seed.
Scene load_run_scene(const RunConfig& config);

nlohmann::json run_manifest(const RunResult& result, const RunConfig& config, const Scene& scene);

// Writes snapshots.csv, pdp.csv, timing.json, manifest.json, plus lifetimes.csv (edrt)
// and errors.json (drt, edrt; against full RT at the same positions, over the predicted
// positions) into config.out.
// Throws std::runtime_error on I/O failure.
void write_artifacts(const RunResult& result, const RunConfig& config, const Scene& scene);

// Load, execute, write. Returns the result for callers that inspect it.
RunResult run(const RunConfig& config);

}  // namespace dynrt
