#include "dynrt/drt.hpp"

#include <cmath>
#include <stdexcept>

#include "dynrt/field.hpp"
#include "dynrt/geometry.hpp"
#include "dynrt/stopwatch.hpp"

namespace dynrt {

void PredictionConfig::validate() const {
  if (!(dt > 0.0) || !(t_c > dt)) throw std::invalid_argument("prediction config needs 0 < dt < t_c");
  const double k = t_c / dt;
  if (std::abs(k - std::round(k)) > 1e-9 * k) throw std::invalid_argument("t_c must be an integer multiple of dt");
  if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
}

int PredictionConfig::steps_per_window() const { return static_cast<int>(std::lround(t_c / dt)); }

InteractionTrajectory interaction_trajectory(const Path& path, const Scene& scene, double /*round_start*/) {
  // The construction is exact at every instant, so the reference time only fixes
  // which path is meant; the trajectory itself needs no state from it.
  return [sig = path.signature, &scene](double t) -> std::optional<std::vector<Vec3>> {
    const SceneInstant at = scene.at(t);
    PathGeometry g = solve_path(sig, at);
    if (!g.constructed) return std::nullopt;
    return std::vector<Vec3>(g.nodes.begin() + 1, g.nodes.end() - 1);
  };
}

namespace {

// Geometry of every reference path at t; entries are unconstructed where the image
// construction failed.
std::vector<PathGeometry> advance_geometry(const Snapshot& reference, const SceneInstant& at) {
  std::vector<PathGeometry> out;
  out.reserve(reference.paths.size());
  for (const auto& p : reference.paths) out.push_back(solve_path(p.signature, at));
  return out;
}

Snapshot fields_for(const Snapshot& reference, const std::vector<PathGeometry>& geoms, const SceneInstant& at,
                    PredictionStats* stats) {
  Snapshot s;
  s.time = at.time();
  s.paths.reserve(reference.paths.size());
  for (std::size_t i = 0; i < geoms.size(); ++i) {
    if (!geoms[i].constructed) {
      if (stats) ++stats->dropped_paths;
      continue;
    }
    s.paths.push_back(make_path(reference.paths[i].signature, geoms[i], at));
  }
  return s;
}

}  // namespace

Snapshot predict_snapshot_drt(const Snapshot& reference, const Scene& scene, double t, PredictionStats* stats) {
  const SceneInstant at = scene.at(t);
  return fields_for(reference, advance_geometry(reference, at), at, stats);
}

ModeRun drt_run(const Scene& scene, const PredictionConfig& config) {
  config.validate();
  Stopwatch total;
  ModeRun run;
  const int m = config.steps_per_window();

  for (int n = 0; n < config.rounds; ++n) {
    const double t0 = config.time_of(n * m);
    run.rt_times.push_back(t0);
    Snapshot ref = trace_snapshot(scene, t0, &run.timing);

    // Stages are timed as wall-clock blocks so the split stays meaningful with threads.
    const int count = m - 1;
    std::vector<SceneInstant> instants;
    instants.reserve(static_cast<std::size_t>(count));
    std::vector<std::vector<PathGeometry>> geoms(static_cast<std::size_t>(count));
    std::vector<Snapshot> predicted(static_cast<std::size_t>(count));
    std::vector<PredictionStats> stats(static_cast<std::size_t>(count));

    Stopwatch sw;
    for (int j = 1; j < m; ++j) instants.push_back(scene.at(config.time_of(n * m + j)));
#pragma omp parallel for schedule(dynamic, 1)
    for (int j = 0; j < count; ++j) geoms[j] = advance_geometry(ref, instants[j]);
    run.timing.geometry_s += sw.lap();
#pragma omp parallel for schedule(dynamic, 1)
    for (int j = 0; j < count; ++j) predicted[j] = fields_for(ref, geoms[j], instants[j], &stats[j]);
    run.timing.field_s += sw.lap();

    run.snapshots.push_back(std::move(ref));
    run.from_rt.push_back(true);
    for (int j = 0; j + 1 < m; ++j) {
      run.snapshots.push_back(std::move(predicted[j]));
      run.from_rt.push_back(false);
      run.stats += stats[j];
    }
  }

  if (config.close_last_window) {
    const double t_end = config.time_of(config.rounds * m);
    run.rt_times.push_back(t_end);
    run.snapshots.push_back(trace_snapshot(scene, t_end, &run.timing));
    run.from_rt.push_back(true);
  }
  run.total_s = total.seconds();
  return run;
}

}  // namespace dynrt
